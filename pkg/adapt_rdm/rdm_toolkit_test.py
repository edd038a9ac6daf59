import itertools
import numpy as np
import pytest
from adapt_rdm import rdm_toolkit
from adapt_rdm.integrals import to_spin_hamiltonian
from adapt_rdm.operator_algebra import (FermionOperator, jordan_wigner,
                                        qubit_hamiltonian)
from adapt_rdm.rdm_toolkit import (CumulantRdm, Rdm, antisymmetrize,
                                   cumulant2, energy_from_2rdm,
                                   grassmann_wedge, reconstruction_error,
                                   residual_one_body, residual_one_body_tensor,
                                   residual_two_body, residual_two_body_tensor,
                                   valdemoro3, wedge_11, wedge_111, wedge_21)
from adapt_rdm.statevector import (State, apply_exp_generator, expectation,
                                   measure_rdm, prepare_reference,
                                   sector_indices)


def real_sector_state(rng, n_qubits, n_electrons):
  amplitudes = np.zeros(1 << n_qubits)
  support = sector_indices(n_qubits, n_electrons)
  amplitudes[support] = rng.randn(len(support))
  return State(amplitudes, normalize=True)


def rotated_determinant(rng, occupied, n_qubits):
  """A determinant in a randomly rotated orbital basis."""
  terms = {}
  for p, q in itertools.combinations(range(n_qubits), 2):
    terms[((q, 1), (p, 0))] = rng.randn()
  generator = FermionOperator(terms)
  generator = generator - generator.hermitian_conjugate()
  return apply_exp_generator(
      prepare_reference(occupied, n_qubits),
      jordan_wigner(generator, n_qubits), 1.0)


def commutator_expectation(s, term, h_matrix):
  m = jordan_wigner(term, s.n_qubits).to_sparse()
  psi = s.amplitudes
  return np.vdot(psi, m @ (h_matrix @ psi) - h_matrix @ (m @ psi))


def test_permutations_with_sign():
  perms = dict(rdm_toolkit.permutations_with_sign(3))
  assert len(perms) == 6
  assert perms[(0, 1, 2)] == 1
  assert perms[(1, 0, 2)] == -1
  assert perms[(1, 2, 0)] == 1


def test_antisymmetrize_is_a_projection(rng):
  tensor = rng.randn(3, 3, 3, 3)
  once = antisymmetrize(tensor)
  np.testing.assert_allclose(antisymmetrize(once), once, atol=1e-12)
  np.testing.assert_allclose(once, -once.transpose(1, 0, 2, 3), atol=1e-12)
  np.testing.assert_allclose(once, -once.transpose(0, 1, 3, 2), atol=1e-12)


def test_rdm_wrappers():
  rdm = Rdm(1, np.diag([1.0, 0.0, 1.0]))
  assert rdm.n_orbitals == 3
  np.testing.assert_allclose(rdm.trace(), 2.0)
  assert rdm.matrix().shape == (3, 3)
  cumulant = CumulantRdm(2, np.zeros((3,) * 4))
  np.testing.assert_allclose(grassmann_wedge(cumulant, rdm), 0.0)


def test_wedge_11_of_determinant_is_2rdm(rng):
  s = rotated_determinant(rng, [0, 1, 3], 6)
  d1 = measure_rdm(s, 1)
  np.testing.assert_allclose(
      wedge_11(d1, d1), measure_rdm(s, 2).tensor, atol=1e-10)
  np.testing.assert_allclose(cumulant2(d1, measure_rdm(s, 2)).tensor, 0.0,
                             atol=1e-10)


def test_wedge_111_of_determinant_is_3rdm(rng):
  s = rotated_determinant(rng, [0, 2, 3], 6)
  np.testing.assert_allclose(
      wedge_111(measure_rdm(s, 1)), measure_rdm(s, 3).tensor, atol=1e-10)


def test_wedge_is_symmetric_for_even_factors(rng):
  a = rng.randn(3, 3)
  b = rng.randn(3, 3)
  np.testing.assert_allclose(wedge_11(a, b), wedge_11(b, a), atol=1e-12)


def test_valdemoro_exact_on_determinants(rng):
  for occupied in [(0, 1, 2), (1, 2, 4, 5), (0, 1, 2, 3, 5)]:
    s = rotated_determinant(rng, occupied, 6)
    d1, d2, d3 = (measure_rdm(s, order) for order in (1, 2, 3))
    assert reconstruction_error(valdemoro3(d1, d2), d3) < 1e-10


def test_valdemoro_inexact_on_correlated_state(rng):
  s = real_sector_state(rng, 6, 3)
  d1, d2, d3 = (measure_rdm(s, order) for order in (1, 2, 3))
  reconstructed = valdemoro3(d1, d2)
  assert reconstructed.order == 3
  assert reconstruction_error(reconstructed, d3) > 1e-3


def test_wedge_errors():
  with pytest.raises(ValueError, match="mismatch"):
    grassmann_wedge(np.zeros((2, 2)), np.zeros((3, 3)))
  with pytest.raises(ValueError, match="limited"):
    wedge_21(np.zeros((17,) * 4), np.zeros((17, 17)))
  with pytest.raises(ValueError):
    wedge_11(np.zeros((2,) * 4), np.zeros((2, 2)))
  with pytest.raises(ValueError):
    grassmann_wedge(np.zeros((2, 3)), np.zeros((2, 2)))
  with pytest.raises(ValueError):
    valdemoro3(np.zeros((2, 2)), np.zeros((3,) * 4))


def test_energy_from_2rdm_matches_statevector(rng, random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 3, 1))
  amplitudes = np.zeros(64)
  support = sector_indices(6, 3, 1)
  amplitudes[support] = rng.randn(len(support))
  s = State(amplitudes, normalize=True)
  np.testing.assert_allclose(
      energy_from_2rdm(ham.h2_reduced, measure_rdm(s, 2)),
      expectation(s, qubit_hamiltonian(ham)),
      atol=1e-10)
  with pytest.raises(ValueError, match="Shape"):
    energy_from_2rdm(ham.h2_reduced, np.zeros((2,) * 4))


def test_one_body_residual_tensor_matches_commutators(rng, random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 3, 1))
  h_matrix = qubit_hamiltonian(ham).to_sparse()
  s = real_sector_state(rng, 6, 3)
  d1, d2 = measure_rdm(s, 1), measure_rdm(s, 2)
  c1 = residual_one_body_tensor(d1, d2, ham.h1, ham.v2)
  for i, j in itertools.product(range(6), repeat=2):
    expected = commutator_expectation(s, FermionOperator.excitation([i], [j]),
                                      h_matrix)
    np.testing.assert_allclose(c1[i, j].real, expected.real, atol=1e-10)
    np.testing.assert_allclose(
        residual_one_body(d1, d2, ham.h1, ham.v2, i, j), c1[i, j].real,
        atol=1e-12)


def test_two_body_residual_tensor_matches_commutators(rng, random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 3, 1))
  h_matrix = qubit_hamiltonian(ham).to_sparse()
  s = real_sector_state(rng, 6, 3)
  d2, d3 = measure_rdm(s, 2), measure_rdm(s, 3)
  c2 = residual_two_body_tensor(d2, d3, ham.h1, ham.v2)
  tuples = [tuple(rng.randint(0, 6, 4)) for _ in range(40)]
  tuples += [(2, 0, 1, 3), (4, 2, 0, 2), (5, 1, 3, 1)]
  for i, j, k, l in tuples:
    expected = commutator_expectation(
        s, FermionOperator.excitation([i, j], [k, l]), h_matrix)
    np.testing.assert_allclose(c2[i, j, k, l].real, expected.real, atol=1e-10)
    np.testing.assert_allclose(
        residual_two_body(d2, d3, ham.h1, ham.v2, i, j, k, l),
        c2[i, j, k, l].real,
        atol=1e-12)


def test_residual_index_errors(random_integrals):
  ham = to_spin_hamiltonian(random_integrals(2, 2))
  s = prepare_reference([0, 1], 4)
  d1, d2, d3 = (measure_rdm(s, order) for order in (1, 2, 3))
  with pytest.raises(IndexError):
    residual_one_body(d1, d2, ham.h1, ham.v2, 4, 0)
  with pytest.raises(IndexError):
    residual_two_body(d2, d3, ham.h1, ham.v2, 0, 1, 2, -1)


def test_residuals_vanish_on_eigenstate(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  matrix = qubit_hamiltonian(ham).to_matrix().real
  _, vectors = np.linalg.eigh(matrix)
  s = State(vectors[:, 0])
  d1, d2, d3 = (measure_rdm(s, order) for order in (1, 2, 3))
  c1 = residual_one_body_tensor(d1, d2, ham.h1, ham.v2)
  c2 = residual_two_body_tensor(d2, d3, ham.h1, ham.v2)
  np.testing.assert_allclose(c1, 0.0, atol=1e-10)
  np.testing.assert_allclose(c2, 0.0, atol=1e-10)


def test_two_body_residual_is_antisymmetric(rng, random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 3, 1))
  s = real_sector_state(rng, 6, 3)
  d2, d3 = measure_rdm(s, 2), measure_rdm(s, 3)
  c2 = residual_two_body_tensor(d2, d3, ham.h1, ham.v2)
  np.testing.assert_allclose(c2, -c2.transpose(1, 0, 2, 3), atol=1e-10)
  np.testing.assert_allclose(c2, -c2.transpose(0, 1, 3, 2), atol=1e-10)
  for i, j, k, l in [(0, 3, 1, 4), (2, 5, 5, 0), (1, 4, 2, 3)]:
    value = residual_two_body(d2, d3, ham.h1, ham.v2, i, j, k, l)
    np.testing.assert_allclose(
        residual_two_body(d2, d3, ham.h1, ham.v2, j, i, k, l), -value,
        atol=1e-10)
    np.testing.assert_allclose(
        residual_two_body(d2, d3, ham.h1, ham.v2, i, j, l, k), -value,
        atol=1e-10)


def test_two_body_residual_tensor_matches_per_index(rng, random_integrals):
  ham = to_spin_hamiltonian(random_integrals(2, 2))
  s = real_sector_state(rng, 4, 2)
  d2, d3 = measure_rdm(s, 2), measure_rdm(s, 3)
  c2 = residual_two_body_tensor(d2, d3, ham.h1, ham.v2)
  for i, j, k, l in itertools.product(range(4), repeat=4):
    np.testing.assert_allclose(
        residual_two_body(d2, d3, ham.h1, ham.v2, i, j, k, l),
        c2[i, j, k, l].real,
        atol=1e-12)

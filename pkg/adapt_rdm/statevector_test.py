import numpy as np
import pytest
from scipy import linalg
from scipy.sparse import linalg as sparse_linalg
from adapt_rdm import config
from adapt_rdm.integrals import hartree_fock_energy, to_spin_hamiltonian
from adapt_rdm.operator_algebra import (ANNIHILATE, FermionOperator,
                                        PauliSum, build_pool, jordan_wigner,
                                        qubit_hamiltonian, UNRESTRICTED_GSD)
from adapt_rdm.statevector import (State, annihilate, apply_exp_generator,
                                   apply_operator, check_spaces,
                                   dump_state_text, expectation, fuse_charges,
                                   leakage, load_state, measure_rdm, overlap,
                                   prepare_reference, save_state,
                                   sector_expectations, sector_indices,
                                   variance)


def random_state(rng, n_qubits, n_electrons=None, ms2=None):
  amplitudes = np.zeros(1 << n_qubits, dtype=complex)
  if n_electrons is None:
    support = np.arange(1 << n_qubits)
  else:
    support = sector_indices(n_qubits, n_electrons, ms2)
  amplitudes[support] = (rng.randn(len(support)) +
                         1j * rng.randn(len(support)))
  return State(amplitudes, normalize=True)


def test_state_validation():
  with pytest.raises(ValueError, match="power of two"):
    State(np.ones(3) / np.sqrt(3))
  with pytest.raises(ValueError, match="norm"):
    State(np.ones(4))
  with pytest.raises(ValueError):
    State(np.zeros(4), normalize=True)
  s = State(np.ones(4), normalize=True)
  assert s.n_qubits == 2
  assert s.dim == 4
  np.testing.assert_allclose(s.norm, 1.0)
  with pytest.raises(ValueError):
    s.amplitudes[0] = 0.0


def test_state_norm_tolerance():
  with pytest.raises(ValueError, match="norm"):
    State(np.array([1.0 + 1e-9, 0.0, 0.0, 0.0]))
  s = State(np.array([1.0 + 1e-12, 0.0, 0.0, 0.0]))
  assert abs(s.norm - 1.0) < config.NORM_TOLERANCE


def test_prepare_reference():
  s = prepare_reference([0, 1], 4)
  assert s.amplitudes[0b0011] == 1.0
  with pytest.raises(ValueError, match="Duplicate"):
    prepare_reference([0, 0], 4)
  with pytest.raises(ValueError):
    prepare_reference([4], 4)


def test_check_spaces():
  with pytest.raises(ValueError, match="mismatch"):
    check_spaces(prepare_reference([0], 2), prepare_reference([0], 3))


def test_fuse_charges_matches_popcount():
  number = fuse_charges([[0, 1]] * 3)
  np.testing.assert_array_equal(number, [0, 1, 1, 2, 1, 2, 2, 3])


def test_sector_indices():
  np.testing.assert_array_equal(sector_indices(4, 2, 0), [0b0011, 0b0110,
                                                         0b1001, 0b1100])
  assert len(sector_indices(4, 2)) == 6
  assert len(sector_indices(12, 6, 0)) == 400


def test_annihilate_sign():
  vector = prepare_reference([0, 2], 3).amplitudes
  # a_2 passes the occupied orbital 0.
  out = annihilate(vector, 2, 3)
  assert out[0b001] == -1.0
  out = annihilate(vector, 0, 3)
  assert out[0b100] == 1.0
  assert not np.any(annihilate(vector, 1, 3))


def test_annihilate_matches_jordan_wigner(rng):
  s = random_state(rng, 4)
  for p in range(4):
    matrix = jordan_wigner(FermionOperator.ladder(p, ANNIHILATE), 4).to_sparse()
    np.testing.assert_allclose(
        annihilate(s.amplitudes, p, 4), matrix @ s.amplitudes, atol=1e-12)


def test_expectation_and_variance_of_eigenstate(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  qubit_h = qubit_hamiltonian(ham)
  matrix = qubit_h.to_matrix()
  values, vectors = np.linalg.eigh(matrix)
  ground = State(vectors[:, 0])
  np.testing.assert_allclose(expectation(ground, qubit_h), values[0])
  assert abs(variance(ground, qubit_h)) < 1e-10
  hf = prepare_reference([0, 1], 4)
  np.testing.assert_allclose(
      expectation(hf, qubit_h) + ham.e_core, hartree_fock_energy(h2_integrals))
  assert variance(hf, qubit_h) > 1e-3


def test_expectation_accepts_operator_types(rng):
  s = random_state(rng, 3)
  op = PauliSum.from_labels({"XZI": 0.3, "IYY": -0.2, "ZZZ": 1.1})
  expected = expectation(s, op)
  matrix = op.to_sparse()
  np.testing.assert_allclose(expectation(s, matrix), expected)
  np.testing.assert_allclose(expectation(s, matrix.toarray()), expected)
  np.testing.assert_allclose(
      expectation(s, sparse_linalg.aslinearoperator(matrix)), expected)
  np.testing.assert_allclose(expectation(s, lambda v: matrix @ v), expected)
  with pytest.raises(TypeError):
    expectation(s, "H")


def test_expectation_rejects_non_hermitian(rng):
  s = random_state(rng, 2)
  with pytest.raises(ValueError, match="Hermitian"):
    expectation(s, PauliSum.from_labels({"XY": 1.0j}))


def test_apply_operator_qubit_mismatch():
  with pytest.raises(ValueError):
    apply_operator(prepare_reference([0], 2), PauliSum.from_labels({"XXX": 1}))


def test_apply_exp_generator_is_unitary_and_exact(rng):
  generator = PauliSum.from_labels({"XY": 0.5j, "YX": -0.5j})
  s = random_state(rng, 2)
  theta = 0.7
  rotated = apply_exp_generator(s, generator, theta)
  exact = linalg.expm(theta * generator.to_matrix()) @ s.amplitudes
  np.testing.assert_allclose(rotated.amplitudes, exact, atol=1e-10)
  assert apply_exp_generator(s, generator, 0.0) is s


def test_apply_exp_generator_norm_drift(rng):
  pool = build_pool(2, UNRESTRICTED_GSD)
  s = prepare_reference([0, 1], 4)
  for step in range(1000):
    element = pool[step % len(pool)]
    s = apply_exp_generator(s, element.qubit_generator, rng.uniform(-1, 1))
  assert abs(s.norm - 1.0) < config.NORM_TOLERANCE
  assert leakage(s, 2, 0) < 1e-10


def test_apply_exp_generator_errors():
  s = prepare_reference([0], 2)
  with pytest.raises(ValueError):
    apply_exp_generator(s, PauliSum.from_labels({"XXX": 1j}), 0.1)
  with pytest.raises(ValueError, match="neither"):
    apply_exp_generator(s, PauliSum.from_labels({"XY": 1.0, "YX": 1.0j}), 0.1)


def test_overlap(rng):
  a = random_state(rng, 3)
  b = random_state(rng, 3)
  np.testing.assert_allclose(overlap(a, b), np.vdot(a.amplitudes,
                                                    b.amplitudes))
  np.testing.assert_allclose(overlap(a, a), 1.0)


def test_leakage(rng):
  s = random_state(rng, 4, 2, 0)
  assert leakage(s, 2, 0) == 0.0
  assert leakage(s, 2) == 0.0
  assert leakage(s, 3) > 0.0


@pytest.mark.parametrize("order", [1, 2, 3])
def test_rdm_trace_and_antisymmetry(rng, order):
  n_electrons = 3
  s = random_state(rng, 6, n_electrons, 1)
  rdm = measure_rdm(s, order)
  expected = {1: 3.0, 2: 3.0, 3: 1.0}[order]
  np.testing.assert_allclose(rdm.trace(), expected, atol=1e-10)
  matrix = rdm.matrix()
  np.testing.assert_allclose(matrix, matrix.conj().T, atol=1e-12)
  if order > 1:
    np.testing.assert_allclose(
        rdm.tensor, -np.swapaxes(rdm.tensor, 0, 1), atol=1e-12)
    np.testing.assert_allclose(
        rdm.tensor, -np.swapaxes(rdm.tensor, order, order + 1), atol=1e-12)


def test_rdm_of_determinant():
  s = prepare_reference([0, 3], 4)
  d1 = measure_rdm(s, 1).tensor
  np.testing.assert_allclose(np.diag(d1), [1, 0, 0, 1])
  d2 = measure_rdm(s, 2).tensor
  np.testing.assert_allclose(d2[0, 3, 0, 3], 0.5)
  np.testing.assert_allclose(d2[3, 0, 0, 3], -0.5)


def test_rdm_matches_ladder_products(rng):
  s = random_state(rng, 4, 2)
  d2 = measure_rdm(s, 2).tensor
  op = FermionOperator.excitation([2, 1], [0, 3])
  matrix = jordan_wigner(op, 4).to_sparse()
  value = np.vdot(s.amplitudes, matrix @ s.amplitudes)
  # D[p, q, r, s] = 1/2 <a^+_p a^+_q a_s a_r>
  np.testing.assert_allclose(d2[2, 1, 3, 0], 0.5 * value, atol=1e-12)


def test_rdm_order_errors():
  s = prepare_reference([0], 2)
  with pytest.raises(ValueError):
    measure_rdm(s, 4)
  with pytest.raises(ValueError):
    measure_rdm(s, 3)


def test_sector_expectations():
  n, sz, s2 = sector_expectations(prepare_reference([0, 2], 4))
  np.testing.assert_allclose([n, sz, s2], [2.0, 1.0, 2.0], atol=1e-12)
  # Open-shell Ms = 0 determinant: equal singlet/triplet mixture.
  n, sz, s2 = sector_expectations(prepare_reference([0, 3], 4))
  np.testing.assert_allclose([n, sz, s2], [2.0, 0.0, 1.0], atol=1e-12)
  with pytest.raises(ValueError):
    sector_expectations(prepare_reference([0], 3))


def test_save_and_load_state(rng, tmp_path):
  s = random_state(rng, 3)
  path = str(tmp_path / "state.h5")
  save_state(s, path, label="random")
  loaded = load_state(path)
  np.testing.assert_allclose(loaded.amplitudes, s.amplitudes)


def test_dump_state_text():
  text = dump_state_text(prepare_reference([1], 2))
  assert text == "2 1.0000000000000000e+00 0.0000000000000000e+00"

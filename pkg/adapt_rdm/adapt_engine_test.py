import numpy as np
import pandas as pd
import pytest
from adapt_rdm import adapt_engine
from adapt_rdm.adapt_engine import (AdaptConfig, ConsistencyError,
                                    measurement_cost, ranking_overlap,
                                    residual_norm, residuals_exact,
                                    residuals_rdm, run_adapt, scaling_fit,
                                    select_operators, trace_to_frame)
from adapt_rdm.integrals import to_spin_hamiltonian
from adapt_rdm.operator_algebra import (SPIN_ADAPTED_GSD, UNRESTRICTED_GSD,
                                        OperatorPool, build_pool,
                                        qubit_hamiltonian)
from adapt_rdm.optimizer import OptimizeResult
from adapt_rdm.statevector import (State, apply_exp_generator,
                                   prepare_reference, sector_indices)


def sector_ground(qubit_h, n_qubits, n_electrons, ms2=0):
  indices = sector_indices(n_qubits, n_electrons, ms2)
  block = qubit_h.to_matrix()[np.ix_(indices, indices)]
  values, vectors = np.linalg.eigh(block)
  full = np.zeros(2**n_qubits, dtype=complex)
  full[indices] = vectors[:, 0]
  return values[0], full


def evolved_state(rng, pool, reference, steps=5):
  s = reference
  for u in rng.choice(len(pool), size=steps, replace=False):
    s = apply_exp_generator(s, pool[int(u)].qubit_generator, rng.randn())
  return s


@pytest.mark.parametrize("kwargs, match", [
    (dict(variant="adapt_x"), "variant"),
    (dict(n_update=0), "n_update"),
    (dict(variant="adapt_vx", n_aux=None), "n_aux"),
    (dict(variant="adapt_vx", n_aux=2, n_update=3), "n_aux"),
    (dict(criterion="gradient"), "criterion"),
    (dict(variant="adapt_v", criterion="residual_norm"), "exact residuals"),
    (dict(epsilon=0.0), "epsilon"),
    (dict(max_iterations=-1), "max_iterations"),
    (dict(pool_kind="qubit"), "pool kind"),
])
def test_config_validation(kwargs, match):
  with pytest.raises(ValueError, match=match):
    AdaptConfig(**kwargs).validate()


def test_config_name():
  assert AdaptConfig(variant="adapt_vx", n_aux=30, n_update=10).name == (
      "adapt_vx(30,10)")
  assert AdaptConfig(variant="adapt_v", n_update=5).name == "adapt_v(5)"
  AdaptConfig(variant="adapt_rdm", criterion="residual_norm").validate()


def test_select_operators():
  assert select_operators([0.3, -1.0, 0.5], 2) == [1, 2]
  assert select_operators([0.2, -0.2, 0.1], 2) == [0, 1]
  with pytest.warns(UserWarning, match="pool of 3"):
    assert select_operators([0.3, -1.0, 0.5], 5) == [1, 2, 0]
  with pytest.raises(ValueError):
    select_operators([1.0], 0)


def test_ranking_overlap():
  a = np.array([0.5, -0.4, 0.3, 0.2, 0.1])
  assert ranking_overlap(a, a, top=3) == 1.0
  b = np.array([0.1, 0.2, 0.3, 0.4, 0.5])
  assert ranking_overlap(a, b, top=2) == 0.0
  assert ranking_overlap(a, b, top=10) == 1.0


@pytest.mark.parametrize("kind", [SPIN_ADAPTED_GSD, UNRESTRICTED_GSD])
def test_rdm_residuals_match_exact(rng, random_integrals, kind):
  ham = to_spin_hamiltonian(random_integrals(3, 4))
  pool = build_pool(3, kind)
  h_matrix = qubit_hamiltonian(ham).to_sparse()
  s = evolved_state(rng, pool, prepare_reference([0, 1, 2, 3], 6))
  exact = residuals_exact(s, pool, h_matrix)
  np.testing.assert_allclose(
      residuals_rdm(s, pool, ham.h1, ham.v2, "exact3"), exact, atol=1e-9)
  subset = [3, 0, 5]
  np.testing.assert_allclose(
      residuals_exact(s, pool, h_matrix, subset), exact[subset])


def test_valdemoro_residuals_exact_on_determinant(random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 4))
  pool = build_pool(3, UNRESTRICTED_GSD)
  s = prepare_reference([0, 1, 2, 3], 6)
  np.testing.assert_allclose(
      residuals_rdm(s, pool, ham.h1, ham.v2, "valdemoro"),
      residuals_rdm(s, pool, ham.h1, ham.v2, "exact3"),
      atol=1e-10)
  with pytest.raises(ValueError, match="mode"):
    residuals_rdm(s, pool, ham.h1, ham.v2, "cumulant")


def test_residuals_vanish_on_eigenstate(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  qubit_h = qubit_hamiltonian(ham)
  pool = build_pool(2, UNRESTRICTED_GSD)
  _, vector = sector_ground(qubit_h, 4, 2)
  s = State(vector)
  assert residual_norm(residuals_exact(s, pool, qubit_h.to_sparse())) < 1e-8
  assert residual_norm(residuals_rdm(s, pool, ham.h1, ham.v2)) < 1e-8


@pytest.mark.parametrize("variant", ["adapt", "adapt_rdm", "adapt_v"])
def test_run_adapt_h2_reaches_fci(h2_integrals, variant):
  ham = to_spin_hamiltonian(h2_integrals)
  qubit_h = qubit_hamiltonian(ham)
  pool = build_pool(2, SPIN_ADAPTED_GSD)
  e_fci, _ = sector_ground(qubit_h, 4, 2)
  trace = run_adapt(
      AdaptConfig(variant=variant, epsilon=1e-8), ham, pool, qubit_h=qubit_h)
  assert trace.converged
  assert trace.reason == adapt_engine.CONVERGED_VARIANCE
  np.testing.assert_allclose(trace.energy, e_fci + ham.e_core, atol=1e-8)
  np.testing.assert_allclose(trace.objective, trace.energy)
  assert trace.variance < 1e-8
  assert trace.n_parameters == len(trace.parameters)
  assert trace.labels == tuple(pool[u].label for u in trace.operators)


def test_run_adapt_records(random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 4))
  pool = build_pool(3, SPIN_ADAPTED_GSD)
  cfg = AdaptConfig(variant="adapt", n_update=2, max_iterations=4,
                    epsilon=1e-12)
  trace = run_adapt(cfg, ham, pool)
  energies = [r.energy for r in trace.records]
  assert all(b <= a + 1e-10 for a, b in zip(energies, energies[1:]))
  counts = [r.n_parameters for r in trace.records]
  assert counts == [2 * (k + 1) for k in range(len(counts))]
  assert trace.n_iterations == len(trace.records) <= 4
  for record in trace.records:
    assert len(record.selected) == 2
    assert len(record.selected_residuals) == 2

  frame = trace_to_frame(trace)
  assert isinstance(frame, pd.DataFrame)
  assert list(frame.columns) == [
      "iteration", "selected", "residual_norm", "energy", "variance", "N_s",
      "bfgs_iterations", "bfgs_warnflag"
  ]
  assert len(frame) == trace.n_iterations


def test_rdm_variant_follows_exact_selection(random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 4))
  pool = build_pool(3, SPIN_ADAPTED_GSD)
  qubit_h = qubit_hamiltonian(ham)
  exact = run_adapt(
      AdaptConfig(variant="adapt", max_iterations=3), ham, pool,
      qubit_h=qubit_h)
  rdm = run_adapt(
      AdaptConfig(variant="adapt_rdm", max_iterations=3), ham, pool,
      qubit_h=qubit_h)
  assert rdm.operators == exact.operators
  np.testing.assert_allclose(rdm.energy, exact.energy, atol=1e-9)


def test_vx_with_full_screen_matches_adapt(random_integrals):
  ham = to_spin_hamiltonian(random_integrals(3, 4))
  pool = build_pool(3, SPIN_ADAPTED_GSD)
  qubit_h = qubit_hamiltonian(ham)
  exact = run_adapt(
      AdaptConfig(variant="adapt", max_iterations=3), ham, pool,
      qubit_h=qubit_h)
  vx = run_adapt(
      AdaptConfig(variant="adapt_vx", n_aux=len(pool), max_iterations=3),
      ham, pool, qubit_h=qubit_h)
  assert vx.operators == exact.operators
  for a, b in zip(vx.records, exact.records):
    np.testing.assert_allclose(a.selected_residuals, b.selected_residuals,
                               atol=1e-9)


def test_residual_norm_criterion(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  pool = build_pool(2, SPIN_ADAPTED_GSD)
  trace = run_adapt(
      AdaptConfig(criterion="residual_norm", epsilon=1e-6), ham, pool)
  assert trace.reason == adapt_engine.CONVERGED_RESIDUAL
  assert trace.converged


def test_zero_iterations_returns_reference(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  pool = build_pool(2, SPIN_ADAPTED_GSD)
  trace = run_adapt(AdaptConfig(max_iterations=0), ham, pool)
  assert trace.reason == adapt_engine.STALLED_ITERATIONS
  assert not trace.converged
  assert trace.n_iterations == 0
  np.testing.assert_allclose(trace.energy, -1.1166843871, atol=1e-8)


def test_pool_size_mismatch(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  with pytest.raises(ValueError, match="qubits"):
    run_adapt(AdaptConfig(), ham, build_pool(3, SPIN_ADAPTED_GSD))


def test_rising_objective_raises(h2_integrals, monkeypatch):
  ham = to_spin_hamiltonian(h2_integrals)
  pool = build_pool(2, SPIN_ADAPTED_GSD)

  def bad_minimize(obj, theta0, maxiter=None):
    energy, _ = obj.value_and_gradient(theta0)
    return OptimizeResult(theta0, energy + 1.0, 0, 1, 0.0, 0, "")

  monkeypatch.setattr(adapt_engine, "minimize", bad_minimize)
  with pytest.raises(ConsistencyError, match="raised the objective"):
    run_adapt(AdaptConfig(), ham, pool)


@pytest.mark.parametrize("variant, slope", [
    ("adapt", 8.0),
    ("adapt_rdm", 6.0),
    ("adapt_v", 4.0),
])
def test_measurement_scaling(variant, slope):
  cfg = AdaptConfig(variant=variant)
  sizes = [8, 12, 16, 20]
  counts = [measurement_cost(cfg, n).residual_terms for n in sizes]
  assert abs(scaling_fit(sizes, counts) - slope) < 0.3


def test_measurement_cost_small_and_vx():
  for variant in ("adapt", "adapt_rdm", "adapt_v"):
    assert measurement_cost(AdaptConfig(variant=variant),
                            1).residual_terms in (0, 1)
  vx = AdaptConfig(variant="adapt_vx", n_aux=30, n_update=10)
  report = measurement_cost(vx, 8)
  assert report.ham_terms == 8**2 + 8**4
  assert report.residual_terms == 8**2 + 8**4 + 30 * (8**2 + 8**4)
  assert report.variant == "adapt_vx(30,10)"
  unique = measurement_cost(AdaptConfig(variant="adapt_v"), 4, unique=True)
  assert unique.residual_terms == 4 * 5 // 2 + 6 * 7 // 2


def test_measurement_cost_from_trace(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  pool = build_pool(2, SPIN_ADAPTED_GSD)
  cfg = AdaptConfig()
  trace = run_adapt(cfg, ham, pool)
  report = measurement_cost(cfg, 4, trace, pool_size=len(pool), ham_terms=15)
  assert report.residual_terms == len(pool) * 15
  assert report.n_parameters == trace.n_parameters
  assert report.n_iterations == trace.n_iterations


def test_scaling_fit_power_law():
  sizes = [2, 4, 8]
  assert abs(scaling_fit(sizes, [3 * n**5 for n in sizes]) - 5.0) < 1e-9


def test_single_orbital_has_empty_pool(random_integrals):
  mi = random_integrals(1, 2)
  ham = to_spin_hamiltonian(mi)
  pool = build_pool(1, UNRESTRICTED_GSD)
  assert len(pool) == 0
  s = prepare_reference([0, 1], 2)
  for mode in ("exact3", "valdemoro"):
    assert residuals_rdm(s, pool, ham.h1, ham.v2, mode).shape == (0,)
  hf = 2 * mi.h_spatial[0, 0] + mi.eri_spatial[0, 0, 0, 0] + mi.e_core
  for variant in ("adapt", "adapt_rdm", "adapt_v"):
    trace = run_adapt(AdaptConfig(variant=variant), ham, pool)
    assert trace.n_parameters == 0
    np.testing.assert_allclose(trace.energy, hf, atol=1e-10)


def test_empty_pool_stops(h2_integrals):
  ham = to_spin_hamiltonian(h2_integrals)
  pool = OperatorPool(SPIN_ADAPTED_GSD, 2, [])
  trace = run_adapt(AdaptConfig(variant="adapt_rdm"), ham, pool)
  assert trace.reason == adapt_engine.EMPTY_POOL
  assert not trace.converged
  np.testing.assert_allclose(trace.energy, -1.1166843871, atol=1e-8)


def test_measurement_cost_estimates_parameters():
  cfg = AdaptConfig(variant="adapt_v", n_update=30)
  report = measurement_cost(cfg, 12, n_iterations=4)
  assert (report.n_parameters, report.n_iterations) == (120, 4)
  report = measurement_cost(cfg, 12)
  assert (report.n_parameters, report.n_iterations) == (0, 0)

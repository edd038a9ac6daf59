# Copyright 2020 The adapt-rdm Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Adaptive ansatz growth: exact ADAPT, ADAPT-RDM, ADAPT-V and ADAPT-Vx.

Each iteration ranks the pool by the energy gradient of every generator at
zero amplitude, `R_u = <psi|[H, tau_u]|psi>`, appends the top-ranked
generators with zero parameters and re-optimizes all parameters.

* `adapt` evaluates `R_u` on the statevector.
* `adapt_rdm` evaluates it from the 1-, 2- and measured 3-RDM.
* `adapt_v` evaluates it from the 1-, 2- and Valdemoro-reconstructed 3-RDM.
* `adapt_vx` screens the pool with the Valdemoro residuals down to
  `n_aux` candidates and ranks those by their exact residuals.
"""
import logging
import math
import warnings
from typing import (Any, Callable, List, NamedTuple, Optional, Sequence, Text,
                    Tuple)
import numpy as np
import pandas as pd
from adapt_rdm import config
from adapt_rdm import rdm_toolkit
from adapt_rdm.integrals import SpinHamiltonian
from adapt_rdm.operator_algebra import (OperatorPool, PauliSum,
                                        SPIN_ADAPTED_GSD, POOL_KINDS,
                                        qubit_hamiltonian)
from adapt_rdm.optimizer import Ansatz, minimize
from adapt_rdm.statevector import (Operator, State, apply_operator,
                                   expectation, measure_rdm, operator_action,
                                   prepare_reference, variance)

logger = logging.getLogger(__name__)
Tensor = Any

VARIANTS = ("adapt", "adapt_rdm", "adapt_v", "adapt_vx")
CRITERIA = ("variance", "residual_norm")

CONVERGED_VARIANCE = "variance"
CONVERGED_RESIDUAL = "residual_norm"
STALLED_ENERGY = "energy_stall"
STALLED_ITERATIONS = "max_iterations"
EMPTY_POOL = "empty_pool"
CONVERGED_REASONS = (CONVERGED_VARIANCE, CONVERGED_RESIDUAL)


class ConsistencyError(RuntimeError):
  """The re-optimized energy rose above the previous iteration's."""


class AdaptConfig(NamedTuple):
  """Settings of one ADAPT run.

  Attributes:
    variant: One of `adapt`, `adapt_rdm`, `adapt_v`, `adapt_vx`.
    n_update: Generators appended per iteration.
    n_aux: Screened candidates per iteration (`adapt_vx` only).
    epsilon: Convergence threshold on the variance or the residual norm.
    criterion: `variance` or `residual_norm` (exact residuals only).
    energy_stall: Stop when an iteration lowers the energy by less.
    max_iterations: Iteration limit.
    pool_kind: Pool used when the caller does not supply one.
    occupied: Reference occupation; None selects the aufbau determinant.
    max_bfgs_iterations: BFGS iteration limit per iteration.
  """
  variant: Text = "adapt"
  n_update: int = 1
  n_aux: Optional[int] = None
  epsilon: float = config.DEFAULT_EPSILON
  criterion: Text = "variance"
  energy_stall: float = config.ENERGY_STALL
  max_iterations: int = config.DEFAULT_MAX_ITERATIONS
  pool_kind: Text = SPIN_ADAPTED_GSD
  occupied: Optional[Tuple[int, ...]] = None
  max_bfgs_iterations: int = config.BFGS_MAXITER

  def validate(self) -> None:
    """Raise `ValueError` for inconsistent settings."""
    if self.variant not in VARIANTS:
      raise ValueError("Unknown variant {!r}; expected one of {}.".format(
          self.variant, VARIANTS))
    if self.n_update < 1:
      raise ValueError("n_update = {} must be at least 1.".format(
          self.n_update))
    if self.variant == "adapt_vx":
      if self.n_aux is None or self.n_aux < self.n_update:
        raise ValueError("adapt_vx needs n_aux >= n_update, got n_aux = {} "
                         "and n_update = {}.".format(self.n_aux,
                                                     self.n_update))
    if self.criterion not in CRITERIA:
      raise ValueError("Unknown criterion {!r}; expected one of {}.".format(
          self.criterion, CRITERIA))
    if self.criterion == "residual_norm" and self.variant not in ("adapt",
                                                                  "adapt_rdm"):
      raise ValueError("The residual-norm criterion needs exact residuals; "
                       "{} uses reconstructed ones.".format(self.variant))
    if self.epsilon <= 0:
      raise ValueError("epsilon = {} must be positive.".format(self.epsilon))
    if self.max_iterations < 0:
      raise ValueError("max_iterations = {} must be non-negative.".format(
          self.max_iterations))
    if self.pool_kind not in POOL_KINDS:
      raise ValueError("Unknown pool kind {!r}.".format(self.pool_kind))

  @property
  def name(self) -> Text:
    """Display name such as `adapt_vx(30,10)`."""
    if self.variant == "adapt_vx":
      return "adapt_vx({},{})".format(self.n_aux, self.n_update)
    return "{}({})".format(self.variant, self.n_update)


class IterationRecord(NamedTuple):
  """Diagnostics of one ADAPT iteration."""
  iteration: int
  selected: Tuple[int, ...]
  labels: Tuple[Text, ...]
  residual_norm: float
  selected_residuals: Tuple[float, ...]
  energy: float
  variance: float
  n_parameters: int
  optimizer_iterations: int
  optimizer_warnflag: int


class AnsatzTrace(NamedTuple):
  """Result of `run_adapt`.

  Attributes:
    records: One `IterationRecord` per iteration.
    operators: Pool indices of the ansatz generators, in application order.
    labels: Their labels.
    parameters: Optimized parameters.
    energy: Final `<H> + e_core`.
    objective: Final value of the minimized objective (equals `energy`
      unless a deflated operator was minimized).
    variance: Final variance of `H`.
    reason: Why the loop stopped.
    state: Final state.
  """
  records: Tuple[IterationRecord, ...]
  operators: Tuple[int, ...]
  labels: Tuple[Text, ...]
  parameters: Tensor
  energy: float
  objective: float
  variance: float
  reason: Text
  state: State

  @property
  def converged(self) -> bool:
    return self.reason in CONVERGED_REASONS

  @property
  def n_parameters(self) -> int:
    return len(self.operators)

  @property
  def n_iterations(self) -> int:
    return len(self.records)


def _pool_subset(pool: OperatorPool,
                 subset: Optional[Sequence[int]]) -> List[int]:
  return list(range(len(pool))) if subset is None else list(subset)


def residuals_exact(s: State,
                    pool: OperatorPool,
                    h: Operator,
                    subset: Optional[Sequence[int]] = None) -> Tensor:
  """`R_u = <s|[h, tau_u]|s> = 2 Re <h s|tau_u s>` on the statevector.

  Args:
    s: The state.
    pool: The pool.
    h: A Hermitian operator.
    subset: Pool indices to evaluate; defaults to all.
  Returns:
    Residuals in the order of `subset`.
  """
  hs = apply_operator(s, h)
  indices = _pool_subset(pool, subset)
  values = np.zeros(len(indices))
  for position, u in enumerate(indices):
    tau_s = pool[u].qubit_generator.generator_matrix() @ s.amplitudes
    values[position] = 2.0 * np.vdot(hs, tau_s).real
  return values


def residuals_rdm(s: State,
                  pool: OperatorPool,
                  h1: Tensor,
                  v2: Tensor,
                  mode: Text = "exact3",
                  d3: Optional[rdm_toolkit.RdmLike] = None) -> Tensor:
  """Residuals of every pool element from reduced density matrices.

  The commutator tensors `C1`, `C2` are built from the 1-, 2- and 3-RDM,
  and each generator `sum_t c_t term_t` gets `R = -Re sum_t c_t C(term_t)`.

  Args:
    s: The state.
    pool: The pool.
    h1: One-body Hamiltonian tensor.
    v2: Antisymmetrized two-body tensor.
    mode: `exact3` measures the 3-RDM, `valdemoro` reconstructs it.
    d3: Optional precomputed 3-RDM, overriding `mode`.
  Returns:
    One residual per pool element.
  """
  if len(pool) == 0:
    return np.zeros(0)
  d1 = measure_rdm(s, 1)
  d2 = measure_rdm(s, 2)
  if d3 is None:
    if mode == "exact3":
      d3 = measure_rdm(s, 3)
    elif mode == "valdemoro":
      d3 = rdm_toolkit.valdemoro3(d1, d2)
    else:
      raise ValueError("Unknown residual mode {!r}.".format(mode))
  c1 = rdm_toolkit.residual_one_body_tensor(d1, d2, h1, v2)
  c2 = rdm_toolkit.residual_two_body_tensor(d2, d3, h1, v2)
  m1, m2 = pool.rdm_maps()
  return -(m1 @ c1.ravel() + m2 @ c2.ravel()).real


def residual_norm(residuals: Tensor) -> float:
  return float(np.linalg.norm(residuals))


def select_operators(residuals: Tensor, n: int) -> List[int]:
  """Indices of the `n` largest `|R_u|`, ties resolved by lower index.

  Args:
    residuals: Residual vector.
    n: Number of indices wanted.
  Returns:
    The indices, largest first.
  Raises:
    ValueError: If `n < 1`.
  """
  if n < 1:
    raise ValueError("n = {} must be at least 1.".format(n))
  residuals = np.asarray(residuals)
  if n > residuals.shape[0]:
    warnings.warn("Requested {} operators from a pool of {}; using all.".format(
        n, residuals.shape[0]))
    n = residuals.shape[0]
  order = np.argsort(-np.abs(residuals), kind="stable")
  return [int(i) for i in order[:n]]


def ranking_overlap(a: Tensor, b: Tensor, top: int = 30) -> float:
  """Fraction of shared indices among the `top` largest `|a|` and `|b|`."""
  top = min(top, len(a))
  if top == 0:
    return 1.0
  shared = set(select_operators(a, top)) & set(select_operators(b, top))
  return len(shared) / top


def _overlap_correction(s: State, pool: OperatorPool, correction: Callable,
                        subset: Optional[Sequence[int]] = None) -> Tensor:
  return residuals_exact(s, pool, correction, subset)


def run_adapt(cfg: AdaptConfig,
              ham: SpinHamiltonian,
              pool: OperatorPool,
              effective: Optional[Operator] = None,
              reference: Optional[State] = None,
              qubit_h: Optional[PauliSum] = None) -> AnsatzTrace:
  """Grow and optimize an adaptive ansatz.

  Args:
    cfg: Run settings.
    ham: The Hamiltonian.
    pool: The operator pool.
    effective: Optional Hermitian operator minimized instead of `H`
      (e.g. a deflated Hamiltonian). It must differ from `H` by a term
      that RDMs cannot express, which is then added to the residuals from
      the statevector.
    reference: Optional reference state; defaults to the determinant of
      `cfg.occupied` or the aufbau determinant.
    qubit_h: Optional precomputed `qubit_hamiltonian(ham)`.
  Returns:
    The `AnsatzTrace`.
  Raises:
    ConsistencyError: If an iteration raises the objective by more than
      1e-10.
  """
  cfg.validate()
  if pool.n_qubits != ham.n_spin_orbitals:
    raise ValueError("Pool acts on {} qubits, Hamiltonian on {}.".format(
        pool.n_qubits, ham.n_spin_orbitals))
  qubit_h = qubit_hamiltonian(ham) if qubit_h is None else qubit_h
  h_matrix = qubit_h.to_sparse()
  if reference is None:
    occupied = cfg.occupied
    if occupied is None:
      n_alpha = (ham.n_electrons + ham.ms2) // 2
      n_beta = (ham.n_electrons - ham.ms2) // 2
      occupied = sorted([2 * i for i in range(n_alpha)] +
                        [2 * i + 1 for i in range(n_beta)])
    reference = prepare_reference(occupied, ham.n_spin_orbitals)
  target = h_matrix if effective is None else effective
  correction = None
  if effective is not None:
    apply_effective = operator_action(effective)
    correction = lambda v: apply_effective(v) - h_matrix @ v

  ansatz = Ansatz(reference)
  operators = []  # type: List[int]
  theta = np.zeros(0)
  state = reference
  objective = expectation(state, target) + ham.e_core
  records = []  # type: List[IterationRecord]
  reason = STALLED_ITERATIONS
  logger.info("%s: start objective %.12f", cfg.name, objective)

  for iteration in range(1, cfg.max_iterations + 1):
    current_variance = variance(state, h_matrix)
    if cfg.criterion == "variance" and current_variance < cfg.epsilon:
      reason = CONVERGED_VARIANCE
      break

    residuals = _variant_residuals(cfg, state, pool, ham, target, correction)
    norm = residual_norm(residuals)
    if cfg.criterion == "residual_norm" and norm < cfg.epsilon:
      reason = CONVERGED_RESIDUAL
      break
    if residuals.shape[0] == 0:
      reason = EMPTY_POOL
      break
    if cfg.variant == "adapt_vx":
      screened = sorted(select_operators(residuals, min(cfg.n_aux,
                                                        len(pool))))
      exact = residuals_exact(state, pool, target, screened)
      picks = select_operators(exact, cfg.n_update)
      chosen = [screened[i] for i in picks]
      chosen_values = exact[picks]
    else:
      chosen = select_operators(residuals, cfg.n_update)
      chosen_values = residuals[chosen]

    ansatz = ansatz.extend([pool[u].qubit_generator for u in chosen])
    operators.extend(chosen)
    theta0 = np.concatenate([theta, np.zeros(len(chosen))])
    result = minimize(
        ansatz.objective(target, ham.e_core),
        theta0,
        maxiter=cfg.max_bfgs_iterations)
    if result.energy > objective + config.MONOTONICITY_SLACK:
      raise ConsistencyError(
          "Iteration {} raised the objective from {:.12f} to {:.12f}.".format(
              iteration, objective, result.energy))
    theta = result.theta
    state = ansatz.prepare(theta)
    change = objective - result.energy
    objective = result.energy
    record = IterationRecord(
        iteration=iteration,
        selected=tuple(chosen),
        labels=tuple(pool[u].label for u in chosen),
        residual_norm=norm,
        selected_residuals=tuple(float(r) for r in chosen_values),
        energy=objective,
        variance=variance(state, h_matrix),
        n_parameters=len(operators),
        optimizer_iterations=result.iterations,
        optimizer_warnflag=result.warnflag)
    records.append(record)
    logger.info(
        "%s: iteration=%d selected=%s |R|=%.3e energy=%.12f variance=%.3e "
        "N_s=%d", cfg.name, iteration, ",".join(record.labels), norm,
        objective, record.variance, record.n_parameters)
    if change < cfg.energy_stall:
      reason = STALLED_ENERGY
      break
  final_variance = variance(state, h_matrix)
  if (reason == STALLED_ITERATIONS and cfg.criterion == "variance" and
      final_variance < cfg.epsilon):
    reason = CONVERGED_VARIANCE

  trace = AnsatzTrace(
      records=tuple(records),
      operators=tuple(operators),
      labels=tuple(pool[u].label for u in operators),
      parameters=theta,
      energy=expectation(state, h_matrix) + ham.e_core,
      objective=objective,
      variance=final_variance,
      reason=reason,
      state=state)
  logger.info("%s: stopped (%s) after %d iterations, energy %.12f", cfg.name,
              reason, trace.n_iterations, trace.energy)
  return trace


def _variant_residuals(cfg: AdaptConfig, state: State, pool: OperatorPool,
                       ham: SpinHamiltonian, target: Operator,
                       correction: Optional[Callable]) -> Tensor:
  """Residuals used for ranking, per variant."""
  if cfg.variant == "adapt":
    return residuals_exact(state, pool, target)
  mode = "exact3" if cfg.variant == "adapt_rdm" else "valdemoro"
  residuals = residuals_rdm(state, pool, ham.h1, ham.v2, mode)
  if correction is not None:
    residuals = residuals + _overlap_correction(state, pool, correction)
  return residuals


class CostReport(NamedTuple):
  """Measurement counts of one run or of a hypothetical one.

  Attributes:
    variant: The variant name.
    n_spin_orbitals: System size `N`.
    ham_terms: Terms measured for one energy evaluation.
    residual_terms: Terms measured for one residual-gradient evaluation.
    n_parameters: `N_s`, or its estimate `N_u * N_k`.
    n_iterations: `N_k`.
  """
  variant: Text
  n_spin_orbitals: int
  ham_terms: int
  residual_terms: int
  n_parameters: int
  n_iterations: int


def _rdm_elements(n: int, order: int, unique: bool) -> int:
  """Elements of an `order`-RDM on `n` spin orbitals."""
  if n < order:
    return 0
  if unique:
    tuples = math.comb(n, order)
    return tuples * (tuples + 1) // 2
  return n**(2 * order)


def measurement_cost(cfg: AdaptConfig,
                     n_spin_orbitals: int,
                     trace: Optional[AnsatzTrace] = None,
                     pool_size: Optional[int] = None,
                     ham_terms: Optional[int] = None,
                     unique: bool = False,
                     n_iterations: Optional[int] = None) -> CostReport:
  """Count measured terms per residual evaluation.

  Without `pool_size` and `ham_terms` the dense counts are used: the
  Hamiltonian and a generalized pool both scale as `N^2 + N^4`. Exact
  residuals measure one commutator per pool element; RDM variants measure
  RDM elements instead.

  Args:
    cfg: The run settings.
    n_spin_orbitals: `N`.
    trace: Optional completed run supplying `N_s` and `N_k`.
    pool_size: Optional actual pool size.
    ham_terms: Optional actual Hamiltonian term count.
    unique: Count symmetry-unique RDM elements instead of dense tensors.
    n_iterations: `N_k` of a hypothetical run, used without `trace`; `N_s`
      is then estimated as `N_u * N_k`.
  Returns:
    A `CostReport`.
  """
  n = n_spin_orbitals
  dense_ham = _rdm_elements(n, 1, unique) + _rdm_elements(n, 2, unique)
  if ham_terms is None:
    ham_terms = dense_ham
  if pool_size is None:
    pool_size = dense_ham if n >= 2 else 0
  rdm12 = _rdm_elements(n, 1, unique) + _rdm_elements(n, 2, unique)
  if cfg.variant == "adapt":
    residual_terms = pool_size * ham_terms
  elif cfg.variant == "adapt_rdm":
    residual_terms = rdm12 + _rdm_elements(n, 3, unique)
  elif cfg.variant == "adapt_v":
    residual_terms = rdm12
  else:
    residual_terms = rdm12 + min(cfg.n_aux or 0, pool_size) * ham_terms
  if trace is not None:
    n_iterations = trace.n_iterations
    n_parameters = trace.n_parameters
  else:
    n_iterations = n_iterations or 0
    n_parameters = cfg.n_update * n_iterations
  return CostReport(cfg.name, n, int(ham_terms), int(residual_terms),
                    n_parameters, n_iterations)


def scaling_fit(sizes: Sequence[int], counts: Sequence[int]) -> float:
  """Slope of `log(count)` against `log(N)`."""
  slope, _ = np.polyfit(np.log(sizes), np.log(counts), 1)
  return float(slope)


def trace_to_frame(trace: AnsatzTrace) -> pd.DataFrame:
  """Per-iteration records as a table."""
  rows = []
  for record in trace.records:
    rows.append({
        "iteration": record.iteration,
        "selected": " ".join(record.labels),
        "residual_norm": record.residual_norm,
        "energy": record.energy,
        "variance": record.variance,
        "N_s": record.n_parameters,
        "bfgs_iterations": record.optimizer_iterations,
        "bfgs_warnflag": record.optimizer_warnflag,
    })
  return pd.DataFrame(
      rows,
      columns=[
          "iteration", "selected", "residual_norm", "energy", "variance",
          "N_s", "bfgs_iterations", "bfgs_warnflag"
      ])

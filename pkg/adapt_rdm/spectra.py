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
"""Exact diagonalization, variational quantum deflation and curve statistics.

Energies returned by this module include the core energy; operators built
here act on the electronic part only.
"""
import logging
from typing import Any, List, NamedTuple, Optional, Sequence, Text, Tuple
import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg
from adapt_rdm import config
from adapt_rdm.adapt_engine import AdaptConfig, AnsatzTrace, run_adapt
from adapt_rdm.integrals import SpinHamiltonian
from adapt_rdm.operator_algebra import OperatorPool, PauliSum, qubit_hamiltonian
from adapt_rdm.optimizer import Ansatz
from adapt_rdm.statevector import (State, expectation, overlap,
                                   prepare_reference, sector_expectations,
                                   sector_indices)

logger = logging.getLogger(__name__)
Tensor = Any

PENALTY = "penalty"
PROJECTOR = "projector"
PENALTY_MODES = (PENALTY, PROJECTOR)


class VqdConvergenceError(RuntimeError):
  """No reference candidate converged.

  Attributes:
    candidates: The `CandidateRun` of every reference tried.
    best: The candidate with the lowest objective.
  """

  def __init__(self, message: Text, candidates: Sequence["CandidateRun"]):
    super().__init__(message)
    self.candidates = tuple(candidates)
    self.best = min(self.candidates, key=lambda c: c.trace.objective)


class EigenSolution(NamedTuple):
  """Lowest eigenpairs of a Hamiltonian within one symmetry sector.

  Attributes:
    energies: Ascending energies including the core energy.
    states: The eigenstates, embedded in the full qubit space.
    sector: `(n_electrons, ms2)`, `ms2` being twice the spin projection.
  """
  energies: Tensor
  states: Tuple[State, ...]
  sector: Tuple[int, int]


def _sector_matrix(h_matrix: sparse.spmatrix,
                   indices: Tensor) -> sparse.csr_matrix:
  return sparse.csr_matrix(h_matrix)[indices][:, indices]


def fci_solve(ham: SpinHamiltonian,
              sector: Optional[Tuple[int, int]] = None,
              k: int = 1,
              qubit_h: Optional[PauliSum] = None) -> EigenSolution:
  """Lowest `k` eigenpairs of `ham` in a particle-number / spin sector.

  Sectors with at most `config.DENSE_EIGH_MAX_DIMENSION` states are
  diagonalized densely, larger ones with Lanczos (`eigsh`).

  Args:
    ham: The Hamiltonian.
    sector: `(n_electrons, ms2)`; defaults to the Hamiltonian's own.
    k: Number of roots.
    qubit_h: Optional precomputed `qubit_hamiltonian(ham)`.
  Returns:
    An `EigenSolution`.
  Raises:
    ValueError: If `k < 1` or `k` exceeds the sector dimension.
  """
  if sector is None:
    sector = (ham.n_electrons, ham.ms2)
  n_electrons, ms2 = sector
  n_qubits = ham.n_spin_orbitals
  indices = sector_indices(n_qubits, n_electrons, ms2)
  if k < 1 or k > indices.shape[0]:
    raise ValueError("Requested {} roots from a sector of dimension {}.".format(
        k, indices.shape[0]))
  qubit_h = qubit_hamiltonian(ham) if qubit_h is None else qubit_h
  block = _sector_matrix(qubit_h.to_sparse(), indices)
  if indices.shape[0] <= config.DENSE_EIGH_MAX_DIMENSION or k >= indices.shape[
      0] - 1:
    values, vectors = np.linalg.eigh(block.toarray())
    values, vectors = values[:k], vectors[:, :k]
  else:
    v0 = np.ones(indices.shape[0]) / np.sqrt(indices.shape[0])
    values, vectors = sparse_linalg.eigsh(block, k=k, which="SA", v0=v0)
    order = np.argsort(values, kind="stable")
    values, vectors = values[order], vectors[:, order]
  states = []
  for i in range(k):
    full = np.zeros(1 << n_qubits, dtype=complex)
    full[indices] = vectors[:, i]
    states.append(State(full, normalize=True))
  return EigenSolution(values + ham.e_core, tuple(states), (n_electrons, ms2))


def gershgorin_upper_bound(ham: SpinHamiltonian,
                           sector: Optional[Tuple[int, int]] = None,
                           qubit_h: Optional[PauliSum] = None) -> float:
  """Upper bound on the sector spectrum from Gershgorin discs."""
  if sector is None:
    sector = (ham.n_electrons, ham.ms2)
  qubit_h = qubit_hamiltonian(ham) if qubit_h is None else qubit_h
  indices = sector_indices(ham.n_spin_orbitals, *sector)
  block = _sector_matrix(qubit_h.to_sparse(), indices)
  diagonal = block.diagonal().real
  radii = np.asarray(abs(block).sum(axis=1)).ravel() - np.abs(diagonal)
  return float(np.max(diagonal + radii)) + ham.e_core


def default_beta(upper_bound: float, e_ground: float) -> float:
  """Penalty weight `2 (E_max - E_0)`, large enough to lift any root."""
  return 2.0 * (upper_bound - e_ground)


class VqdConfig(NamedTuple):
  """Settings of a deflated excited-state run.

  Attributes:
    penalty_mode: `penalty` adds `sum_I beta_I |phi_I><phi_I|` to `H`;
      `projector` minimizes `P H P` with `P = 1 - sum_I |phi_I><phi_I|`.
    beta: Penalty weights, one per deflation state; empty selects
      `default_beta` for all.
    deflation_states: Previously converged roots.
    reference_candidates: Occupations to start from; empty uses the
      `AdaptConfig` reference.
    epsilon: Convergence threshold passed to the ADAPT run.
  """
  penalty_mode: Text = PENALTY
  beta: Tuple[float, ...] = ()
  deflation_states: Tuple[State, ...] = ()
  reference_candidates: Tuple[Tuple[int, ...], ...] = ()
  epsilon: float = config.DEFAULT_EPSILON

  def validate(self) -> None:
    if self.penalty_mode not in PENALTY_MODES:
      raise ValueError("Unknown penalty mode {!r}; expected one of {}.".format(
          self.penalty_mode, PENALTY_MODES))
    if self.beta and len(self.beta) != len(self.deflation_states):
      raise ValueError("Got {} penalty weights for {} deflation states.".format(
          len(self.beta), len(self.deflation_states)))
    if any(b <= 0 for b in self.beta):
      raise ValueError("Penalty weights must be positive, got {}.".format(
          self.beta))
    if self.epsilon <= 0:
      raise ValueError("epsilon = {} must be positive.".format(self.epsilon))


def effective_operator(h_matrix: sparse.spmatrix,
                       deflation_states: Sequence[State],
                       betas: Sequence[float] = (),
                       mode: Text = PENALTY) -> sparse_linalg.LinearOperator:
  """The deflated Hamiltonian as a matrix-free operator.

  Args:
    h_matrix: Electronic Hamiltonian matrix.
    deflation_states: States to deflate.
    betas: Penalty weights (penalty mode only).
    mode: `penalty` or `projector`.
  Returns:
    A Hermitian `LinearOperator`.
  """
  if mode not in PENALTY_MODES:
    raise ValueError("Unknown penalty mode {!r}.".format(mode))
  phis = np.array([s.amplitudes for s in deflation_states],
                  dtype=complex).reshape(
                      len(deflation_states), h_matrix.shape[0])
  if mode == PENALTY and len(betas) != len(deflation_states):
    raise ValueError("Got {} penalty weights for {} deflation states.".format(
        len(betas), len(deflation_states)))
  weights = np.asarray(betas, dtype=float)

  def penalty(v):
    return h_matrix @ v + phis.T @ (weights * (phis.conj() @ v))

  def project(v):
    return v - phis.T @ (phis.conj() @ v)

  def projector(v):
    return project(h_matrix @ project(v))

  matvec = penalty if mode == PENALTY else projector
  return sparse_linalg.LinearOperator(
      h_matrix.shape, matvec=matvec, rmatvec=matvec, dtype=complex)


def _betas(cfg: VqdConfig, ham: SpinHamiltonian,
           qubit_h: PauliSum) -> Tuple[float, ...]:
  if cfg.beta or not cfg.deflation_states:
    return tuple(cfg.beta)
  e_ground = min(
      expectation(s, qubit_h) for s in cfg.deflation_states) + ham.e_core
  beta = default_beta(gershgorin_upper_bound(ham, qubit_h=qubit_h), e_ground)
  return (beta,) * len(cfg.deflation_states)


def vqd_objective(theta: Tensor, ansatz: Ansatz, cfg: VqdConfig,
                  ham: SpinHamiltonian,
                  qubit_h: Optional[PauliSum] = None) -> float:
  """Deflated energy of the ansatz state, including the core energy.

  With no deflation states this is the plain energy.
  """
  cfg.validate()
  qubit_h = qubit_hamiltonian(ham) if qubit_h is None else qubit_h
  op = effective_operator(qubit_h.to_sparse(), cfg.deflation_states,
                          _betas(cfg, ham, qubit_h), cfg.penalty_mode)
  return expectation(ansatz.prepare(theta), op) + ham.e_core


class CandidateRun(NamedTuple):
  """One reference tried by `run_vqd`."""
  reference: Tuple[int, ...]
  trace: AnsatzTrace
  max_overlap: float


class VqdResult(NamedTuple):
  """Winning run of `run_vqd` and the diagnostics of every candidate."""
  trace: AnsatzTrace
  reference: Tuple[int, ...]
  candidates: Tuple[CandidateRun, ...]


def run_vqd(cfg: VqdConfig,
            adapt_cfg: AdaptConfig,
            ham: SpinHamiltonian,
            pool: OperatorPool,
            qubit_h: Optional[PauliSum] = None) -> VqdResult:
  """Find the next root by ADAPT on the deflated Hamiltonian.

  Every reference candidate is grown independently; the converged run with
  the lowest deflated objective wins.

  Args:
    cfg: Deflation settings.
    adapt_cfg: ADAPT settings; its `epsilon` is replaced by `cfg.epsilon`.
    ham: The Hamiltonian.
    pool: The operator pool.
    qubit_h: Optional precomputed `qubit_hamiltonian(ham)`.
  Returns:
    A `VqdResult`.
  Raises:
    VqdConvergenceError: If no candidate converged.
  """
  cfg.validate()
  qubit_h = qubit_hamiltonian(ham) if qubit_h is None else qubit_h
  betas = _betas(cfg, ham, qubit_h)
  effective = effective_operator(qubit_h.to_sparse(), cfg.deflation_states,
                                 betas, cfg.penalty_mode)
  references = list(cfg.reference_candidates) or [adapt_cfg.occupied]
  candidates = []
  for occupied in references:
    run_cfg = adapt_cfg._replace(
        epsilon=cfg.epsilon,
        occupied=None if occupied is None else tuple(occupied))
    trace = run_adapt(run_cfg, ham, pool, effective=effective,
                      qubit_h=qubit_h)
    max_overlap = max([abs(overlap(s, trace.state))
                       for s in cfg.deflation_states] + [0.0])
    candidate = CandidateRun(
        tuple(occupied) if occupied is not None else (), trace, max_overlap)
    candidates.append(candidate)
    logger.info("vqd reference %s: energy=%.12f objective=%.12f "
                "max_overlap=%.3e reason=%s", candidate.reference,
                trace.energy, trace.objective, max_overlap, trace.reason)
  converged = [c for c in candidates if c.trace.converged]
  if not converged:
    raise VqdConvergenceError(
        "None of the {} reference candidates converged.".format(
            len(candidates)), candidates)
  best = min(converged, key=lambda c: c.trace.objective)
  n, sz, s2 = sector_expectations(best.trace.state)
  logger.info("vqd root from reference %s: energy=%.12f <N>=%.6f <Sz>=%.6f "
              "<S^2>=%.6f", best.reference, best.trace.energy, n, sz, s2)
  return VqdResult(best.trace, best.reference, tuple(candidates))


def run_excited_states(adapt_cfg: AdaptConfig,
                       ham: SpinHamiltonian,
                       pool: OperatorPool,
                       n_roots: int,
                       vqd_cfg: VqdConfig = VqdConfig(),
                       qubit_h: Optional[PauliSum] = None) -> List[AnsatzTrace]:
  """Ground state and `n_roots - 1` excited states, deflating each found root.

  `vqd_cfg.deflation_states` seeds the deflation set; the reference
  candidates are used for every excited root.
  """
  if n_roots < 1:
    raise ValueError("n_roots = {} must be at least 1.".format(n_roots))
  qubit_h = qubit_hamiltonian(ham) if qubit_h is None else qubit_h
  ground = run_adapt(
      adapt_cfg._replace(epsilon=vqd_cfg.epsilon), ham, pool, qubit_h=qubit_h)
  traces = [ground]
  deflation = list(vqd_cfg.deflation_states) or [ground.state]
  for _ in range(1, n_roots):
    cfg = vqd_cfg._replace(
        deflation_states=tuple(deflation),
        beta=vqd_cfg.beta[:len(deflation)] if len(vqd_cfg.beta) >= len(
            deflation) else ())
    result = run_vqd(cfg, adapt_cfg, ham, pool, qubit_h=qubit_h)
    traces.append(result.trace)
    deflation.append(result.trace.state)
  return traces


def excitation_reference(occupied: Sequence[int], hole: int,
                         particle: int) -> Tuple[int, ...]:
  """Single excitation `hole -> particle` of a determinant.

  Raises:
    ValueError: If `hole` is empty, `particle` is occupied, or the
      excitation flips spin.
  """
  occupied = list(occupied)
  if hole not in occupied:
    raise ValueError("Hole {} is not occupied in {}.".format(hole, occupied))
  if particle in occupied:
    raise ValueError("Particle {} is already occupied in {}.".format(
        particle, occupied))
  if hole % 2 != particle % 2:
    raise ValueError("Excitation {} -> {} changes the spin projection.".format(
        hole, particle))
  occupied.remove(hole)
  return tuple(sorted(occupied + [particle]))


def named_reference(label: Text, n_alpha: int, n_beta: int,
                    n_spatial: int) -> Tuple[int, ...]:
  """Occupation for `hf`, `homo->lumo`, `homo-2->lumo+1` and the like.

  Excitations move an alpha electron between spatial orbitals counted from
  the aufbau HOMO and LUMO.
  """
  occupied = sorted([2 * i for i in range(n_alpha)] +
                    [2 * i + 1 for i in range(n_beta)])
  label = label.strip().lower()
  if label == "hf":
    return tuple(occupied)
  try:
    source, target = label.split("->")
    hole = _frontier_orbital(source, "homo", n_alpha - 1)
    particle = _frontier_orbital(target, "lumo", n_alpha)
  except ValueError:
    raise ValueError("Cannot parse reference {!r}; expected 'hf' or "
                     "'homo[-k]->lumo[+k]'.".format(label))
  if not 0 <= hole < n_alpha or not n_alpha <= particle < n_spatial:
    raise ValueError("Reference {!r} is outside {} spatial orbitals.".format(
        label, n_spatial))
  return excitation_reference(occupied, 2 * hole, 2 * particle)


def _frontier_orbital(text: Text, name: Text, base: int) -> int:
  text = text.strip()
  if not text.startswith(name):
    raise ValueError(text)
  shift = text[len(name):]
  return base + (int(shift) if shift else 0)


def curve_errors(energies: Sequence[float],
                 exact: Sequence[float]) -> Tensor:
  """Signed errors `E - E_exact` in kcal/mol."""
  energies = np.asarray(energies, dtype=float)
  exact = np.asarray(exact, dtype=float)
  if energies.shape != exact.shape:
    raise ValueError("Curve lengths differ: {} != {}.".format(
        energies.shape, exact.shape))
  return (energies - exact) * config.HARTREE_TO_KCAL_MOL


def npe(errors: Sequence[float]) -> float:
  """Non-parallelity error: `max(errors) - min(errors)`."""
  errors = np.asarray(errors, dtype=float)
  if errors.size == 0:
    raise ValueError("Non-parallelity error of an empty curve.")
  return float(np.max(errors) - np.min(errors))

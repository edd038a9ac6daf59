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
"""Dense statevector simulation over `2**n_qubits` amplitudes.

Basis index bit `q` holds the occupation of spin orbital `q`; the state with
spin orbitals 0 and 1 occupied is basis index `0b0011`.
"""
import functools
import itertools
import math
from typing import Any, Callable, Optional, Sequence, Text, Tuple, Union
import numpy as np
from scipy import sparse
from scipy.sparse import linalg as sparse_linalg
from adapt_rdm import config
from adapt_rdm import utils
from adapt_rdm.operator_algebra import (PauliSum, jordan_wigner, popcount,
                                        s_squared_operator)
from adapt_rdm.rdm_toolkit import Rdm, permutations_with_sign

Tensor = Any
Operator = Union[PauliSum, sparse.spmatrix, sparse_linalg.LinearOperator,
                 Callable[[Tensor], Tensor]]


class State:
  """A normalized pure state; the amplitude array is read-only."""

  def __init__(self, amplitudes: Tensor, normalize: bool = False) -> None:
    """Create a state.

    Args:
      amplitudes: Complex vector of length `2**n` for some `n >= 0`.
      normalize: Divide by the norm instead of checking it.
    Raises:
      ValueError: If the length is not a power of two, or the vector is not
        normalized and `normalize` is False.
    """
    amplitudes = np.array(amplitudes, dtype=complex).ravel()
    dim = amplitudes.shape[0]
    n_qubits = dim.bit_length() - 1
    if dim < 1 or (1 << n_qubits) != dim:
      raise ValueError(
          "State dimension {} is not a power of two.".format(dim))
    norm = np.linalg.norm(amplitudes)
    if normalize:
      if norm == 0:
        raise ValueError("Cannot normalize the zero vector.")
      amplitudes = amplitudes / norm
    elif abs(norm - 1.0) > config.NORM_TOLERANCE:
      raise ValueError("State has norm {}, expected 1.".format(norm))
    amplitudes.flags.writeable = False
    self._amplitudes = amplitudes
    self.n_qubits = n_qubits

  @property
  def amplitudes(self) -> Tensor:
    return self._amplitudes

  @property
  def dim(self) -> int:
    return self._amplitudes.shape[0]

  @property
  def norm(self) -> float:
    return float(np.linalg.norm(self._amplitudes))

  def __repr__(self) -> Text:
    return "State(n_qubits={})".format(self.n_qubits)


def check_spaces(a: State, b: State) -> None:
  """Raise if two states live on different numbers of qubits."""
  if a.n_qubits != b.n_qubits:
    raise ValueError("Hilbert-space mismatch: {} qubits != {} qubits.".format(
        a.n_qubits, b.n_qubits))


def fuse_charges(charges: Sequence[Tensor]) -> Tensor:
  """Total charge of every basis state from per-qubit charges.

  Args:
    charges: `charges[q]` holds the charge of qubit `q` in states 0 and 1.
  Returns:
    Array of length `2**len(charges)` indexed like the amplitudes.
  """
  total = np.zeros(1, dtype=np.int64)
  for charge in reversed(list(charges)):
    total = np.add.outer(total, np.asarray(charge, dtype=np.int64)).ravel()
  return total


@functools.lru_cache(maxsize=32)
def _sector_charges(n_qubits: int) -> Tuple[Tensor, Tensor]:
  number = fuse_charges([[0, 1]] * n_qubits)
  ms2 = fuse_charges([[0, 1] if q % 2 == 0 else [0, -1]
                      for q in range(n_qubits)])
  number.flags.writeable = False
  ms2.flags.writeable = False
  return number, ms2


def sector_indices(n_qubits: int, n_electrons: int,
                   ms2: Optional[int] = None) -> Tensor:
  """Basis indices with `n_electrons` set bits and spin projection `ms2/2`.

  Args:
    n_qubits: Number of spin orbitals.
    n_electrons: Particle number.
    ms2: Twice the spin projection; None selects every projection.
  Returns:
    Sorted basis indices.
  """
  number, spin = _sector_charges(n_qubits)
  mask = number == n_electrons
  if ms2 is not None:
    mask &= spin == ms2
  return np.nonzero(mask)[0]


def leakage(s: State, n_electrons: int, ms2: Optional[int] = None) -> float:
  """Largest amplitude magnitude outside the given sector."""
  outside = np.ones(s.dim, dtype=bool)
  outside[sector_indices(s.n_qubits, n_electrons, ms2)] = False
  if not outside.any():
    return 0.0
  return float(np.max(np.abs(s.amplitudes[outside])))


@functools.lru_cache(maxsize=256)
def _annihilation_map(n_qubits: int,
                      p: int) -> Tuple[Tensor, Tensor, Tensor]:
  indices = np.arange(1 << n_qubits, dtype=np.int64)
  source = indices[(indices >> p) & 1 == 1]
  target = source ^ (1 << p)
  sign = 1 - 2 * (popcount(source & ((1 << p) - 1)) % 2)
  return source, target, sign


def annihilate(vector: Tensor, p: int, n_qubits: int) -> Tensor:
  """Apply `a_p` to a raw amplitude vector."""
  if p < 0 or p >= n_qubits:
    raise ValueError("Orbital {} outside [0, {}).".format(p, n_qubits))
  source, target, sign = _annihilation_map(n_qubits, p)
  out = np.zeros_like(vector)
  out[target] = sign * vector[source]
  return out


def prepare_reference(occupied: Sequence[int], n_qubits: int) -> State:
  """Computational basis state with the listed spin orbitals occupied.

  Args:
    occupied: Distinct spin-orbital indices.
    n_qubits: Number of qubits.
  Returns:
    The determinant.
  Raises:
    ValueError: For duplicate or out-of-range indices.
  """
  occupied = list(occupied)
  if len(set(occupied)) != len(occupied):
    raise ValueError("Duplicate orbital in occupation {}.".format(occupied))
  index = 0
  for p in occupied:
    if p < 0 or p >= n_qubits:
      raise ValueError("Orbital {} outside [0, {}).".format(p, n_qubits))
    index |= 1 << p
  amplitudes = np.zeros(1 << n_qubits, dtype=complex)
  amplitudes[index] = 1.0
  return State(amplitudes)


def operator_action(op: Operator) -> Callable[[Tensor], Tensor]:
  """A function applying `op` to raw amplitude vectors."""
  if isinstance(op, PauliSum):
    matrix = op.to_sparse()
    return lambda v: matrix @ v
  if sparse.issparse(op) or isinstance(op, np.ndarray):
    return lambda v: op @ v
  if isinstance(op, sparse_linalg.LinearOperator):
    return op.matvec
  if callable(op):
    return op
  raise TypeError("Cannot apply an operator of type {}.".format(type(op)))


def apply_operator(s: State, op: Operator) -> Tensor:
  """`op |s>` as a raw (unnormalized) vector."""
  if isinstance(op, PauliSum) and op.n_qubits != s.n_qubits:
    raise ValueError("Operator acts on {} qubits, state has {}.".format(
        op.n_qubits, s.n_qubits))
  return operator_action(op)(s.amplitudes)


def apply_exp_generator(s: State, g: PauliSum, theta: float) -> State:
  """Apply `exp(theta A)` exactly, `A` being `g.generator_matrix()`.

  For an anti-Hermitian `g` this is `exp(theta g)`; for a Hermitian `g` it
  is `exp(i theta g)`. The action is evaluated by a truncated Taylor series
  on matrix-vector products (`scipy.sparse.linalg.expm_multiply`).

  Args:
    s: The state.
    g: The generator.
    theta: The angle.
  Returns:
    The rotated state; `s` itself when `theta == 0`.
  Raises:
    ValueError: For a generator that is neither Hermitian nor
      anti-Hermitian, or a qubit-count mismatch.
  """
  if g.n_qubits != s.n_qubits:
    raise ValueError("Generator acts on {} qubits, state has {}.".format(
        g.n_qubits, s.n_qubits))
  matrix = g.generator_matrix()
  if theta == 0:
    return s
  return State(expm_action(matrix, theta, s.amplitudes))


def expm_action(matrix: sparse.spmatrix, theta: float,
                vector: Tensor) -> Tensor:
  """`exp(theta * matrix) @ vector` for a raw vector."""
  if theta == 0:
    return vector
  return sparse_linalg.expm_multiply(theta * matrix, vector)


def expectation(s: State, h: Operator) -> float:
  """Real expectation value `<s|h|s>`.

  Raises:
    ValueError: If the imaginary part exceeds 1e-10 (non-Hermitian `h`).
  """
  value = np.vdot(s.amplitudes, apply_operator(s, h))
  if abs(value.imag) > config.HERMITICITY_TOLERANCE:
    raise ValueError("Expectation value {} is not real; the operator is not "
                     "Hermitian.".format(value))
  return float(value.real)


def variance(s: State, h: Operator) -> float:
  """`<h^2> - <h>^2`, with `<h^2>` evaluated as `||h|s>||^2`."""
  hv = apply_operator(s, h)
  mean = np.vdot(s.amplitudes, hv)
  if abs(mean.imag) > config.HERMITICITY_TOLERANCE:
    raise ValueError("Expectation value {} is not real; the operator is not "
                     "Hermitian.".format(mean))
  return float(np.vdot(hv, hv).real - mean.real**2)


def overlap(a: State, b: State) -> complex:
  """`<a|b>`."""
  check_spaces(a, b)
  return complex(np.vdot(a.amplitudes, b.amplitudes))


def measure_rdm(s: State, order: int) -> Rdm:
  """The `order`-particle reduced density matrix.

  `D[p1..pm, q1..qm] = 1/m! <s| a^+_p1 .. a^+_pm a_qm .. a_q1 |s>`.
  Only sorted index tuples are evaluated (as inner products of
  annihilated states); the rest follow from antisymmetry.

  Args:
    s: The state.
    order: 1, 2 or 3.
  Returns:
    The RDM.
  Raises:
    ValueError: For an unsupported order or `order > s.n_qubits`.
  """
  if order not in (1, 2, 3):
    raise ValueError("RDM order must be 1, 2 or 3, got {}.".format(order))
  n = s.n_qubits
  if order > n:
    raise ValueError("A {}-RDM needs at least {} spin orbitals, got {}.".format(
        order, order, n))
  combos = list(itertools.combinations(range(n), order))
  reduced = {(): s.amplitudes}
  for combo in combos:
    for m in range(1, order + 1):
      if combo[:m] not in reduced:
        reduced[combo[:m]] = annihilate(reduced[combo[:m - 1]], combo[m - 1],
                                        n)
  phis = np.array([reduced[combo] for combo in combos])
  block = phis.conj() @ phis.T / math.factorial(order)

  tensor = np.zeros((n,) * (2 * order), dtype=complex)
  table = np.array(combos, dtype=np.int64)
  for upper, upper_sign in permutations_with_sign(order):
    rows = table[:, list(upper)]
    for lower, lower_sign in permutations_with_sign(order):
      cols = table[:, list(lower)]
      index = tuple(rows[:, k][:, None] for k in range(order)) + tuple(
          cols[:, k][None, :] for k in range(order))
      tensor[index] = upper_sign * lower_sign * block
  return Rdm(order, tensor)


@functools.lru_cache(maxsize=8)
def _s_squared_matrix(n_qubits: int) -> sparse.csr_matrix:
  return jordan_wigner(s_squared_operator(n_qubits // 2),
                       n_qubits).to_sparse()


def sector_expectations(s: State) -> Tuple[float, float, float]:
  """`(<N>, <S_z>, <S^2>)` of a state on interleaved spin orbitals."""
  if s.n_qubits % 2:
    raise ValueError("S^2 needs an even number of spin orbitals.")
  number, ms2 = _sector_charges(s.n_qubits)
  weights = np.abs(s.amplitudes)**2
  n_mean = float(weights @ number)
  sz_mean = float(weights @ ms2) / 2.0
  s2_mean = expectation(s, _s_squared_matrix(s.n_qubits))
  return n_mean, sz_mean, s2_mean


def save_state(s: State, path: Text, **attrs: Any) -> None:
  """Write the amplitudes to an hdf5 file."""
  utils.save_tensors({"amplitudes": s.amplitudes}, path,
                     attrs=dict(attrs, n_qubits=s.n_qubits))


def load_state(path: Text) -> State:
  """Read a state written by `save_state`."""
  tensors, _ = utils.load_tensors(path)
  return State(tensors["amplitudes"])


def dump_state_text(s: State, threshold: float = 0.0) -> Text:
  """One line `index real imag` per amplitude above `threshold`."""
  lines = []
  for index in np.nonzero(np.abs(s.amplitudes) > threshold)[0]:
    value = s.amplitudes[index]
    lines.append("{:d} {:.16e} {:.16e}".format(index, value.real, value.imag))
  return "\n".join(lines)

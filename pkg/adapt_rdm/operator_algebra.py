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
"""Fermionic operators, Pauli sums, the Jordan-Wigner map and operator pools.

A ladder operator is a pair `(index, action)` with `action` 1 for creation
and 0 for annihilation. A term is a tuple of ladder operators read left to
right. Terms are kept in canonical normal order: creations first with
strictly decreasing indices, then annihilations with strictly increasing
indices.

Pauli strings are stored symplectically as `(x, z)` bit masks, bit `q`
referring to qubit `q`, and represent

  P(x, z) = i^popcount(x & z) X^x Z^z,

so that a qubit with both bits set carries `Y`.
"""
import functools
import itertools
import logging
from typing import (Any, Dict, Iterable, Iterator, List, Mapping, NamedTuple,
                    Optional, Sequence, Text, Tuple, Union)
import numpy as np
from scipy import sparse
from adapt_rdm import config
from adapt_rdm.integrals import SpinHamiltonian

logger = logging.getLogger(__name__)
Tensor = Any
Ladder = Tuple[int, int]
Term = Tuple[Ladder, ...]
PauliKey = Tuple[int, int]
Number = Union[int, float, complex]

CREATE = 1
ANNIHILATE = 0

UNRESTRICTED_GSD = "unrestricted_gsd"
SPIN_ADAPTED_GSD = "spin_adapted_gsd"
POOL_KINDS = (UNRESTRICTED_GSD, SPIN_ADAPTED_GSD)


def _accumulate(target: Dict, key, value) -> None:
  target[key] = target.get(key, 0.0) + value


def _prune(terms: Dict, threshold: float = config.PRUNE_THRESHOLD) -> Dict:
  return {k: v for k, v in terms.items() if abs(v) > threshold}


def normal_order_term(term: Term, coefficient: Number) -> Dict[Term, complex]:
  """Normal order a single ladder product.

  Anticommutation is applied by an insertion sort; every time an
  annihilation passes a creation of the same index the contracted term is
  ordered recursively.

  Args:
    term: The ladder product.
    coefficient: Its coefficient.
  Returns:
    A mapping from canonical terms to coefficients.
  """
  term = list(term)
  ordered = {}  # type: Dict[Term, complex]
  for i in range(1, len(term)):
    for j in range(i, 0, -1):
      right = term[j]
      left = term[j - 1]
      if right[1] and not left[1]:
        term[j - 1], term[j] = right, left
        coefficient = -coefficient
        if right[0] == left[0]:
          contracted = tuple(term[:j - 1] + term[j + 1:])
          for t, c in normal_order_term(contracted, -coefficient).items():
            _accumulate(ordered, t, c)
      elif right[1] == left[1]:
        if right[0] == left[0]:
          return ordered
        if ((right[1] and right[0] > left[0]) or
            (not right[1] and right[0] < left[0])):
          term[j - 1], term[j] = right, left
          coefficient = -coefficient
  _accumulate(ordered, tuple(term), coefficient)
  return ordered


class FermionOperator:
  """An immutable, normal-ordered linear combination of ladder products."""
  __array_priority__ = 100.0

  def __init__(self,
               terms: Optional[Mapping[Term, Number]] = None,
               ordered: bool = False) -> None:
    """Create an operator.

    Args:
      terms: Mapping from ladder products to coefficients. An empty tuple is
        the identity.
      ordered: Set when `terms` is already canonical and pruned.
    """
    terms = {} if terms is None else terms
    if ordered:
      self._terms = dict(terms)
      return
    collected = {}  # type: Dict[Term, complex]
    for term, coefficient in terms.items():
      term = tuple((int(i), int(a)) for i, a in term)
      for t, c in normal_order_term(term, complex(coefficient)).items():
        _accumulate(collected, t, c)
    self._terms = _prune(collected)

  @classmethod
  def identity(cls, coefficient: Number = 1.0) -> "FermionOperator":
    return cls({(): coefficient})

  @classmethod
  def ladder(cls, index: int, action: int) -> "FermionOperator":
    return cls({((index, action),): 1.0})

  @classmethod
  def excitation(cls,
                 creations: Sequence[int],
                 annihilations: Sequence[int],
                 coefficient: Number = 1.0) -> "FermionOperator":
    """`coefficient * a^+_{c1} a^+_{c2} ... a_{a1} a_{a2} ...` in the given
    order."""
    term = tuple((c, CREATE) for c in creations) + tuple(
        (a, ANNIHILATE) for a in annihilations)
    return cls({term: coefficient})

  @property
  def terms(self) -> Dict[Term, complex]:
    return dict(self._terms)

  def items(self) -> Iterator[Tuple[Term, complex]]:
    return iter(self._terms.items())

  def __len__(self) -> int:
    return len(self._terms)

  def __bool__(self) -> bool:
    return bool(self._terms)

  def is_zero(self, tolerance: float = config.PRUNE_THRESHOLD) -> bool:
    return all(abs(c) <= tolerance for c in self._terms.values())

  def many_body_order(self) -> int:
    if not self._terms:
      return 0
    return max(len(t) for t in self._terms)

  def max_index(self) -> int:
    """Largest orbital index used, or -1 for a scalar."""
    indices = [i for t in self._terms for i, _ in t]
    return max(indices) if indices else -1

  def __add__(self, other: "FermionOperator") -> "FermionOperator":
    if isinstance(other, (int, float, complex)):
      other = FermionOperator.identity(other)
    if not isinstance(other, FermionOperator):
      return NotImplemented
    summed = dict(self._terms)
    for t, c in other._terms.items():
      _accumulate(summed, t, c)
    return FermionOperator(_prune(summed), ordered=True)

  __radd__ = __add__

  def __neg__(self) -> "FermionOperator":
    return FermionOperator({t: -c for t, c in self._terms.items()},
                           ordered=True)

  def __sub__(self, other: "FermionOperator") -> "FermionOperator":
    return self + (-other)

  def __rsub__(self, other: Number) -> "FermionOperator":
    return (-self) + other

  def __mul__(self, other: Union["FermionOperator", Number]
             ) -> "FermionOperator":
    if isinstance(other, FermionOperator):
      return multiply(self, other)
    if isinstance(other, (int, float, complex, np.number)):
      return FermionOperator(
          _prune({t: c * other for t, c in self._terms.items()}),
          ordered=True)
    return NotImplemented

  def __rmul__(self, other: Number) -> "FermionOperator":
    if isinstance(other, (int, float, complex, np.number)):
      return self * other
    return NotImplemented

  def __truediv__(self, other: Number) -> "FermionOperator":
    return self * (1.0 / other)

  def __eq__(self, other: Any) -> bool:
    if not isinstance(other, FermionOperator):
      return NotImplemented
    return (self - other).is_zero(1e-12)

  def __hash__(self):
    raise TypeError("FermionOperator is not hashable; use `canonical_key`.")

  def hermitian_conjugate(self) -> "FermionOperator":
    return FermionOperator({
        tuple((i, 1 - a) for i, a in reversed(t)): np.conj(c)
        for t, c in self._terms.items()
    })

  def is_hermitian(self, tolerance: float = 1e-12) -> bool:
    return (self - self.hermitian_conjugate()).is_zero(tolerance)

  def is_anti_hermitian(self, tolerance: float = 1e-12) -> bool:
    return (self + self.hermitian_conjugate()).is_zero(tolerance)

  def canonical_key(self, decimals: int = 10) -> Tuple:
    """Hashable rounded representation used for deduplication."""
    return tuple(
        sorted((t, round(c.real, decimals), round(c.imag, decimals))
               for t, c in self._terms.items()))

  def __repr__(self) -> Text:
    if not self._terms:
      return "0"
    parts = []
    for term, c in sorted(self._terms.items()):
      ladders = " ".join(
          "{}{}".format(i, "^" if a else "") for i, a in term)
      parts.append("{} [{}]".format(c, ladders))
    return " +\n".join(parts)


def multiply(a: FermionOperator, b: FermionOperator) -> FermionOperator:
  """Normal-ordered product `a b`."""
  product = {}  # type: Dict[Term, complex]
  for ta, ca in a.items():
    for tb, cb in b.items():
      for t, c in normal_order_term(ta + tb, ca * cb).items():
        _accumulate(product, t, c)
  return FermionOperator(_prune(product), ordered=True)


def commutator(a: FermionOperator, b: FermionOperator) -> FermionOperator:
  """`a b - b a`, normal ordered."""
  return multiply(a, b) - multiply(b, a)


def number_operator(n_orbitals: int) -> FermionOperator:
  return FermionOperator({((p, CREATE), (p, ANNIHILATE)): 1.0
                          for p in range(n_orbitals)})


def sz_operator(n_orbitals: int) -> FermionOperator:
  """Spin projection for interleaved spin orbitals (even = alpha)."""
  return FermionOperator({((p, CREATE), (p, ANNIHILATE)): 0.5 if p % 2 == 0
                          else -0.5 for p in range(n_orbitals)})


def s_squared_operator(n_spatial: int) -> FermionOperator:
  """Total spin `S^2 = S_- S_+ + S_z (S_z + 1)`."""
  s_plus = FermionOperator({((2 * i, CREATE), (2 * i + 1, ANNIHILATE)): 1.0
                            for i in range(n_spatial)})
  s_minus = s_plus.hermitian_conjugate()
  s_z = sz_operator(2 * n_spatial)
  return s_minus * s_plus + s_z * s_z + s_z


def hamiltonian_operator(ham: SpinHamiltonian,
                         threshold: float = config.PRUNE_THRESHOLD
                        ) -> FermionOperator:
  """Electronic Hamiltonian as a `FermionOperator` (`e_core` excluded)."""
  terms = {}  # type: Dict[Term, complex]
  for p, q in zip(*np.nonzero(np.abs(ham.h1) > threshold)):
    terms[((int(p), CREATE), (int(q), ANNIHILATE))] = ham.h1[p, q]
  for p, q, r, s in zip(*np.nonzero(np.abs(ham.v2) > threshold)):
    term = ((int(p), CREATE), (int(q), CREATE), (int(s), ANNIHILATE),
            (int(r), ANNIHILATE))
    _accumulate(terms, term, 0.5 * ham.v2[p, q, r, s])
  return FermionOperator(terms)


@functools.lru_cache(maxsize=None)
def _popcount_table() -> Tensor:
  return np.array([bin(i).count("1") for i in range(1 << 16)], dtype=np.int64)


def popcount(values: Union[int, Tensor]) -> Union[int, Tensor]:
  """Number of set bits, elementwise for arrays of non-negative integers."""
  if isinstance(values, (int, np.integer)):
    return bin(int(values)).count("1")
  values = np.asarray(values, dtype=np.int64)
  table = _popcount_table()
  total = np.zeros(values.shape, dtype=np.int64)
  while np.any(values):
    total += table[values & 0xFFFF]
    values = values >> 16
  return total


def _pauli_product(k1: PauliKey, k2: PauliKey) -> Tuple[PauliKey, int]:
  """Key and phase exponent `m` such that `P1 P2 = i^m P(k)`."""
  x1, z1 = k1
  x2, z2 = k2
  x, z = x1 ^ x2, z1 ^ z2
  m = (bin(x1 & z1).count("1") + bin(x2 & z2).count("1") +
       2 * bin(z1 & x2).count("1") - bin(x & z).count("1"))
  return (x, z), m % 4


_PHASES = (1.0, 1.0j, -1.0, -1.0j)


class PauliSum:
  """An immutable weighted sum of Pauli strings on `n_qubits` qubits."""
  __array_priority__ = 100.0

  def __init__(self,
               n_qubits: int,
               terms: Optional[Mapping[PauliKey, Number]] = None,
               threshold: float = config.PRUNE_THRESHOLD) -> None:
    self.n_qubits = n_qubits
    terms = {} if terms is None else terms
    bound = 1 << n_qubits
    for x, z in terms:
      if x >= bound or z >= bound or x < 0 or z < 0:
        raise ValueError("Pauli string ({}, {}) does not fit on {} "
                         "qubits.".format(x, z, n_qubits))
    self._terms = _prune({(int(x), int(z)): complex(c)
                          for (x, z), c in terms.items()}, threshold)
    self._sparse = None
    self._generator = None

  @classmethod
  def identity(cls, n_qubits: int, coefficient: Number = 1.0) -> "PauliSum":
    return cls(n_qubits, {(0, 0): coefficient})

  @classmethod
  def from_labels(cls, labels: Mapping[Text, Number]) -> "PauliSum":
    """Build from strings such as `{"XY": 0.5j}`; qubit 0 is rightmost."""
    widths = {len(label) for label in labels}
    if len(widths) != 1:
      raise ValueError("Pauli labels have inconsistent widths {}.".format(
          sorted(widths)))
    n_qubits = widths.pop()
    terms = {}  # type: Dict[PauliKey, complex]
    for label, coefficient in labels.items():
      x = z = 0
      for q, letter in enumerate(reversed(label.upper())):
        if letter not in "IXYZ":
          raise ValueError("Invalid Pauli letter {!r} in {!r}.".format(
              letter, label))
        if letter in "XY":
          x |= 1 << q
        if letter in "ZY":
          z |= 1 << q
      _accumulate(terms, (x, z), coefficient)
    return cls(n_qubits, terms)

  @staticmethod
  def label(key: PauliKey, n_qubits: int) -> Text:
    x, z = key
    letters = []
    for q in range(n_qubits):
      letters.append("IXZY"[((x >> q) & 1) + 2 * ((z >> q) & 1)])
    return "".join(reversed(letters))

  @property
  def terms(self) -> Dict[PauliKey, complex]:
    return dict(self._terms)

  def labels(self) -> Dict[Text, complex]:
    return {self.label(k, self.n_qubits): c for k, c in self._terms.items()}

  def items(self) -> Iterator[Tuple[PauliKey, complex]]:
    return iter(self._terms.items())

  def __len__(self) -> int:
    return len(self._terms)

  def __bool__(self) -> bool:
    return bool(self._terms)

  def _check(self, other: "PauliSum") -> None:
    if other.n_qubits != self.n_qubits:
      raise ValueError("Qubit-count mismatch: {} != {}.".format(
          self.n_qubits, other.n_qubits))

  def __add__(self, other: "PauliSum") -> "PauliSum":
    if not isinstance(other, PauliSum):
      return NotImplemented
    self._check(other)
    summed = dict(self._terms)
    for k, c in other._terms.items():
      _accumulate(summed, k, c)
    return PauliSum(self.n_qubits, summed)

  def __neg__(self) -> "PauliSum":
    return PauliSum(self.n_qubits, {k: -c for k, c in self._terms.items()})

  def __sub__(self, other: "PauliSum") -> "PauliSum":
    return self + (-other)

  def __mul__(self, other: Union["PauliSum", Number]) -> "PauliSum":
    if isinstance(other, PauliSum):
      self._check(other)
      product = {}  # type: Dict[PauliKey, complex]
      for k1, c1 in self._terms.items():
        for k2, c2 in other._terms.items():
          key, m = _pauli_product(k1, k2)
          _accumulate(product, key, _PHASES[m] * c1 * c2)
      return PauliSum(self.n_qubits, product)
    if isinstance(other, (int, float, complex, np.number)):
      return PauliSum(self.n_qubits,
                      {k: c * other for k, c in self._terms.items()})
    return NotImplemented

  def __rmul__(self, other: Number) -> "PauliSum":
    if isinstance(other, (int, float, complex, np.number)):
      return self * other
    return NotImplemented

  def __eq__(self, other: Any) -> bool:
    if not isinstance(other, PauliSum):
      return NotImplemented
    if other.n_qubits != self.n_qubits:
      return False
    difference = self - other
    return all(abs(c) <= 1e-12 for c in difference._terms.values())

  def __hash__(self):
    raise TypeError("PauliSum is not hashable.")

  def adjoint(self) -> "PauliSum":
    # Every Pauli string is Hermitian.
    return PauliSum(self.n_qubits,
                    {k: np.conj(c) for k, c in self._terms.items()})

  def is_hermitian(self, tolerance: float = 1e-12) -> bool:
    return all(abs(c.imag) <= tolerance for c in self._terms.values())

  def is_anti_hermitian(self, tolerance: float = 1e-12) -> bool:
    return all(abs(c.real) <= tolerance for c in self._terms.values())

  def to_sparse(self) -> sparse.csr_matrix:
    """Matrix in the computational basis, basis index bit `q` = qubit `q`.

    The matrix is built once and cached.
    """
    if self._sparse is not None:
      return self._sparse
    dim = 1 << self.n_qubits
    columns = np.arange(dim, dtype=np.int64)
    by_x = {}  # type: Dict[int, List[Tuple[int, complex]]]
    for (x, z), c in self._terms.items():
      by_x.setdefault(x, []).append((z, c))
    rows, cols, data = [], [], []
    for x, group in by_x.items():
      values = np.zeros(dim, dtype=complex)
      for z, c in group:
        signs = 1 - 2 * (popcount(columns & z) % 2)
        values += c * _PHASES[bin(x & z).count("1") % 4] * signs
      rows.append(columns ^ x)
      cols.append(columns)
      data.append(values)
    if data:
      matrix = sparse.csr_matrix(
          (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
          shape=(dim, dim))
      matrix.eliminate_zeros()
    else:
      matrix = sparse.csr_matrix((dim, dim), dtype=complex)
    self._sparse = matrix
    return matrix

  def generator_matrix(self) -> sparse.csr_matrix:
    """Anti-Hermitian matrix `A` whose exponential `exp(theta A)` this sum
    generates.

    An anti-Hermitian sum (imaginary coefficients) is used as is; for a
    Hermitian sum `G` the generator is `i G`.

    Raises:
      ValueError: If the coefficients are neither all real nor all
        imaginary.
    """
    if self._generator is not None:
      return self._generator
    tolerance = config.HERMITICITY_TOLERANCE
    if self.is_anti_hermitian(tolerance):
      matrix = self.to_sparse()
    elif self.is_hermitian(tolerance):
      matrix = (1j * self.to_sparse()).tocsr()
    else:
      raise ValueError("Generator is neither Hermitian nor anti-Hermitian; "
                       "its exponential would not be unitary.")
    self._generator = matrix
    return matrix

  def to_matrix(self) -> Tensor:
    return self.to_sparse().toarray()

  def __repr__(self) -> Text:
    if not self._terms:
      return "0"
    return " +\n".join("{} [{}]".format(c, label)
                       for label, c in sorted(self.labels().items()))


def _ladder_pauli(index: int, action: int) -> Dict[PauliKey, complex]:
  x = 1 << index
  z_low = x - 1
  sign = -0.5j if action == CREATE else 0.5j
  return {(x, z_low): 0.5, (x, z_low | x): sign}


def jordan_wigner(op: FermionOperator, n_qubits: int) -> PauliSum:
  """Map `op` to qubits with `a^+_p = (X_p - i Y_p) / 2 Z_{p-1} ... Z_0`.

  Args:
    op: The fermionic operator.
    n_qubits: Number of qubits; every orbital index must be smaller.
  Returns:
    The `PauliSum` image.
  Raises:
    ValueError: If an index does not fit on `n_qubits` qubits.
  """
  if op.max_index() >= n_qubits:
    raise ValueError("Orbital index {} does not fit on {} qubits.".format(
        op.max_index(), n_qubits))
  image = {}  # type: Dict[PauliKey, complex]
  for term, coefficient in op.items():
    partial = {(0, 0): coefficient}  # type: Dict[PauliKey, complex]
    for index, action in term:
      factor = _ladder_pauli(index, action)
      product = {}  # type: Dict[PauliKey, complex]
      for k1, c1 in partial.items():
        for k2, c2 in factor.items():
          key, m = _pauli_product(k1, k2)
          _accumulate(product, key, _PHASES[m] * c1 * c2)
      partial = product
    for key, c in partial.items():
      _accumulate(image, key, c)
  return PauliSum(n_qubits, image)


def qubit_hamiltonian(ham: SpinHamiltonian) -> PauliSum:
  """Jordan-Wigner image of the electronic Hamiltonian (`e_core` excluded)."""
  return jordan_wigner(hamiltonian_operator(ham), ham.n_spin_orbitals)


class PoolElement(NamedTuple):
  """One anti-Hermitian generator of an operator pool.

  Attributes:
    label: Human-readable name, e.g. `d(3,2;1,0)`.
    kind: `single` or `double`.
    indices: Orbital indices; spin orbitals for unrestricted pools,
      spatial orbitals followed by a coupling number for spin-adapted ones.
    generator: The anti-Hermitian `FermionOperator`.
    qubit_generator: Its Jordan-Wigner image.
  """
  label: Text
  kind: Text
  indices: Tuple[int, ...]
  generator: FermionOperator
  qubit_generator: PauliSum


_KIND_RANK = {"single": 0, "double": 1}


class OperatorPool:
  """An ordered, deduplicated collection of `PoolElement`s."""

  def __init__(self, kind: Text, n_spatial: int,
               elements: Iterable[PoolElement]) -> None:
    self.kind = kind
    self.n_spatial = n_spatial
    self.elements = tuple(elements)
    self._rdm_maps = None

  @property
  def n_qubits(self) -> int:
    return 2 * self.n_spatial

  def __len__(self) -> int:
    return len(self.elements)

  def __iter__(self) -> Iterator[PoolElement]:
    return iter(self.elements)

  def __getitem__(self, index: int) -> PoolElement:
    return self.elements[index]

  def labels(self) -> List[Text]:
    return [e.label for e in self.elements]

  def rdm_maps(self) -> Tuple[sparse.csr_matrix, sparse.csr_matrix]:
    """Linear maps from flattened commutator tensors to generator values.

    Row `u` of the first (second) matrix holds the coefficients of the
    one-body (two-body) normal-ordered terms of generator `u`, placed at
    the flat position of `(i, j)` (`(i, j, k, l)`).
    """
    if self._rdm_maps is not None:
      return self._rdm_maps
    n = self.n_qubits
    one = ([], [], [])  # type: Tuple[List, List, List]
    two = ([], [], [])  # type: Tuple[List, List, List]
    for u, element in enumerate(self.elements):
      for term, c in element.generator.items():
        indices = [i for i, _ in term]
        if len(term) == 2:
          target = one
          flat = np.ravel_multi_index(indices, (n,) * 2)
        elif len(term) == 4:
          target = two
          flat = np.ravel_multi_index(indices, (n,) * 4)
        else:
          raise ValueError("Pool generator {} has a {}-body term.".format(
              element.label, len(term) // 2))
        target[0].append(u)
        target[1].append(flat)
        target[2].append(c)
    m1 = sparse.csr_matrix((np.array(one[2], dtype=complex), (one[0], one[1])),
                           shape=(len(self), n**2))
    m2 = sparse.csr_matrix((np.array(two[2], dtype=complex), (two[0], two[1])),
                           shape=(len(self), n**4))
    self._rdm_maps = (m1, m2)
    return self._rdm_maps


def _make_element(label: Text, kind: Text, indices: Tuple[int, ...],
                  generator: FermionOperator, n_qubits: int,
                  normalize: bool) -> Optional[PoolElement]:
  """Turn `generator` into `generator - h.c.`; None if that vanishes."""
  generator = generator - generator.hermitian_conjugate()
  if generator.many_body_order() == 0:
    return None
  if normalize:
    norm = np.sqrt(sum(abs(c)**2 for _, c in generator.items()))
    generator = generator / norm
  return PoolElement(label, kind, indices, generator,
                     jordan_wigner(generator, n_qubits))


def _unrestricted_gsd(n_spatial: int) -> List[PoolElement]:
  n = 2 * n_spatial
  elements = []
  for p, q in itertools.combinations(range(n), 2):
    p, q = q, p
    if p % 2 == q % 2:
      element = _make_element("s({};{})".format(p, q), "single", (p, q),
                              FermionOperator.excitation([p], [q]), n, False)
      elements.append(element)
  pairs = [(p, q) for q, p in itertools.combinations(range(n), 2)]
  for (p, q), (r, s) in itertools.product(pairs, pairs):
    if (p, q) <= (r, s):
      continue
    if (p % 2) + (q % 2) != (r % 2) + (s % 2):
      continue
    element = _make_element("d({},{};{},{})".format(p, q, r, s), "double",
                            (p, q, r, s),
                            FermionOperator.excitation([p, q], [s, r]), n,
                            False)
    if element is not None:
      elements.append(element)
  return elements


def _spin_adapted_gsd(n_spatial: int) -> List[PoolElement]:
  """Singlet generalized singles and doubles over spatial orbitals."""
  n = 2 * n_spatial
  a = lambda i: (2 * i, ANNIHILATE)
  b = lambda i: (2 * i + 1, ANNIHILATE)
  a_dag = lambda i: (2 * i, CREATE)
  b_dag = lambda i: (2 * i + 1, CREATE)
  elements = []  # type: List[Optional[PoolElement]]
  for p in range(n_spatial):
    for q in range(p, n_spatial):
      generator = FermionOperator({
          (a_dag(p), a(q)): 1.0,
          (b_dag(p), b(q)): 1.0
      })
      elements.append(
          _make_element("S({};{})".format(p, q), "single", (p, q), generator,
                        n, True))
  spatial_pairs = [(p, q) for p in range(n_spatial)
                   for q in range(p, n_spatial)]
  c2, c1 = 2.0 / np.sqrt(12.0), 1.0 / np.sqrt(12.0)
  for pq, (p, q) in enumerate(spatial_pairs):
    for rs, (r, s) in enumerate(spatial_pairs):
      if pq > rs:
        continue
      coupling_1 = FermionOperator({
          (a_dag(r), a(p), a_dag(s), a(q)): c2,
          (b_dag(r), b(p), b_dag(s), b(q)): c2,
          (a_dag(r), a(p), b_dag(s), b(q)): c1,
          (b_dag(r), b(p), a_dag(s), a(q)): c1,
          (a_dag(r), b(p), b_dag(s), a(q)): c1,
          (b_dag(r), a(p), a_dag(s), b(q)): c1,
      })
      coupling_2 = FermionOperator({
          (a_dag(r), a(p), b_dag(s), b(q)): 0.5,
          (b_dag(r), b(p), a_dag(s), a(q)): 0.5,
          (a_dag(r), b(p), b_dag(s), a(q)): -0.5,
          (b_dag(r), a(p), a_dag(s), b(q)): -0.5,
      })
      for coupling, generator in ((1, coupling_1), (2, coupling_2)):
        elements.append(
            _make_element("D({},{};{},{})#{}".format(r, s, p, q, coupling),
                          "double", (r, s, p, q, coupling), generator, n,
                          True))
  return [e for e in elements if e is not None]


def build_pool(n_spatial: int, kind: Text = SPIN_ADAPTED_GSD) -> OperatorPool:
  """Build a generalized singles and doubles pool.

  Args:
    n_spatial: Number of spatial orbitals.
    kind: `unrestricted_gsd` or `spin_adapted_gsd`.
  Returns:
    The pool, ordered by excitation rank then index tuple, with
    generators that agree up to sign kept once.
  Raises:
    ValueError: For an unknown kind or `n_spatial < 1`.
  """
  if n_spatial < 1:
    raise ValueError("n_spatial = {} must be positive.".format(n_spatial))
  if kind == UNRESTRICTED_GSD:
    candidates = _unrestricted_gsd(n_spatial)
  elif kind == SPIN_ADAPTED_GSD:
    candidates = _spin_adapted_gsd(n_spatial)
  else:
    raise ValueError("Unknown pool kind {!r}; expected one of {}.".format(
        kind, POOL_KINDS))
  candidates.sort(key=lambda e: (_KIND_RANK[e.kind], e.indices))
  seen = set()
  elements = []
  for element in candidates:
    key = element.generator.canonical_key()
    negated = (-element.generator).canonical_key()
    if key in seen or negated in seen:
      continue
    seen.add(key)
    elements.append(element)
  logger.info("built %s pool with %d elements on %d spatial orbitals", kind,
              len(elements), n_spatial)
  return OperatorPool(kind, n_spatial, elements)


def dump_pool(pool: OperatorPool) -> Text:
  """One line per element: `label : generator terms`."""
  lines = []
  for element in pool:
    terms = " + ".join(
        "({:.6g}) {}".format(c, " ".join(
            "{}{}".format(i, "^" if a else "") for i, a in t))
        for t, c in sorted(element.generator.items()))
    lines.append("{} : {}".format(element.label, terms))
  return "\n".join(lines)

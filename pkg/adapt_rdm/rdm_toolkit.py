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
"""Reduced density matrices, Grassmann wedge products and commutator
expectations.

An m-RDM is stored as a rank-2m tensor `D[p1..pm, q1..qm]` holding
`1/m! <a^+_p1 .. a^+_pm a_qm .. a_q1>`, so that the trace over all index
tuples is `binomial(N, m)`.

Wedge products antisymmetrize the tensor product over all upper and all
lower indices with weight `1/(k!)^2`, `k` being the total particle rank.
With this normalization

  D3 = D1^D1^D1 + 3 Delta2^D1 + Delta3,   Delta2 = D2 - D1^D1,

holds term by term, and dropping `Delta3` gives the Valdemoro
reconstruction, exact on single determinants.
"""
import functools
import itertools
import math
from typing import Any, List, NamedTuple, Sequence, Text, Tuple, Union
import numpy as np
from opt_einsum import contract
from adapt_rdm import config

Tensor = Any


@functools.lru_cache(maxsize=8)
def permutations_with_sign(k: int) -> List[Tuple[Tuple[int, ...], int]]:
  """All permutations of `range(k)` with their signs."""
  result = []
  for perm in itertools.permutations(range(k)):
    inversions = sum(1 for i in range(k) for j in range(i + 1, k)
                     if perm[i] > perm[j])
    result.append((perm, -1 if inversions % 2 else 1))
  return result


class Rdm(NamedTuple):
  """An m-particle reduced density matrix."""
  order: int
  tensor: Tensor

  @property
  def n_orbitals(self) -> int:
    return self.tensor.shape[0]

  def matrix(self) -> Tensor:
    """The tensor reshaped to a square matrix over index tuples."""
    n = self.n_orbitals**self.order
    return self.tensor.reshape(n, n)

  def trace(self) -> complex:
    return complex(np.trace(self.matrix()))


class CumulantRdm(NamedTuple):
  """The connected part of an RDM."""
  order: int
  tensor: Tensor


RdmLike = Union[Rdm, CumulantRdm, Tensor]


def _tensor(x: RdmLike) -> Tensor:
  if isinstance(x, (Rdm, CumulantRdm)):
    return x.tensor
  return np.asarray(x)


def _check_square(tensor: Tensor, name: Text) -> int:
  if tensor.ndim % 2 or len(set(tensor.shape)) != 1:
    raise ValueError("{} must have an even rank and equal dimensions, got "
                     "shape {}.".format(name, tensor.shape))
  return tensor.shape[0]


def antisymmetrize(tensor: Tensor) -> Tensor:
  """Antisymmetrize over upper and over lower indices, weight `1/(k!)^2`."""
  k = tensor.ndim // 2
  upper = np.zeros_like(tensor)
  for perm, sign in permutations_with_sign(k):
    upper += sign * tensor.transpose(list(perm) + list(range(k, 2 * k)))
  result = np.zeros_like(tensor)
  for perm, sign in permutations_with_sign(k):
    result += sign * upper.transpose(
        list(range(k)) + [k + p for p in perm])
  return result / math.factorial(k)**2


def grassmann_wedge(a: RdmLike, b: RdmLike) -> Tensor:
  """Grassmann wedge product of two even-rank tensors.

  Raises:
    ValueError: If the dimensions disagree or the result would be a
      rank-6 tensor on more than 16 orbitals.
  """
  a, b = _tensor(a), _tensor(b)
  n = _check_square(a, "a")
  if _check_square(b, "b") != n:
    raise ValueError("Dimension mismatch: {} != {}.".format(n, b.shape[0]))
  m, l = a.ndim // 2, b.ndim // 2
  if m + l >= 3 and n > config.MAX_DENSE_RANK6_ORBITALS:
    raise ValueError("Dense rank-{} tensors are limited to {} orbitals, got "
                     "{}.".format(2 * (m + l), config.MAX_DENSE_RANK6_ORBITALS,
                                  n))
  outer = np.multiply.outer(a, b)
  axes = (list(range(m)) + list(range(2 * m, 2 * m + l)) +
          list(range(m, 2 * m)) + list(range(2 * m + l, 2 * m + 2 * l)))
  return antisymmetrize(outer.transpose(axes))


def wedge_11(a: RdmLike, b: RdmLike) -> Tensor:
  """`a ^ b` for two rank-2 tensors; `D1 ^ D1` for a determinant equals
  its 2-RDM."""
  if _tensor(a).ndim != 2 or _tensor(b).ndim != 2:
    raise ValueError("wedge_11 expects two rank-2 tensors.")
  return grassmann_wedge(a, b)


def wedge_21(d2: RdmLike, d1: RdmLike) -> Tensor:
  """`d2 ^ d1` for a rank-4 and a rank-2 tensor."""
  if _tensor(d2).ndim != 4 or _tensor(d1).ndim != 2:
    raise ValueError("wedge_21 expects a rank-4 and a rank-2 tensor.")
  return grassmann_wedge(d2, d1)


def wedge_111(d1: RdmLike) -> Tensor:
  """`d1 ^ d1 ^ d1`."""
  return grassmann_wedge(wedge_11(d1, d1), d1)


def cumulant2(d1: RdmLike, d2: RdmLike) -> CumulantRdm:
  """`Delta2 = D2 - D1 ^ D1`."""
  return CumulantRdm(2, _tensor(d2) - wedge_11(d1, d1))


def valdemoro3(d1: RdmLike, d2: RdmLike) -> Rdm:
  """3-RDM with the three-body cumulant set to zero."""
  d1, d2 = _tensor(d1), _tensor(d2)
  if d2.shape != (d1.shape[0],) * 4:
    raise ValueError("Inconsistent RDM shapes {} and {}.".format(
        d1.shape, d2.shape))
  delta = cumulant2(d1, d2)
  return Rdm(3, wedge_111(d1) + 3.0 * wedge_21(delta, d1))


def reconstruction_error(reconstructed: RdmLike, exact: RdmLike) -> float:
  """Frobenius norm of the difference."""
  return float(np.linalg.norm(_tensor(reconstructed) - _tensor(exact)))


def energy_from_2rdm(h2_reduced: Tensor, d2: RdmLike) -> float:
  """Electronic energy `sum K[p, q, r, s] D2[p, q, r, s]`; add `e_core`
  separately."""
  d2 = _tensor(d2)
  if d2.shape != h2_reduced.shape:
    raise ValueError("Shape mismatch: {} != {}.".format(
        h2_reduced.shape, d2.shape))
  return float(contract("pqrs,pqrs->", h2_reduced, d2).real)


def residual_one_body_tensor(d1: RdmLike, d2: RdmLike, h1: Tensor,
                             v2: Tensor) -> Tensor:
  """`C1[i, j] = <[a^+_i a_j, H]>` for all `i, j` from the 1- and 2-RDM."""
  d1, d2 = _tensor(d1), _tensor(d2)
  return (contract("jq,iq->ij", h1, d1) - contract("pi,pj->ij", h1, d1) +
          2.0 * contract("jqrs,iqrs->ij", v2, d2) -
          2.0 * contract("pqir,pqjr->ij", v2, d2))


def residual_two_body_tensor(d2: RdmLike, d3: RdmLike, h1: Tensor,
                             v2: Tensor) -> Tensor:
  """`C2[i, j, k, l] = <[a^+_i a^+_j a_k a_l, H]>` from the 2- and 3-RDM."""
  d2, d3 = _tensor(d2), _tensor(d3)
  return (2.0 * contract("lq,ijqk->ijkl", h1, d2) -
          2.0 * contract("kq,ijql->ijkl", h1, d2) +
          2.0 * contract("lkrs,ijrs->ijkl", v2, d2) -
          2.0 * contract("pi,pjlk->ijkl", h1, d2) +
          2.0 * contract("pj,pilk->ijkl", h1, d2) +
          2.0 * contract("baij,ablk->ijkl", v2, d2) -
          6.0 * contract("lcde,ijcdek->ijkl", v2, d3) +
          6.0 * contract("kcde,ijcdel->ijkl", v2, d3) -
          6.0 * contract("baic,abjlkc->ijkl", v2, d3) +
          6.0 * contract("abcj,abilkc->ijkl", v2, d3))


def _check_indices(n: int, indices: Sequence[int]) -> None:
  for index in indices:
    if index < 0 or index >= n:
      raise IndexError("Orbital index {} outside [0, {}).".format(index, n))


def residual_one_body(d1: RdmLike, d2: RdmLike, h1: Tensor, v2: Tensor,
                      p1: int, q1: int) -> float:
  """`<[a^+_p1 a_q1, H]>`.

  The value is real for real states and real integrals; its real part is
  returned.
  """
  d1, d2 = _tensor(d1), _tensor(d2)
  _check_indices(d1.shape[0], (p1, q1))
  i, j = p1, q1
  value = (h1[j, :] @ d1[i, :] - h1[:, i] @ d1[:, j] +
           2.0 * contract("qrs,qrs->", v2[j], d2[i]) -
           2.0 * contract("pqr,pqr->", v2[:, :, i, :], d2[:, :, j, :]))
  return float(np.real(value))


def residual_two_body(d2: RdmLike, d3: RdmLike, h1: Tensor, v2: Tensor,
                      p1: int, p2: int, q1: int, q2: int) -> float:
  """`<[a^+_p1 a^+_p2 a_q1 a_q2, H]>`; real part, as `residual_one_body`."""
  d2, d3 = _tensor(d2), _tensor(d3)
  _check_indices(d2.shape[0], (p1, p2, q1, q2))
  i, j, k, l = p1, p2, q1, q2
  value = (2.0 * h1[l] @ d2[i, j, :, k] - 2.0 * h1[k] @ d2[i, j, :, l] +
           2.0 * contract("rs,rs->", v2[l, k], d2[i, j]) -
           2.0 * h1[:, i] @ d2[:, j, l, k] + 2.0 * h1[:, j] @ d2[:, i, l, k] +
           2.0 * contract("ba,ab->", v2[:, :, i, j], d2[:, :, l, k]) -
           6.0 * contract("cde,cde->", v2[l], d3[i, j, :, :, :, k]) +
           6.0 * contract("cde,cde->", v2[k], d3[i, j, :, :, :, l]) -
           6.0 * contract("bac,abc->", v2[:, :, i, :], d3[:, :, j, l, k, :]) +
           6.0 * contract("abc,abc->", v2[:, :, :, j], d3[:, :, i, l, k, :]))
  return float(np.real(value))

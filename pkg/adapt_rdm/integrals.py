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
"""Molecular integrals: FCIDUMP input/output and spin-orbital Hamiltonians.

Spin orbitals are interleaved: spatial orbital `i` gives the alpha spin
orbital `2 * i` and the beta spin orbital `2 * i + 1`.

The second-quantized Hamiltonian is

  H = sum_pq h1[p, q] a^+_p a_q
      + 1/2 sum_pqrs v2[p, q, r, s] a^+_p a^+_q a_s a_r + e_core

with `v2` antisymmetrized in physicists' ordering.
"""
import io
import logging
import re
from typing import Any, List, NamedTuple, Optional, Sequence, Text, TextIO, Union
import numpy as np

logger = logging.getLogger(__name__)
Tensor = Any

_SYMMETRY_TOLERANCE = 1e-12


class FcidumpFormatError(ValueError):
  """Raised when an FCIDUMP header or record layout is malformed."""


class FcidumpParseError(ValueError):
  """Raised when an FCIDUMP field cannot be read as a number."""

  def __init__(self, message: Text, line_number: int) -> None:
    super().__init__("line {}: {}".format(line_number, message))
    self.line_number = line_number


class FcidumpIndexError(IndexError):
  """Raised when an FCIDUMP orbital index lies outside [0, NORB]."""

  def __init__(self, message: Text, line_number: int) -> None:
    super().__init__("line {}: {}".format(line_number, message))
    self.line_number = line_number


class ReducedHamiltonianError(ValueError):
  """Raised when the reduced Hamiltonian is requested for fewer than two
  electrons."""


class MolecularIntegrals(NamedTuple):
  """Spatial-orbital integrals of a molecule.

  Attributes:
    n_spatial: Number of spatial orbitals.
    n_electrons: Number of electrons.
    ms2: Twice the spin projection.
    e_core: Scalar energy offset (nuclear repulsion plus frozen core).
    h_spatial: One-electron integrals, shape `(n, n)`.
    eri_spatial: Two-electron integrals `(ij|kl)` in chemists' notation,
      shape `(n, n, n, n)`.
  """
  n_spatial: int
  n_electrons: int
  ms2: int
  e_core: float
  h_spatial: Tensor
  eri_spatial: Tensor

  def validate(self) -> None:
    """Check shapes and permutational symmetries.

    Raises:
      ValueError: If any invariant is violated.
    """
    n = self.n_spatial
    if n < 1:
      raise ValueError("n_spatial = {} must be positive.".format(n))
    if self.n_electrons < 0 or self.n_electrons > 2 * n:
      raise ValueError("n_electrons = {} is incompatible with {} spatial "
                       "orbitals.".format(self.n_electrons, n))
    if abs(self.ms2) > self.n_electrons or (self.n_electrons -
                                            self.ms2) % 2 != 0:
      raise ValueError("ms2 = {} is incompatible with n_electrons = {}.".format(
          self.ms2, self.n_electrons))
    if self.h_spatial.shape != (n, n):
      raise ValueError("h_spatial has shape {}, expected {}.".format(
          self.h_spatial.shape, (n, n)))
    if self.eri_spatial.shape != (n, n, n, n):
      raise ValueError("eri_spatial has shape {}, expected {}.".format(
          self.eri_spatial.shape, (n, n, n, n)))
    if not np.allclose(
        self.h_spatial, self.h_spatial.T, atol=_SYMMETRY_TOLERANCE, rtol=0):
      raise ValueError("h_spatial is not symmetric.")
    eri = self.eri_spatial
    for perm in [(1, 0, 2, 3), (0, 1, 3, 2), (2, 3, 0, 1)]:
      if not np.allclose(
          eri, eri.transpose(perm), atol=_SYMMETRY_TOLERANCE, rtol=0):
        raise ValueError(
            "eri_spatial lacks the permutational symmetry {}.".format(perm))

  @property
  def n_alpha(self) -> int:
    return (self.n_electrons + self.ms2) // 2

  @property
  def n_beta(self) -> int:
    return (self.n_electrons - self.ms2) // 2


class SpinHamiltonian(NamedTuple):
  """Spin-orbital Hamiltonian tensors.

  Attributes:
    n_spin_orbitals: Number of spin orbitals.
    n_electrons: Number of electrons the reduced Hamiltonian was built for.
    ms2: Twice the spin projection of the target sector.
    h1: One-body tensor `h1[p, q]`.
    v2: Antisymmetrized two-body tensor `v2[p, q, r, s]`.
    h2_reduced: Reduced Hamiltonian `K[p, q, r, s]` such that
      `E - e_core = sum(K * D2)` for the 2-RDM `D2` of any
      `n_electrons`-electron state.
    e_core: Scalar energy offset.
  """
  n_spin_orbitals: int
  n_electrons: int
  ms2: int
  h1: Tensor
  v2: Tensor
  h2_reduced: Tensor
  e_core: float


def _header_and_records(lines: List[Text]):
  """Split FCIDUMP lines into the namelist header and the record lines."""
  for number, line in enumerate(lines):
    stripped = line.strip()
    upper = stripped.upper()
    if "&END" in upper or stripped == "/" or upper.endswith("/"):
      return " ".join(lines[:number + 1]), number + 1
  raise FcidumpFormatError("FCIDUMP header is not terminated by &END or '/'.")


def _header_int(header: Text, key: Text, required: bool = True,
                default: int = 0) -> int:
  match = re.search(r"\b{}\s*=\s*([-+]?\d+)".format(key), header,
                    re.IGNORECASE)
  if match is None:
    if required:
      raise FcidumpFormatError(
          "FCIDUMP header is missing the {} key.".format(key))
    return default
  return int(match.group(1))


def parse_fcidump(text: Union[Text, TextIO]) -> MolecularIntegrals:
  """Parse a Molpro-style FCIDUMP.

  `ORBSYM` and `ISYM` are read past and ignored. Records of the form
  `value i 0 0 0` (orbital energies) are skipped.

  Args:
    text: The file content, or an open text stream.
  Returns:
    The parsed `MolecularIntegrals`.
  Raises:
    FcidumpFormatError: If NORB or NELEC is missing or a record has the
      wrong number of fields.
    FcidumpParseError: If a field is not numeric.
    FcidumpIndexError: If an index is outside `[0, NORB]`.
  """
  if not isinstance(text, str):
    text = text.read()
  lines = text.splitlines()
  header, first_record = _header_and_records(lines)
  norb = _header_int(header, "NORB")
  nelec = _header_int(header, "NELEC")
  ms2 = _header_int(header, "MS2", required=False)
  if norb < 1:
    raise FcidumpFormatError("NORB = {} must be positive.".format(norb))

  h = np.zeros((norb, norb))
  eri = np.zeros((norb, norb, norb, norb))
  e_core = 0.0
  for offset, line in enumerate(lines[first_record:]):
    line_number = first_record + offset + 1
    fields = line.split()
    if not fields:
      continue
    if len(fields) != 5:
      raise FcidumpFormatError("line {}: expected 5 fields, got {}.".format(
          line_number, len(fields)))
    try:
      value = float(fields[0].replace("D", "E").replace("d", "e"))
    except ValueError:
      raise FcidumpParseError(
          "value field {!r} is not a number.".format(fields[0]), line_number)
    try:
      i, j, k, l = [int(f) for f in fields[1:]]
    except ValueError:
      raise FcidumpParseError("index fields {} are not integers.".format(
          fields[1:]), line_number)
    for index in (i, j, k, l):
      if index < 0 or index > norb:
        raise FcidumpIndexError(
            "index {} outside [0, {}].".format(index, norb), line_number)

    if i and j and k and l:
      i, j, k, l = i - 1, j - 1, k - 1, l - 1
      for a, b, c, d in [(i, j, k, l), (j, i, k, l), (i, j, l, k),
                         (j, i, l, k), (k, l, i, j), (l, k, i, j),
                         (k, l, j, i), (l, k, j, i)]:
        eri[a, b, c, d] = value
    elif i and j and not k and not l:
      h[i - 1, j - 1] = value
      h[j - 1, i - 1] = value
    elif not (i or j or k or l):
      e_core = value
    elif i and not (j or k or l):
      logger.debug("skipping orbital energy record on line %d", line_number)
    else:
      raise FcidumpFormatError("line {}: unsupported index pattern {}.".format(
          line_number, (i, j, k, l)))

  mi = MolecularIntegrals(
      n_spatial=norb,
      n_electrons=nelec,
      ms2=ms2,
      e_core=e_core,
      h_spatial=h,
      eri_spatial=eri)
  mi.validate()
  return mi


def load_fcidump(path: Text) -> MolecularIntegrals:
  """Read and parse the FCIDUMP file at `path`."""
  with open(path, "r") as f:
    return parse_fcidump(f)


def write_fcidump(mi: MolecularIntegrals, stream: Optional[TextIO] = None,
                  tolerance: float = 0.0) -> Text:
  """Serialize `mi` in FCIDUMP format.

  Only symmetry-unique two-electron records are written.

  Args:
    mi: The integrals.
    stream: Optional stream the text is also written to.
    tolerance: Records with absolute value not above `tolerance` are
      omitted.
  Returns:
    The FCIDUMP text.
  """
  n = mi.n_spatial
  out = io.StringIO()
  out.write("&FCI NORB={},NELEC={},MS2={},\n".format(n, mi.n_electrons,
                                                      mi.ms2))
  out.write(" ORBSYM={}\n".format("1," * n))
  out.write(" ISYM=1,\n&END\n")
  record = "{:24.16e} {:4d} {:4d} {:4d} {:4d}\n"
  for i in range(n):
    for j in range(i + 1):
      ij = i * (i + 1) // 2 + j
      for k in range(n):
        for l in range(k + 1):
          if ij < k * (k + 1) // 2 + l:
            continue
          value = mi.eri_spatial[i, j, k, l]
          if abs(value) > tolerance:
            out.write(record.format(value, i + 1, j + 1, k + 1, l + 1))
  for i in range(n):
    for j in range(i + 1):
      value = mi.h_spatial[i, j]
      if abs(value) > tolerance:
        out.write(record.format(value, i + 1, j + 1, 0, 0))
  out.write(record.format(mi.e_core, 0, 0, 0, 0))
  text = out.getvalue()
  if stream is not None:
    stream.write(text)
  return text


def spin_orbital_labels(n_spatial: int) -> Tensor:
  """Spatial index and spin (0 alpha, 1 beta) of every spin orbital."""
  p = np.arange(2 * n_spatial)
  return p // 2, p % 2


def to_spin_hamiltonian(mi: MolecularIntegrals) -> SpinHamiltonian:
  """Lift spatial integrals to interleaved spin orbitals.

  Args:
    mi: The spatial-orbital integrals.
  Returns:
    The `SpinHamiltonian`, including the reduced Hamiltonian
    `K[p, q, r, s] = (h1[p, r] d[q, s] + d[p, r] h1[q, s]) / (N - 1)
    + v2[p, q, r, s]`.
  Raises:
    ReducedHamiltonianError: If `mi.n_electrons < 2`.
  """
  if mi.n_electrons < 2:
    raise ReducedHamiltonianError(
        "The reduced Hamiltonian needs at least 2 electrons, got {}.".format(
            mi.n_electrons))
  spatial, spin = spin_orbital_labels(mi.n_spatial)
  n = 2 * mi.n_spatial
  same_spin = (spin[:, None] == spin[None, :]).astype(float)

  h1 = mi.h_spatial[np.ix_(spatial, spatial)] * same_spin
  # (pq|rs) over spin orbitals, zero unless spin(p) = spin(q) and
  # spin(r) = spin(s).
  chem = (mi.eri_spatial[np.ix_(spatial, spatial, spatial, spatial)] *
          same_spin[:, :, None, None] * same_spin[None, None, :, :])
  # <pq|rs> = (pr|qs)
  phys = chem.transpose(0, 2, 1, 3)
  v2 = 0.5 * (phys - phys.transpose(0, 1, 3, 2))

  eye = np.eye(n)
  one_body = (np.einsum("pr,qs->pqrs", h1, eye) +
              np.einsum("pr,qs->pqrs", eye, h1)) / (mi.n_electrons - 1)
  return SpinHamiltonian(
      n_spin_orbitals=n,
      n_electrons=mi.n_electrons,
      ms2=mi.ms2,
      h1=h1,
      v2=v2,
      h2_reduced=one_body + v2,
      e_core=mi.e_core)


def hartree_fock_occupations(mi: MolecularIntegrals) -> List[int]:
  """Spin orbitals of the aufbau determinant in the given orbital basis."""
  occupied = [2 * i for i in range(mi.n_alpha)]
  occupied += [2 * i + 1 for i in range(mi.n_beta)]
  return sorted(occupied)


def hartree_fock_energy(mi: MolecularIntegrals,
                        occupied: Optional[Sequence[int]] = None) -> float:
  """Energy of a single determinant, from the spatial integrals directly.

  Args:
    mi: The integrals.
    occupied: Occupied spin orbitals. Defaults to the aufbau determinant.
  Returns:
    The determinant energy including `e_core`.
  """
  if occupied is None:
    occupied = hartree_fock_occupations(mi)
  energy = mi.e_core
  for p in occupied:
    energy += mi.h_spatial[p // 2, p // 2]
  for p in occupied:
    for q in occupied:
      P, Q = p // 2, q // 2
      energy += 0.5 * mi.eri_spatial[P, P, Q, Q]
      if p % 2 == q % 2:
        energy -= 0.5 * mi.eri_spatial[P, Q, Q, P]
  return float(energy)

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
"""Discovery and generation of `<system>_<R>.fcidump` integral files."""
import logging
import os
import re
from typing import List, Optional, Sequence, Text, Tuple
import numpy as np
from adapt_rdm import config
from adapt_rdm.integrals import MolecularIntegrals, write_fcidump

logger = logging.getLogger(__name__)

_FIXTURE_PATTERN = re.compile(r"^(?P<system>[A-Za-z0-9]+)_(?P<r>[0-9.]+)\.fcidump$")

# Bond-length grids in Angstrom.
GRIDS = {
    "h2": (0.7414,),
    "h4": tuple(np.round(np.arange(0.5, 2.01, 0.1), 2)),
    "h6": tuple(np.round(np.arange(0.5, 2.01, 0.1), 2)),
    "n2": tuple(np.round(np.arange(0.9, 2.71, 0.1), 2)),
}


def fixture_directory() -> Text:
  """Directory searched for fixtures, honouring `ADAPT_RDM_FIXTURES`."""
  override = os.environ.get(config.FIXTURES_ENV_VAR)
  if override:
    return override
  return os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def format_length(r: float) -> Text:
  """Bond length as used in file names: `1.5`, `2.0`, `0.7414`."""
  length = "{:.4f}".format(r).rstrip("0")
  if length.endswith("."):
    length += "0"
  return length


def fixture_name(system: Text, r: float) -> Text:
  return "{}_{}.fcidump".format(system.lower(), format_length(r))


def list_fixtures(system: Text,
                  directory: Optional[Text] = None) -> List[Tuple[float, Text]]:
  """All fixtures of `system`, as `(R, path)` sorted by `R`."""
  directory = directory or fixture_directory()
  if not os.path.isdir(directory):
    return []
  found = []
  for name in os.listdir(directory):
    match = _FIXTURE_PATTERN.match(name)
    if match and match.group("system").lower() == system.lower():
      found.append((float(match.group("r")), os.path.join(directory, name)))
  return sorted(found)


def find_fixture(system: Text, r: float,
                 directory: Optional[Text] = None) -> Text:
  """Path of the fixture for `system` at bond length `r`.

  Raises:
    FileNotFoundError: If no such fixture exists.
  """
  for value, path in list_fixtures(system, directory):
    if abs(value - r) < 1e-9:
      return path
  raise FileNotFoundError("No fixture {} in {}.".format(
      fixture_name(system, r), directory or fixture_directory()))


def _chain_atoms(n_atoms: int, r: float) -> List[Tuple[Text, Tuple[float, float,
                                                                    float]]]:
  return [("H", (0.0, 0.0, i * r)) for i in range(n_atoms)]


def build_integrals(system: Text, r: float) -> MolecularIntegrals:
  """Compute integrals for a named system with pyscf.

  Hydrogen chains use RHF/STO-3G canonical orbitals. `n2` uses the
  frozen-core 6-electron, 6-orbital active space of RHF/STO-3G N2; the
  frozen-core energy is folded into `e_core`.

  Args:
    system: One of `h2`, `h4`, `h6`, `n2`.
    r: Bond length in Angstrom.
  Returns:
    The integrals.
  Raises:
    ValueError: For an unknown system.
    ImportError: If pyscf is not installed.
  """
  from pyscf import ao2mo, gto, mcscf, scf  # pylint: disable=import-outside-toplevel
  system = system.lower()
  if system in ("h2", "h4", "h6"):
    mol = gto.M(
        atom=_chain_atoms(int(system[1:]), r),
        basis="sto-3g",
        unit="Angstrom",
        verbose=0)
    mf = scf.RHF(mol).run()
    mo = mf.mo_coeff
    n = mo.shape[1]
    h = mo.T @ mf.get_hcore() @ mo
    eri = ao2mo.restore(1, ao2mo.kernel(mol, mo), n)
    integrals = MolecularIntegrals(
        n_spatial=n,
        n_electrons=mol.nelectron,
        ms2=mol.spin,
        e_core=float(mol.energy_nuc()),
        h_spatial=h,
        eri_spatial=eri)
  elif system == "n2":
    mol = gto.M(
        atom=[("N", (0.0, 0.0, 0.0)), ("N", (0.0, 0.0, r))],
        basis="sto-3g",
        unit="Angstrom",
        verbose=0)
    mf = scf.RHF(mol).run()
    cas = mcscf.CASCI(mf, 6, 6)
    h, e_core = cas.get_h1eff()
    eri = ao2mo.restore(1, cas.get_h2eff(), 6)
    integrals = MolecularIntegrals(
        n_spatial=6,
        n_electrons=6,
        ms2=0,
        e_core=float(e_core),
        h_spatial=0.5 * (h + h.T),
        eri_spatial=eri)
  else:
    raise ValueError("Unknown system {!r}; expected one of {}.".format(
        system, sorted(GRIDS)))
  integrals.validate()
  return integrals


def make_fixtures(system: Text,
                  grid: Optional[Sequence[float]] = None,
                  directory: Optional[Text] = None) -> List[Text]:
  """Write `<system>_<R>.fcidump` files for every point of `grid`.

  Returns:
    The written paths.
  """
  directory = directory or fixture_directory()
  os.makedirs(directory, exist_ok=True)
  grid = GRIDS[system.lower()] if grid is None else grid
  paths = []
  for r in grid:
    path = os.path.join(directory, fixture_name(system, r))
    with open(path, "w") as f:
      write_fcidump(build_integrals(system, r), f, tolerance=1e-15)
    logger.info("wrote %s", path)
    paths.append(path)
  return paths

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

import numpy as np
import pytest
from adapt_rdm import fixtures
from adapt_rdm.integrals import MolecularIntegrals, load_fcidump


def pytest_addoption(parser):
  parser.addoption(
      "--runslow",
      action="store_true",
      default=False,
      help="run the long reproduction tests")


def pytest_configure(config):
  config.addinivalue_line("markers", "slow: long reproduction run")


def pytest_collection_modifyitems(config, items):
  if config.getoption("--runslow"):
    return
  skip_slow = pytest.mark.skip(reason="needs --runslow")
  for item in items:
    if "slow" in item.keywords:
      item.add_marker(skip_slow)


@pytest.fixture(name="rng")
def rng_fixture():
  return np.random.RandomState(10)


@pytest.fixture(name="h2_integrals")
def h2_integrals_fixture():
  return load_fcidump(fixtures.find_fixture("h2", 0.7414))


def make_random_integrals(rng, n_spatial, n_electrons, ms2=0):
  """Random integrals with the 8-fold symmetry of real orbitals."""
  h = rng.randn(n_spatial, n_spatial)
  h = 0.5 * (h + h.T)
  pairs = n_spatial * (n_spatial + 1) // 2
  block = rng.randn(pairs, pairs)
  block = 0.25 * (block + block.T)
  pair = np.zeros((n_spatial, n_spatial), dtype=int)
  position = 0
  for i in range(n_spatial):
    for j in range(i + 1):
      pair[i, j] = pair[j, i] = position
      position += 1
  eri = block[pair[:, :, None, None], pair[None, None, :, :]]
  return MolecularIntegrals(
      n_spatial=n_spatial,
      n_electrons=n_electrons,
      ms2=ms2,
      e_core=float(rng.rand()),
      h_spatial=h,
      eri_spatial=eri)


@pytest.fixture(name="random_integrals")
def random_integrals_fixture(rng):
  """Factory `(n_spatial, n_electrons, ms2=0) -> MolecularIntegrals`."""
  return lambda n_spatial, n_electrons, ms2=0: make_random_integrals(
      rng, n_spatial, n_electrons, ms2)


@pytest.fixture(name="h4_integrals", scope="session")
def h4_integrals_fixture():
  return load_fcidump(fixtures.find_fixture("h4", 1.8))

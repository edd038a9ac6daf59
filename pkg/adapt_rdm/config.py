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
"""Numerical defaults shared across the package.

Every threshold used by more than one module lives here so that a run can be
reproduced from the values logged at start-up.
"""

# Operator algebra.
PRUNE_THRESHOLD = 1e-14
HERMITICITY_TOLERANCE = 1e-10

# Statevector bookkeeping.
NORM_TOLERANCE = 1e-10
LEAKAGE_THRESHOLD = 1e-10
DENSE_EIGH_MAX_DIMENSION = 400

# Reduced density matrices. Rank-6 tensors beyond this many spin orbitals
# are refused.
MAX_DENSE_RANK6_ORBITALS = 16

# BFGS.
BFGS_GTOL = 1e-7
BFGS_MAXITER = 10000
WOLFE_C1 = 1e-4
WOLFE_C2 = 0.9
FINITE_DIFFERENCE_STEP = 1e-5

# ADAPT outer loop.
DEFAULT_EPSILON = 1e-4
ENERGY_STALL = 1e-10
MONOTONICITY_SLACK = 1e-10
DEFAULT_MAX_ITERATIONS = 200

# Unit conversions.
HARTREE_TO_KCAL_MOL = 627.5095
HARTREE_TO_MILLIHARTREE = 1e3

# Environment variable overriding the bundled fixture directory.
FIXTURES_ENV_VAR = "ADAPT_RDM_FIXTURES"

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
"""Energy minimization over the parameters of a product-of-exponentials
ansatz."""
import logging
import warnings
from typing import Any, Callable, NamedTuple, Sequence, Text, Tuple
import numpy as np
from scipy import optimize
from adapt_rdm import config
from adapt_rdm.operator_algebra import PauliSum
from adapt_rdm.statevector import (Operator, State, expm_action,
                                   operator_action)

logger = logging.getLogger(__name__)
Tensor = Any


class LineSearchWarning(RuntimeWarning):
  """BFGS stopped before reaching the gradient tolerance."""


class Ansatz:
  """`exp(theta_k A_k) ... exp(theta_1 A_1) |reference>`.

  `A_l` is the anti-Hermitian matrix of the `l`-th generator (see
  `PauliSum.generator_matrix`).
  """

  def __init__(self, reference: State,
               generators: Sequence[PauliSum] = ()) -> None:
    for g in generators:
      if g.n_qubits != reference.n_qubits:
        raise ValueError("Generator acts on {} qubits, reference has "
                         "{}.".format(g.n_qubits, reference.n_qubits))
    self.reference = reference
    self.generators = tuple(generators)

  def __len__(self) -> int:
    return len(self.generators)

  def extend(self, generators: Sequence[PauliSum]) -> "Ansatz":
    return Ansatz(self.reference, self.generators + tuple(generators))

  def _check(self, theta: Tensor) -> Tensor:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (len(self),):
      raise ValueError("Expected {} parameters, got shape {}.".format(
          len(self), theta.shape))
    return theta

  def prepare(self, theta: Tensor) -> State:
    theta = self._check(theta)
    psi = self.reference.amplitudes
    for g, t in zip(self.generators, theta):
      psi = expm_action(g.generator_matrix(), t, psi)
    return State(psi)

  def energy_and_gradient(self, theta: Tensor,
                          operator: Operator) -> Tuple[float, Tensor]:
    """`<psi|O|psi>` and its parameter gradient in one forward and one
    backward sweep.

    The gradient is `2 Re <psi| O U_k .. U_{l+1} A_l |psi_l>` with
    `|psi_l>` the state after the first `l` exponentials.

    Args:
      theta: Parameters.
      operator: A Hermitian operator (`PauliSum`, matrix, `LinearOperator`
        or callable).
    Returns:
      The expectation value and the gradient.
    """
    theta = self._check(theta)
    apply = operator_action(operator)
    matrices = [g.generator_matrix() for g in self.generators]
    states = [self.reference.amplitudes]
    for matrix, t in zip(matrices, theta):
      states.append(expm_action(matrix, t, states[-1]))
    sigma = apply(states[-1])
    energy = float(np.vdot(states[-1], sigma).real)
    gradient = np.zeros(len(self))
    for l in reversed(range(len(self))):
      gradient[l] = 2.0 * np.vdot(sigma, matrices[l] @ states[l + 1]).real
      sigma = expm_action(matrices[l], -theta[l], sigma)
    return energy, gradient

  def objective(self, operator: Operator,
                offset: float = 0.0) -> "ObjectiveBundle":
    """Objective `theta -> <psi(theta)|O|psi(theta)> + offset`."""
    def value_and_gradient(theta):
      energy, gradient = self.energy_and_gradient(theta, operator)
      return energy + offset, gradient

    return ObjectiveBundle.from_value_and_gradient(value_and_gradient,
                                                   len(self))


class ObjectiveBundle(NamedTuple):
  """A differentiable scalar objective.

  Attributes:
    evaluate: `theta -> value`.
    gradient: `theta -> gradient`.
    dimension: Number of parameters.
    value_and_gradient: `theta -> (value, gradient)`.
  """
  evaluate: Callable[[Tensor], float]
  gradient: Callable[[Tensor], Tensor]
  dimension: int
  value_and_gradient: Callable[[Tensor], Tuple[float, Tensor]]

  @classmethod
  def from_value_and_gradient(cls, fn: Callable[[Tensor], Tuple[float,
                                                              Tensor]],
                              dimension: int) -> "ObjectiveBundle":
    """Wrap a joint evaluator, reusing the last result for repeated points."""
    cache = {}

    def value_and_gradient(theta):
      key = np.asarray(theta, dtype=float).tobytes()
      if cache.get("key") != key:
        cache["key"] = key
        cache["value"] = fn(np.asarray(theta, dtype=float))
      value, gradient = cache["value"]
      return value, np.array(gradient)

    return cls(
        evaluate=lambda theta: value_and_gradient(theta)[0],
        gradient=lambda theta: value_and_gradient(theta)[1],
        dimension=dimension,
        value_and_gradient=value_and_gradient)

  @classmethod
  def from_functions(cls, evaluate: Callable[[Tensor], float],
                     gradient: Callable[[Tensor], Tensor],
                     dimension: int) -> "ObjectiveBundle":
    return cls(evaluate, gradient, dimension,
               lambda theta: (evaluate(theta), gradient(theta)))


def analytic_gradient(ansatz: Sequence[PauliSum], theta: Tensor,
                      reference: State, h: Operator) -> Tensor:
  """Gradient of `<psi(theta)|h|psi(theta)>` for the given generators."""
  return Ansatz(reference, ansatz).energy_and_gradient(theta, h)[1]


def finite_difference_gradient(fn: Callable[[Tensor], float],
                               theta: Tensor,
                               step: float = config.FINITE_DIFFERENCE_STEP
                              ) -> Tensor:
  """Central finite-difference gradient."""
  theta = np.asarray(theta, dtype=float)
  gradient = np.zeros_like(theta)
  for i in range(theta.shape[0]):
    shift = np.zeros_like(theta)
    shift[i] = step
    gradient[i] = (fn(theta + shift) - fn(theta - shift)) / (2 * step)
  return gradient


class OptimizeResult(NamedTuple):
  """Outcome of `minimize`.

  Attributes:
    theta: Best parameters found.
    energy: Objective value at `theta`.
    iterations: BFGS iterations.
    n_evaluations: Objective evaluations.
    gradient_norm: Max-norm of the gradient at `theta`.
    warnflag: 0 converged, 1 iteration limit, 2 line-search failure.
    message: Optimizer message.
  """
  theta: Tensor
  energy: float
  iterations: int
  n_evaluations: int
  gradient_norm: float
  warnflag: int
  message: Text


def minimize(obj: ObjectiveBundle,
             theta0: Tensor,
             gtol: float = config.BFGS_GTOL,
             maxiter: int = config.BFGS_MAXITER,
             c1: float = config.WOLFE_C1,
             c2: float = config.WOLFE_C2) -> OptimizeResult:
  """BFGS with a strong-Wolfe line search.

  Stops when the max-norm of the gradient drops below `gtol` or after
  `maxiter` iterations. On a line-search failure the best point seen is
  returned together with a `LineSearchWarning`.

  Args:
    obj: The objective.
    theta0: Starting point.
    gtol: Gradient tolerance (max-norm).
    maxiter: Iteration limit.
    c1: Sufficient-decrease constant.
    c2: Curvature constant.
  Returns:
    An `OptimizeResult`.
  """
  theta0 = np.asarray(theta0, dtype=float)
  if theta0.shape != (obj.dimension,):
    raise ValueError("theta0 has shape {}, expected ({},).".format(
        theta0.shape, obj.dimension))
  if obj.dimension == 0:
    value, _ = obj.value_and_gradient(theta0)
    return OptimizeResult(theta0, float(value), 0, 1, 0.0, 0, "empty ansatz")

  best = {"value": np.inf, "theta": theta0, "evaluations": 0}

  def fun(theta):
    value, gradient = obj.value_and_gradient(theta)
    best["evaluations"] += 1
    if value < best["value"]:
      best["value"] = value
      best["theta"] = np.array(theta)
    return value, gradient

  progress = {"iteration": 0, "theta": theta0}

  def callback(theta):
    progress["iteration"] += 1
    if logger.isEnabledFor(logging.DEBUG):
      value, gradient = obj.value_and_gradient(theta)
      logger.debug("iter=%d energy=%.12f grad_norm=%.3e step=%.3e",
                   progress["iteration"], value,
                   np.max(np.abs(gradient)),
                   np.linalg.norm(theta - progress["theta"]))
    progress["theta"] = np.array(theta)

  result = optimize.minimize(
      fun,
      theta0,
      jac=True,
      method="BFGS",
      callback=callback,
      options={
          "gtol": gtol,
          "norm": np.inf,
          "maxiter": maxiter,
          "c1": c1,
          "c2": c2
      })
  theta = np.asarray(result.x, dtype=float)
  value = float(result.fun)
  if best["value"] < value:
    theta, value = best["theta"], float(best["value"])
  gradient = obj.gradient(theta)
  warnflag = int(result.status) if not result.success else 0
  if warnflag:
    warnings.warn(
        "BFGS stopped after {} iterations with gradient max-norm {:.3e}: "
        "{}".format(result.nit, np.max(np.abs(gradient)), result.message),
        LineSearchWarning)
  return OptimizeResult(
      theta=theta,
      energy=value,
      iterations=int(result.nit),
      n_evaluations=best["evaluations"],
      gradient_norm=float(np.max(np.abs(gradient))),
      warnflag=warnflag,
      message=str(result.message))

"""
entropy.py

Entropy of Markov measures: the closed-form chain entropy and the
variational inf-formula

    h(mu) = inf over positive a of  mu( log( L_rho(a) / (rho a) ) )

restricted to depth-k cylinder functions a = exp(theta).
"""

from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import minimize
from scipy.special import entr

from ..config import get_settings
from ..errors import InvalidModel, OptimizerFailure
from ..spectral import GibbsMeasure, MarkovMeasure
from ..symbolic import CylinderFunction, CylinderPotential, truncation, word_table
from ..transfer import TransferOperator, transfer_matrix
from ..utils import get_logger

logger = get_logger("entropy")

GRADIENT_CHECK_STEP = 1e-5
GRADIENT_CHECK_TOL = 1e-5
GRADIENT_CHECK_FLOOR = 1e-2
MAX_OPTIMIZER_ITER = 5000

MeasureLike = Union[MarkovMeasure, GibbsMeasure]


# ==========================================
# Results
# ==========================================
@dataclass
class OptimizerDiagnostics:
    iterations: int = 0
    evaluations: int = 0
    restarts: int = 1
    gradient_norm: float = 0.0
    gradient_error: Optional[float] = None
    converged: bool = True
    message: str = ""
    history: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "restarts": self.restarts,
            "gradient_norm": self.gradient_norm,
            "gradient_error": self.gradient_error,
            "converged": self.converged,
            "message": self.message,
        }


@dataclass
class VariationalResult:
    """
    Optimal value of an inf (entropy) or sup-inf (pressure) problem

    `argmin` is the optimal depth-k function for entropy problems;
    `measure` the maximizing Markov measure for min-max pressure.
    """
    value: float
    depth: int
    diagnostics: OptimizerDiagnostics
    argmin: Optional[CylinderFunction] = None
    measure: Optional[MarkovMeasure] = None

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"value": self.value, "depth": self.depth, "diagnostics": self.diagnostics.to_dict()}
        if self.argmin is not None:
            payload["argmin"] = self.argmin.as_dict()
        if self.measure is not None:
            payload["p"] = self.measure.p
            payload["P"] = self.measure.P
        return payload


def _markov(mu: MeasureLike) -> MarkovMeasure:
    return mu.markov if isinstance(mu, GibbsMeasure) else mu


# ==========================================
# Closed form
# ==========================================
def entropy_oracle(mu: MeasureLike) -> float:
    """-sum_ij p_i P(i, j) log P(i, j), with 0 log 0 = 0"""
    mu = _markov(mu)
    return float(np.sum(mu.p[:, None] * entr(mu.P)))


# ==========================================
# Inf-problem over depth-k functions
# ==========================================
@dataclass
class InnerSolution:
    theta: np.ndarray
    value: float
    diagnostics: OptimizerDiagnostics


class InfProblem:
    """
    theta -> sum_v m1[v] log (L e^theta)[v] - sum_w mk[w] theta[w]

    m1 is the marginal at depth max(k - 1, 1) (where L a lives) and mk the
    marginal at depth k. The map is convex in theta and invariant under
    theta + c, so theta[0] is pinned to 0.

    Args:
        op: transfer operator with a depth-2 weight
        depth: k >= 1
    """

    def __init__(self, op: TransferOperator, depth: int):
        if depth < 1:
            raise InvalidModel(f"depth must be >= 1 (got {depth})")
        self.op = op
        self.depth = depth
        self.outer_depth = max(depth, 2)
        self.image_depth = max(depth - 1, 1)
        self.matrix = transfer_matrix(op, depth)
        self.size = len(word_table(op.spec, depth))
        self._to_depth = truncation(op.spec, self.outer_depth, depth)
        self._to_image = truncation(op.spec, self.outer_depth, self.image_depth)

    def marginals(self, weights: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """(m1, mk) from depth-max(k, 2) cylinder weights"""
        m1 = np.bincount(self._to_image, weights=weights, minlength=self.matrix.shape[0])
        mk = np.bincount(self._to_depth, weights=weights, minlength=self.size)
        return m1, mk

    def full_theta(self, free: np.ndarray) -> np.ndarray:
        return np.concatenate(([0.0], free))

    def value_and_grad(self, free: np.ndarray, m1: np.ndarray, mk: np.ndarray) -> Tuple[float, np.ndarray]:
        theta = self.full_theta(free)
        shift = np.max(theta)
        a = np.exp(theta - shift)
        image = self.matrix @ a
        value = float(m1 @ (np.log(image) + shift) - mk @ theta)
        grad = a * (self.matrix.T @ (m1 / image)) - mk
        return value, grad[1:]

    def integrand(self, theta: np.ndarray) -> np.ndarray:
        """log(L a) - log(a) on every depth-max(k, 2) word"""
        shift = np.max(theta)
        log_image = np.log(self.matrix @ np.exp(theta - shift)) + shift
        return log_image[self._to_image] - theta[self._to_depth]

    def gradient_error(self, free: np.ndarray, m1: np.ndarray, mk: np.ndarray) -> float:
        """Relative sup-distance between the analytic gradient and central differences"""
        _, grad = self.value_and_grad(free, m1, mk)
        numeric = np.empty_like(free)
        for i in range(free.shape[0]):
            step = np.zeros_like(free)
            step[i] = GRADIENT_CHECK_STEP
            plus, _ = self.value_and_grad(free + step, m1, mk)
            minus, _ = self.value_and_grad(free - step, m1, mk)
            numeric[i] = (plus - minus) / (2 * GRADIENT_CHECK_STEP)
        scale = max(float(np.max(np.abs(grad))), float(np.max(np.abs(numeric))), GRADIENT_CHECK_FLOOR)
        return float(np.max(np.abs(grad - numeric)) / scale)

    def check_gradient(self, free: np.ndarray, m1: np.ndarray, mk: np.ndarray, seed: int = 0) -> float:
        """Validate at `free` and at a seeded random point; raise if either disagrees"""
        if free.shape[0] == 0:
            return 0.0
        rng = np.random.default_rng(seed)
        error = max(
            self.gradient_error(free, m1, mk),
            self.gradient_error(rng.normal(size=free.shape[0]), m1, mk),
        )
        if error > GRADIENT_CHECK_TOL:
            raise OptimizerFailure(
                f"analytic gradient disagrees with finite differences (relative error {error:.3e})",
                diagnostics={"gradient_error": error},
            )
        return error

    def solve(
        self,
        m1: np.ndarray,
        mk: np.ndarray,
        start: Optional[np.ndarray] = None,
        check_gradient: bool = True,
    ) -> InnerSolution:
        """
        Minimize over theta with BFGS

        Returns:
            InnerSolution; raises OptimizerFailure if the final gradient norm
            exceeds THERMOFORMAL_GRADIENT_TOL by more than the acceptance margin
        """
        settings = get_settings()
        free = np.zeros(self.size - 1) if start is None else np.asarray(start, dtype=float)[1:] - start[0]
        gradient_error = self.check_gradient(free, m1, mk) if check_gradient else None

        if free.shape[0] == 0:
            value, _ = self.value_and_grad(free, m1, mk)
            return InnerSolution(self.full_theta(free), value, OptimizerDiagnostics(gradient_error=gradient_error))

        result = minimize(
            self.value_and_grad,
            free,
            args=(m1, mk),
            jac=True,
            method="BFGS",
            options={"gtol": settings.gradient_tol, "maxiter": MAX_OPTIMIZER_ITER},
        )
        _, grad = self.value_and_grad(result.x, m1, mk)
        grad_norm = float(np.max(np.abs(grad)))
        diagnostics = OptimizerDiagnostics(
            iterations=int(result.nit),
            evaluations=int(result.nfev),
            gradient_norm=grad_norm,
            gradient_error=gradient_error,
            converged=grad_norm <= settings.gradient_tol,
            message=str(result.message),
        )
        if grad_norm > settings.gradient_accept:
            raise OptimizerFailure(f"inner minimization stalled at gradient norm {grad_norm:.3e}", diagnostics=diagnostics.to_dict())
        if not diagnostics.converged:
            logger.debug(f"accepted BFGS result with gradient norm {grad_norm:.3e} ({result.message})")
        return InnerSolution(self.full_theta(result.x), float(result.fun), diagnostics)


# ==========================================
# Operations
# ==========================================
def _operator_for(mu: MarkovMeasure, rho: CylinderPotential) -> TransferOperator:
    op = TransferOperator.from_potential(rho)
    if op.spec != mu.spec:
        raise InvalidModel("measure and weight live on different subshifts (recode the measure first)")
    return op


def log_weight_integral(mu: MeasureLike, op: TransferOperator) -> float:
    """mu(log rho) for the operator's depth-2 weight"""
    mu = _markov(mu)
    return float(np.sum(mu.pair_weights * op.rho.log_weights.as_matrix()))


def entropy_variational(mu: MeasureLike, rho: CylinderPotential, depth: int, check_gradient: bool = True) -> VariationalResult:
    """
    J_k* = inf over positive depth-k a of mu(log(L_rho a / (rho a)))

    Args:
        mu: order-1 Markov measure on rho's (recoded) subshift
        rho: weight, any depth (recoded to depth 2)
        depth: k >= 1

    Returns:
        VariationalResult with the optimal a (normalized so a(first word) = 1)
    """
    mu = _markov(mu)
    op = _operator_for(mu, rho)
    problem = InfProblem(op, depth)
    m1, mk = problem.marginals(mu.to_measure(problem.outer_depth).weights)
    solution = problem.solve(m1, mk, check_gradient=check_gradient)

    value = solution.value - log_weight_integral(mu, op)
    argmin = CylinderFunction(op.spec, depth, np.exp(solution.theta))
    logger.info(f"J_{depth}* = {value:.15g} after {solution.diagnostics.iterations} iterations")
    return VariationalResult(value=value, depth=depth, diagnostics=solution.diagnostics, argmin=argmin)


def ratio_depth(rho: CylinderPotential, rho_prime: CylinderPotential) -> int:
    """1 if rho / rho' depends only on the first symbol, else 2"""
    diff = (rho.log_weights - rho_prime.log_weights).as_matrix()
    spec = rho.spec
    for i in range(spec.d):
        row = diff[i][spec.matrix[i] > 0]
        if np.ptp(row) > 1e-14 * max(1.0, float(np.max(np.abs(row)))):
            return 2
    return 1


def entropy_rho_independence_check(
    mu: MeasureLike,
    rho: CylinderPotential,
    rho_prime: CylinderPotential,
    depth: int,
) -> Tuple[VariationalResult, VariationalResult]:
    """
    The inf-formula does not depend on the weight

    The substitution a' = a rho / rho' maps depth-k competitors to depth
    max(k, r) competitors, r the depth of rho / rho'; the second value is
    computed at that depth.

    Returns:
        (J* with rho at depth k, J* with rho' at depth max(k, r))
    """
    if rho.depth != 2 or rho_prime.depth != 2:
        raise InvalidModel("the independence check needs canonical depth-2 weights")
    if rho.spec != rho_prime.spec:
        raise InvalidModel("both weights must live on the same subshift")
    depth_prime = max(depth, ratio_depth(rho, rho_prime))
    first = entropy_variational(mu, rho, depth)
    second = entropy_variational(mu, rho_prime, depth_prime)
    logger.info(f"rho-independence: {first.value:.12g} vs {second.value:.12g} (depths {depth}, {depth_prime})")
    return first, second

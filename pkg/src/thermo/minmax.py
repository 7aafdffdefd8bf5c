"""
minmax.py

Min-max pressure: P(A) = sup over Markov mu of inf over positive f of mu(log(L f / f)).

The outer problem runs over row-stochastic P on the transition support in
softmax coordinates; the inner problem is the depth-k InfProblem. The
outer gradient comes from the envelope theorem: at the inner optimum the
value is linear in the cylinder weights of mu.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.optimize import minimize

from ..config import get_settings
from ..errors import InvalidModel, NonPrimitive, OptimizerFailure
from ..spectral import MarkovMeasure, product_weights, stationary_distribution
from ..symbolic import CylinderPotential, is_primitive, word_table
from ..transfer import TransferOperator
from ..utils import get_logger
from .entropy import InfProblem, OptimizerDiagnostics, VariationalResult

logger = get_logger("minmax")

OUTER_GTOL = 1e-7
OUTER_MAX_ITER = 500


class SoftmaxChart:
    """Unconstrained coordinates z on the support of the transitions, one softmax per row"""

    def __init__(self, spec):
        self.spec = spec
        support = spec.matrix > 0
        # rows with a single successor carry P = 1 and no coordinate
        free_rows = support.sum(axis=1) > 1
        self.mask = support & free_rows[:, None]
        self.size = int(self.mask.sum())

    def matrix(self, z: np.ndarray) -> np.ndarray:
        logits = np.full((self.spec.d, self.spec.d), -np.inf)
        logits[self.spec.matrix > 0] = 0.0
        logits[self.mask] = z
        logits = logits - np.max(logits, axis=1, keepdims=True)
        weights = np.exp(logits)
        return weights / weights.sum(axis=1, keepdims=True)

    def pull_back(self, P: np.ndarray, G: np.ndarray) -> np.ndarray:
        """dF/dz_ab = P_ab (G_ab - sum_j G_aj P_aj)"""
        row_mean = np.sum(np.where(P > 0, G * P, 0.0), axis=1, keepdims=True)
        return (P * (G - row_mean))[self.mask]


@dataclass
class RestartOutcome:
    index: int
    value: float
    P: np.ndarray
    iterations: int
    gradient_norm: float
    history: List[float]
    message: str


class MinMaxProblem:
    """Outer objective F(z) with its envelope gradient; warm-starts the inner problem"""

    def __init__(self, op: TransferOperator, depth: int):
        self.op = op
        self.spec = op.spec
        self.inner = InfProblem(op, depth)
        self.chart = SoftmaxChart(op.spec)
        self.words = word_table(op.spec, self.inner.outer_depth)
        self.theta: Optional[np.ndarray] = None
        self.history: List[float] = []
        self._checked = False

    def evaluate(self, z: np.ndarray):
        """(F, dF/dz) for the Markov measure with transition matrix softmax(z)"""
        P = self.chart.matrix(z)
        p = stationary_distribution(P)
        weights = product_weights(self.spec, self.inner.outer_depth, p, P, np.ones(self.spec.d))
        m1, mk = self.inner.marginals(weights)

        solution = self.inner.solve(m1, mk, start=self.theta, check_gradient=not self._checked)
        self._checked = True
        self.theta = solution.theta
        value = solution.value
        self.history.append(value)

        # envelope gradient of F = sum_w mu[w] g(w)
        contribution = weights * self.inner.integrand(solution.theta)
        direct = np.zeros((self.spec.d, self.spec.d))
        array = self.words.array
        for t in range(array.shape[1] - 1):
            np.add.at(direct, (array[:, t], array[:, t + 1]), contribution / P[array[:, t], array[:, t + 1]])
        by_start = np.bincount(array[:, 0], weights=contribution, minlength=self.spec.d) / p

        # dp = p dP A^-1 with A = I - P + 1 p
        A = np.eye(self.spec.d) - P + np.outer(np.ones(self.spec.d), p)
        through_p = np.outer(p, np.linalg.solve(A, by_start))
        G = direct + through_p
        return value, self.chart.pull_back(P, G)


def _run_restart(op: TransferOperator, depth: int, index: int, seed: int, tol: float) -> RestartOutcome:
    problem = MinMaxProblem(op, depth)
    rng = np.random.default_rng([seed, index])
    z0 = np.zeros(problem.chart.size) if index == 0 else rng.normal(size=problem.chart.size)

    if problem.chart.size == 0:
        value, _ = problem.evaluate(z0)
        return RestartOutcome(index, value, problem.chart.matrix(z0), 0, 0.0, list(problem.history), "no free coordinates")

    def negated(z):
        value, grad = problem.evaluate(z)
        return -value, -grad

    result = minimize(negated, z0, jac=True, method="BFGS", options={"gtol": min(tol, OUTER_GTOL), "maxiter": OUTER_MAX_ITER})
    value, grad = problem.evaluate(result.x)
    outcome = RestartOutcome(
        index=index,
        value=value,
        P=problem.chart.matrix(result.x),
        iterations=int(result.nit),
        gradient_norm=float(np.max(np.abs(grad))),
        history=list(problem.history),
        message=str(result.message),
    )
    logger.debug(f"restart {index}: value={value:.12g} iterations={outcome.iterations} |grad|={outcome.gradient_norm:.2e}")
    return outcome


def pressure_minmax(
    pot: CylinderPotential,
    depth: int = 1,
    restarts: int = 4,
    seed: int = 0,
    tol: Optional[float] = None,
    workers: Optional[int] = None,
) -> VariationalResult:
    """
    sup over order-1 Markov measures of the depth-k inf-formula

    Args:
        pot: potential A (recoded to depth 2)
        depth: k >= 1, depth of the inner competitors
        restarts: r >= 1 seeded starting points (restart 0 starts from uniform rows)
        seed: base seed; restart i uses default_rng([seed, i])
        tol: outer tolerance (default THERMOFORMAL_MINMAX_TOL)
        workers: threads for the restarts (default THERMOFORMAL_WORKERS)

    Returns:
        VariationalResult with the maximizing MarkovMeasure; the merge picks
        the best value, then the lowest restart index
    """
    settings = get_settings()
    tol = settings.minmax_tol if tol is None else tol
    workers = settings.workers if workers is None else workers
    if depth < 1:
        raise InvalidModel(f"depth must be >= 1 (got {depth})")
    if restarts < 1:
        raise InvalidModel(f"restarts must be >= 1 (got {restarts})")

    op = TransferOperator.from_potential(pot)
    if not is_primitive(op.spec):
        raise NonPrimitive("min-max pressure needs a primitive transition matrix")

    if workers > 1 and restarts > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(lambda i: _run_restart(op, depth, i, seed, tol), range(restarts)))
    else:
        outcomes = [_run_restart(op, depth, i, seed, tol) for i in range(restarts)]

    best = sorted(outcomes, key=lambda o: (-o.value, o.index))[0]
    if not np.isfinite(best.value):
        raise OptimizerFailure("min-max pressure produced a non-finite value", diagnostics={"restart": best.index})

    diagnostics = OptimizerDiagnostics(
        iterations=best.iterations,
        evaluations=len(best.history),
        restarts=restarts,
        gradient_norm=best.gradient_norm,
        converged=best.gradient_norm <= max(tol, OUTER_GTOL) or best.iterations == 0,
        message=best.message,
        history=best.history,
    )
    measure = MarkovMeasure.from_transition(op.spec, best.P)
    logger.info(f"min-max pressure {best.value:.12g} (restart {best.index} of {restarts})")
    return VariationalResult(value=best.value, depth=depth, diagnostics=diagnostics, measure=measure)

"""
pressure.py

Topological pressure P(A) = log lambda of the (recoded) transfer operator.
"""

from typing import Optional

import numpy as np
from scipy.special import logsumexp

from ..config import get_settings
from ..errors import InvalidModel, NoConvergence, NonPrimitive
from ..symbolic import CylinderFunction, CylinderPotential, SubshiftSpec, is_primitive
from ..spectral import rpf_solve
from ..transfer import TransferOperator
from ..utils import get_logger

logger = get_logger("pressure")


def log_lambda(pot: CylinderPotential) -> float:
    return rpf_solve(TransferOperator.from_potential(pot)).log_lambda


def pressure(pot: CylinderPotential) -> float:
    """log lambda of L_(e^A); equals sup over invariant mu of h(mu) + mu(A)"""
    value = log_lambda(pot)
    logger.info(f"P(A) = {value:.15g}")
    return value


def pressure_at_temperature(pot: CylinderPotential, beta: float) -> float:
    """P(beta A); beta = 0 gives the topological entropy"""
    return pressure(pot.scaled(beta))


def topological_entropy(spec: SubshiftSpec) -> float:
    """Pressure of the zero potential, log of the Perron root of the transitions"""
    return pressure(CylinderPotential.constant(spec, 0.0))


def pressure_oracle(pot: CylinderPotential) -> float:
    """Dense eigenvalue solve of the recoded matrix; used to cross-check the power iteration"""
    op = TransferOperator.from_potential(pot)
    if not is_primitive(op.spec):
        raise NonPrimitive("pressure needs a primitive transition matrix")
    values = np.linalg.eigvals(op.scaled_matrix)
    return float(np.log(np.max(np.real(values))) + op.log_scale)


def pressure_from_log_weights(
    spec: SubshiftSpec,
    log_weights: CylinderFunction,
    tol: float = 1e-13,
    max_iter: Optional[int] = None,
) -> float:
    """
    log lambda computed entirely in log space

    Power iteration x <- logsumexp_j(A(i, j) + x_j). The Collatz-Wielandt
    bounds min(y - x) <= log lambda <= max(y - x) give the stopping rule,
    so entries that would underflow exp() stay usable.

    Args:
        spec: primitive subshift
        log_weights: depth-2 A on spec
        tol: width of the final bracket on log lambda
        max_iter: iteration cap (default THERMOFORMAL_MAX_ITER)
    """
    if log_weights.spec != spec or log_weights.depth > 2:
        raise InvalidModel("log-space pressure needs a depth <= 2 table on the same subshift")
    if not is_primitive(spec):
        raise NonPrimitive("pressure needs a primitive transition matrix")
    max_iter = get_settings().max_iter if max_iter is None else max_iter

    table = log_weights.extend(2).as_matrix()
    table = np.where(spec.matrix > 0, table, -np.inf)
    x = np.zeros(spec.d)
    lower, upper = -np.inf, np.inf
    for iteration in range(1, max_iter + 1):
        y = logsumexp(table + x[None, :], axis=1)
        diff = y - x
        lower, upper = float(np.min(diff)), float(np.max(diff))
        if upper - lower < tol * max(1.0, abs(upper)):
            logger.debug(f"log-space iteration converged after {iteration} steps")
            return 0.5 * (lower + upper)
        x = y - np.max(y)
    raise NoConvergence("log-space power iteration did not converge", residual=upper - lower, iterations=max_iter)

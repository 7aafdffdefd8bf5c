"""
bowen.py

Bowen's equation P(-beta log H) = 0 for an expanding H (min H > 1).
"""

from typing import Iterable, List, Optional, Tuple, Union

import numpy as np
from scipy.optimize import bisect

from ..config import get_settings
from ..errors import DegenerateSystem, HNotExpanding, NoConvergence
from ..symbolic import CylinderFunction, CylinderPotential, higher_block_recode
from ..utils import get_logger
from .pressure import log_lambda, pressure_from_log_weights

logger = get_logger("bowen_root")

LOG_SPACE_BETA = 50.0
MAX_DOUBLINGS = 60

HLike = Union[CylinderFunction, CylinderPotential]


def as_h_function(H: HLike) -> CylinderFunction:
    """H given directly, or as a potential whose weights are H"""
    if isinstance(H, CylinderPotential):
        return H.weights
    return H


def pressure_of_h(H: HLike, beta: float) -> float:
    """P(-beta log H); log-space iteration for beta > 50"""
    H = as_h_function(H)
    pot = CylinderPotential.from_H(H, beta)
    if beta <= LOG_SPACE_BETA:
        return log_lambda(pot)
    spec, canonical = higher_block_recode(pot.spec, pot)
    return pressure_from_log_weights(spec, canonical.log_weights)


def bowen_pressure_curve(H: HLike, betas: Iterable[float]) -> List[Tuple[float, float]]:
    return [(float(beta), pressure_of_h(H, float(beta))) for beta in betas]


def bowen_root(H: HLike, tol: Optional[float] = None) -> float:
    """
    Unique beta* with P(-beta* log H) = 0

    beta -> P(-beta log H) decreases strictly with slope between -log max H
    and -log min H, so bisection on a geometrically grown bracket converges.

    Args:
        H: strictly positive cylinder function with min H > 1
        tol: bound on |P(-beta* log H)| (default THERMOFORMAL_BOWEN_TOL)

    Returns:
        beta*
    """
    tol = get_settings().bowen_tol if tol is None else tol
    if tol <= 0:
        raise ValueError("tol must be positive")
    H = as_h_function(H)
    if H.min() <= 1.0:
        raise HNotExpanding(H.min())

    h_top = pressure_of_h(H, 0.0)
    if h_top <= 1e-12:
        raise DegenerateSystem(f"topological entropy {h_top:.3e} is not positive; P(-beta log H) < 0 for every beta > 0")

    beta_hi = 1.0
    value_hi = pressure_of_h(H, beta_hi)
    doublings = 0
    while value_hi > 0.0:
        doublings += 1
        if doublings > MAX_DOUBLINGS:
            raise DegenerateSystem("could not bracket the root of P(-beta log H)")
        beta_hi *= 2.0
        value_hi = pressure_of_h(H, beta_hi)
    if value_hi == 0.0:
        return beta_hi

    # |P(b) - P(b*)| <= log(max H) |b - b*|
    xtol = tol / (2.0 * max(float(np.log(H.max())), 1.0))
    beta_star, info = bisect(
        lambda b: pressure_of_h(H, b),
        0.0,
        beta_hi,
        xtol=xtol,
        rtol=4 * np.finfo(float).eps,
        maxiter=500,
        full_output=True,
        disp=False,
    )
    residual = abs(pressure_of_h(H, beta_star))
    if residual >= tol:
        raise NoConvergence(f"Bowen root residual {residual:.3e} exceeds tol", residual=residual, iterations=info.iterations)
    logger.info(f"beta* = {beta_star:.15g} after {info.iterations} bisection steps")
    return float(beta_star)

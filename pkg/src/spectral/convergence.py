"""
convergence.py

Convergence of iterated normalized transfer operators to the Gibbs mean.
"""

from dataclasses import dataclass
from typing import List

import numpy as np

from ..errors import InvalidModel, NotNormalized
from ..symbolic import CylinderFunction
from ..transfer import TransferOperator, apply, normalization_defect
from ..utils import get_logger
from .gibbs import eigen_measure
from .rpf import rpf_solve, spectral_gap

logger = get_logger("convergence")

NORMALIZED_TOL = 1e-10


@dataclass
class ConvergenceReport:
    """
    e_n = |L^n a - mu(a)|_inf for n = 0..N

    The bound e_n <= C gap^(n') e_0 is checked with n' = max(n - depth + 1, 0):
    the first depth - 1 applications only shorten the window of a.
    """
    errors: List[float]
    mean: float
    gap: float
    constant: float
    bound_holds: bool
    empirical_rate: float
    floor: float
    depth: int = 1

    def to_dict(self) -> dict:
        return {
            "errors": list(self.errors),
            "mean": self.mean,
            "gap": self.gap,
            "constant": self.constant if np.isfinite(self.constant) else None,
            "bound_holds": self.bound_holds,
            "empirical_rate": self.empirical_rate,
        }


def _empirical_rate(errors: List[float], start: int, floor: float) -> float:
    """Geometric-mean decay ratio over n >= start, errors above the floor only"""
    above = [n for n in range(start, len(errors)) if errors[n] > floor]
    if len(above) < 2:
        return 0.0
    first, last = above[0], above[-1]
    return float((errors[last] / errors[first]) ** (1.0 / (last - first)))


def convergence_report(op_norm: TransferOperator, a: CylinderFunction, N: int) -> ConvergenceReport:
    """
    Sup-distances between L~^n a and the constant mu(a)

    Args:
        op_norm: normalized operator (L1 = 1)
        a: cylinder function on op_norm's subshift
        N: number of iterations (N + 1 errors)

    Returns:
        ConvergenceReport
    """
    if N < 0:
        raise InvalidModel("N must be >= 0")
    defect = normalization_defect(op_norm)
    if defect > NORMALIZED_TOL:
        raise NotNormalized(defect)

    spectral = rpf_solve(op_norm)
    mu = eigen_measure(spectral, op_norm, a.depth)
    mean = mu.integrate(a)
    gap = spectral_gap(op_norm, spectral)

    errors = []
    current = a
    for _ in range(N + 1):
        errors.append((current - mean).sup_norm())
        current = apply(op_norm, current)

    floor = 1e-13 * max(a.sup_norm(), 1.0)
    constant = 0.0
    holds = True
    e0 = errors[0]
    for n, e_n in enumerate(errors):
        if e_n <= floor:
            continue
        reference = gap ** max(n - a.depth + 1, 0) * e0
        if reference <= 0.0:
            constant, holds = float("inf"), False
            break
        constant = max(constant, e_n / reference)

    rate = _empirical_rate(errors, a.depth, floor)
    logger.info(f"mean={mean:.15g} gap={gap:.6g} rate={rate:.6g} C={constant:.6g}")
    return ConvergenceReport(
        errors=errors,
        mean=mean,
        gap=gap,
        constant=constant,
        bound_holds=holds,
        empirical_rate=rate,
        floor=floor,
        depth=a.depth,
    )

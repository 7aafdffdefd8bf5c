"""
conditions.py

Measure-level KMS conditions.

crossed product:     phi(a) = phi(L~(Lambda a))   (= phi(L_rho a))
approximately proper: phi(a) = phi(Lambda^-[n] E_n(Lambda^[n] a)),  E_n = alpha^n L~^n

phi o L_rho = phi forces lambda = 1, so the crossed-product condition only has
solutions at the inverse temperature solving P(-beta log H) = 0, where the
eigen-measure of L_rho* passes. The approximately-proper condition does not see lambda.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from ..errors import InvalidModel
from ..spectral import spectral_gap
from ..symbolic import CylinderFunction, word_table
from ..thermo import bowen_root, equilibrium_check
from ..thermo.bowen import HLike
from ..transfer import alpha_power, apply, apply_power
from ..utils import get_logger
from .instance import KmsInstance, KmsState, lambda_n_closed_form, tilde_state

logger = get_logger("kms")


def crossed_product_residual(inst: KmsInstance, state: KmsState, a: CylinderFunction) -> float:
    """|phi(a) - phi(L~(Lambda a))|; for the eigen-measure this is |1 - lambda| phi(a)"""
    image = apply(inst.op_tilde, inst.Lambda * a)
    return abs(state(a) - state(image))


def approx_proper_residual(inst: KmsInstance, state: KmsState, a: CylinderFunction, n: int) -> Tuple[float, float]:
    """
    Approximately-proper residual at order n, in two forms

    Returns:
        (closed-form residual with Lambda^[n] = lambda^n alpha^n(k) / k,
         simplified residual |phi~(a') - phi~(alpha^n L~^n a')| with a' = a / k, phi~(x) = phi(k x))
    """
    if n < 1:
        raise InvalidModel(f"n must be >= 1 (got {n})")
    cocycle = lambda_n_closed_form(inst, n)
    expected = alpha_power(apply_power(inst.op_tilde, cocycle * a, n), n) / cocycle
    closed = abs(state(a) - state(expected))

    k = inst.k
    a_prime = a / k
    shifted = alpha_power(apply_power(inst.op_tilde, a_prime, n), n)
    simplified = abs(state(k * a_prime) - state(k * shifted))
    return closed, simplified


# ==========================================
# Sweeps over the indicator basis
# ==========================================
@dataclass
class SweepReport:
    """Max residuals over indicators of admissible words; ties keep the first word in lexicographic order"""
    crossed: float = 0.0
    approx: float = 0.0
    agreement: float = 0.0
    crossed_word: Optional[Tuple[int, ...]] = None
    approx_word: Optional[Tuple[int, ...]] = None
    count: int = 0

    def to_dict(self) -> dict:
        return {
            "max_crossed_residual": self.crossed,
            "max_approx_residual": self.approx,
            "max_form_disagreement": self.agreement,
            "crossed_word": list(self.crossed_word) if self.crossed_word else None,
            "approx_word": list(self.approx_word) if self.approx_word else None,
            "basis_size": self.count,
        }


def residual_sweep(inst: KmsInstance, state: KmsState, n: int = 1, depth: int = 2) -> SweepReport:
    """Both residuals on every indicator of an admissible word of length <= depth"""
    report = SweepReport()
    for length in range(1, depth + 1):
        for word in word_table(inst.spec, length).words:
            a = CylinderFunction.indicator(inst.spec, word)
            crossed = crossed_product_residual(inst, state, a)
            closed, simplified = approx_proper_residual(inst, state, a, n)
            report.count += 1
            report.agreement = max(report.agreement, abs(closed - simplified))
            if crossed > report.crossed:
                report.crossed, report.crossed_word = crossed, word
            if closed > report.approx:
                report.approx, report.approx_word = closed, word
    logger.info(f"sweep over {report.count} indicators: crossed={report.crossed:.3e} approx={report.approx:.3e}")
    return report


def v_algebra_beta(H: HLike, tol: Optional[float] = None) -> float:
    """The only inverse temperature with KMS states on the V-algebra: P(-beta log H) = 0"""
    return bowen_root(H, tol)


# ==========================================
# Telescoping convergence
# ==========================================
@dataclass
class TelescopingReport:
    """
    lhs = |phi~(L~a - a)| against bounds[n] = |L~^(n+1)a - phi~(a)| + |phi~(a) - L~^n a|

    holds: lhs <= bounds[n] (+1e-12) for every n; equilibrium: lhs < 1e-9.
    """
    lhs: float
    bounds: List[float]
    holds: bool
    final_bound: float
    empirical_rate: float
    gap: float
    equilibrium: bool
    equilibrium_gap: Optional[float] = None
    mean: float = 0.0
    notes: List[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "fixed_point_residual": self.lhs,
            "bounds": list(self.bounds),
            "holds": self.holds,
            "final_bound": self.final_bound,
            "empirical_rate": self.empirical_rate,
            "spectral_gap": self.gap,
            "equilibrium": self.equilibrium,
            "equilibrium_gap": self.equilibrium_gap,
            "mean": self.mean,
        }


def telescoping_convergence_check(inst: KmsInstance, state: KmsState, a: CylinderFunction, N: int) -> TelescopingReport:
    """
    Check |phi~(L~a - a)| <= |L~^(n+1)a - phi~(a)| + |phi~(a) - L~^n a| for n <= N

    The right side decays at the spectral-gap rate, so a state passing for
    large N is a fixed point of L~* and hence an equilibrium state for rho.
    """
    if N < 1:
        raise InvalidModel(f"N must be >= 1 (got {N})")
    tilde = tilde_state(inst, state)
    mean = tilde(a)
    lhs = abs(tilde(apply(inst.op_tilde, a) - a))

    iterates = [a]
    for _ in range(N + 1):
        iterates.append(apply(inst.op_tilde, iterates[-1]))
    distances = [(f - mean).sup_norm() for f in iterates]
    bounds = [distances[n + 1] + distances[n] for n in range(N + 1)]
    holds = all(lhs <= bound + 1e-12 for bound in bounds)

    floor = 1e-13 * max(a.sup_norm(), 1.0)
    above = [n for n, bound in enumerate(bounds) if bound > floor and n >= a.depth]
    rate = float((bounds[above[-1]] / bounds[above[0]]) ** (1.0 / (above[-1] - above[0]))) if len(above) >= 2 else 0.0

    notes = []
    try:
        equilibrium_gap = equilibrium_check(tilde.to_markov(), inst.rho).gap
    except InvalidModel as exc:
        equilibrium_gap = None
        notes.append(f"state is not shift-invariant: {exc.message}")

    report = TelescopingReport(
        lhs=lhs,
        bounds=bounds,
        holds=holds,
        final_bound=bounds[-1],
        empirical_rate=rate,
        gap=spectral_gap(inst.op_tilde),
        equilibrium=lhs < 1e-9,
        equilibrium_gap=equilibrium_gap,
        mean=mean,
        notes=notes,
    )
    logger.info(f"telescoping: lhs={lhs:.3e} final bound={report.final_bound:.3e} rate={rate:.4g} gap={report.gap:.4g}")
    return report

"""
equilibrium.py

Equilibrium-state checks: h(mu) + mu(log b) against p(b).
"""

from dataclasses import asdict, dataclass
from typing import Optional, Union

import numpy as np

from ..config import get_settings
from ..errors import InvalidModel, NotNormalized
from ..spectral import GibbsMeasure, MarkovMeasure
from ..symbolic import CylinderFunction, CylinderPotential, higher_block_recode
from ..transfer import CylinderMeasure, TransferOperator, apply, normalization_defect
from .entropy import entropy_oracle
from .pressure import pressure

NORMALIZED_TOL = 1e-10


@dataclass
class EquilibriumRecord:
    lhs: float
    p_of_b: float
    gap: float
    is_equilibrium: bool = False

    def to_dict(self) -> dict:
        return asdict(self)


def _markov(mu) -> MarkovMeasure:
    return mu.markov if isinstance(mu, GibbsMeasure) else mu


def integrate_potential(mu: Union[MarkovMeasure, GibbsMeasure], pot: CylinderPotential) -> float:
    """mu(A); deeper potentials are read on the recoded alphabet the measure lives on"""
    mu = _markov(mu)
    spec, canonical = higher_block_recode(pot.spec, pot)
    if spec != mu.spec:
        raise InvalidModel("measure does not live on the (recoded) subshift of the potential")
    return float(np.sum(mu.pair_weights * canonical.log_weights.as_matrix()))


def equilibrium_check(mu: Union[MarkovMeasure, GibbsMeasure], b: CylinderPotential, tol: Optional[float] = None) -> EquilibriumRecord:
    """
    Gap in the variational principle for the weight b

    gap = p(b) - (h(mu) + mu(log b)) is >= 0 and vanishes exactly at the
    equilibrium state.
    """
    tol = get_settings().entropy_tol if tol is None else tol
    lhs = entropy_oracle(mu) + integrate_potential(mu, b)
    p_of_b = pressure(b)
    gap = p_of_b - lhs
    return EquilibriumRecord(lhs=lhs, p_of_b=p_of_b, gap=gap, is_equilibrium=abs(gap) <= tol)


def jensen_gap(op_norm: TransferOperator, mu: Union[MarkovMeasure, GibbsMeasure, CylinderMeasure], a: CylinderFunction) -> float:
    """
    mu(log L a - L log a) for a normalized operator and positive a

    L is a pointwise average when L1 = 1, so the integrand is >= 0 by
    concavity of log.
    """
    defect = normalization_defect(op_norm)
    if defect > NORMALIZED_TOL:
        raise NotNormalized(defect)
    integrand = apply(op_norm, a).log() - apply(op_norm, a.log())
    if isinstance(mu, CylinderMeasure):
        return mu.integrate(integrand)
    return _markov(mu).to_measure(integrand.depth).integrate(integrand)

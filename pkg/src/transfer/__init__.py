"""
transfer package

Ruelle operators on cylinder functions and their duals on cylinder measures.
"""

from .operator import (
    TransferOperator,
    alpha_lift,
    alpha_power,
    apply,
    apply_power,
    normalization_defect,
    normalize,
    transfer_matrix,
)
from .measure import CylinderMeasure, dual_apply

__all__ = [
    "TransferOperator",
    "alpha_lift",
    "alpha_power",
    "apply",
    "apply_power",
    "normalization_defect",
    "normalize",
    "transfer_matrix",
    "CylinderMeasure",
    "dual_apply",
]

"""
kms package

Measure-level KMS states and the crossed-product / approximately-proper conditions.
"""

from .instance import (
    KmsInstance,
    KmsState,
    is_balanced,
    kms_measure,
    lambda_n,
    lambda_n_closed_form,
    tilde_state,
)
from .conditions import (
    SweepReport,
    TelescopingReport,
    approx_proper_residual,
    crossed_product_residual,
    residual_sweep,
    telescoping_convergence_check,
    v_algebra_beta,
)

__all__ = [
    "KmsInstance",
    "KmsState",
    "is_balanced",
    "kms_measure",
    "lambda_n",
    "lambda_n_closed_form",
    "tilde_state",
    "SweepReport",
    "TelescopingReport",
    "approx_proper_residual",
    "crossed_product_residual",
    "residual_sweep",
    "telescoping_convergence_check",
    "v_algebra_beta",
]

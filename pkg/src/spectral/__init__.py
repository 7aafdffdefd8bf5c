"""
spectral package

Perron eigendata, Gibbs / Markov / eigen-measures and convergence reports.
"""

from .rpf import SpectralData, rpf_solve, spectral_gap
from .gibbs import (
    GibbsMeasure,
    MarkovMeasure,
    eigen_measure,
    eigen_measure_cylinder,
    gibbs_measure,
    gibbs_of,
    parry_measure,
    product_weights,
    stationary_distribution,
)
from .convergence import ConvergenceReport, convergence_report

__all__ = [
    "SpectralData",
    "rpf_solve",
    "spectral_gap",
    "GibbsMeasure",
    "MarkovMeasure",
    "eigen_measure",
    "eigen_measure_cylinder",
    "gibbs_measure",
    "gibbs_of",
    "parry_measure",
    "product_weights",
    "stationary_distribution",
    "ConvergenceReport",
    "convergence_report",
]

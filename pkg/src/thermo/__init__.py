"""
thermo package

Pressure, entropy, the min-max principle, equilibrium checks and Bowen's equation.
"""

from .pressure import (
    log_lambda,
    pressure,
    pressure_at_temperature,
    pressure_from_log_weights,
    pressure_oracle,
    topological_entropy,
)
from .entropy import (
    InfProblem,
    OptimizerDiagnostics,
    VariationalResult,
    entropy_oracle,
    entropy_rho_independence_check,
    entropy_variational,
    log_weight_integral,
    ratio_depth,
)
from .minmax import pressure_minmax
from .equilibrium import EquilibriumRecord, equilibrium_check, integrate_potential, jensen_gap
from .bowen import bowen_pressure_curve, bowen_root, pressure_of_h

__all__ = [
    "log_lambda",
    "pressure",
    "pressure_at_temperature",
    "pressure_from_log_weights",
    "pressure_oracle",
    "topological_entropy",
    "InfProblem",
    "OptimizerDiagnostics",
    "VariationalResult",
    "entropy_oracle",
    "entropy_rho_independence_check",
    "entropy_variational",
    "log_weight_integral",
    "ratio_depth",
    "pressure_minmax",
    "EquilibriumRecord",
    "equilibrium_check",
    "integrate_potential",
    "jensen_gap",
    "bowen_pressure_curve",
    "bowen_root",
    "pressure_of_h",
]

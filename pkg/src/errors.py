"""
errors.py

Exception hierarchy shared by every module.
Each error knows the process exit code the CLI reports for it and
renders itself as a machine-readable error object.
"""

from typing import Any, Dict, Optional


class ThermoError(Exception):
    """Base class for all thermoformal errors"""

    exit_code: int = 1
    kind: str = "error"

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = details

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"type": self.__class__.__name__, "kind": self.kind, "message": self.message}
        if self.details:
            payload["details"] = self.details
        return payload


# ==========================================
# 1. Configuration errors (exit 2)
# ==========================================
class ConfigError(ThermoError):
    exit_code = 2
    kind = "config"


class InvalidModel(ConfigError, ValueError):
    """A model file, a subshift or a potential violates its invariants"""

    def __init__(self, message: str, location: Optional[str] = None, **details: Any):
        if location is not None:
            details["location"] = location
        super().__init__(message, **details)


class UnknownCommand(ConfigError):
    pass


class InadmissibleWord(ConfigError, ValueError):
    def __init__(self, word, message: Optional[str] = None):
        super().__init__(message or f"word {tuple(word)} is not admissible", word=list(word))
        self.word = tuple(word)


# ==========================================
# 2. Numerical errors (exit 3)
# ==========================================
class NumericalError(ThermoError):
    exit_code = 3
    kind = "numerical"


class NonPrimitive(NumericalError):
    pass


class NoConvergence(NumericalError):
    def __init__(self, message: str, residual: float, iterations: int):
        super().__init__(message, residual=float(residual), iterations=int(iterations))
        self.residual = float(residual)
        self.iterations = int(iterations)


class NotNormalized(NumericalError):
    def __init__(self, deviation: float):
        super().__init__(f"operator is not normalized: |L1 - 1| = {deviation:.3e}", deviation=float(deviation))
        self.deviation = float(deviation)


class HNotExpanding(NumericalError):
    def __init__(self, min_h: float):
        super().__init__(f"min H = {min_h!r} must exceed 1", min_H=float(min_h))
        self.min_h = float(min_h)


class DegenerateSystem(NumericalError):
    pass


class OptimizerFailure(NumericalError):
    def __init__(self, message: str, diagnostics: Optional[Dict[str, Any]] = None):
        super().__init__(message, diagnostics=diagnostics or {})
        self.diagnostics = diagnostics or {}

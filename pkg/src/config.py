"""
config.py

Runtime settings read from the environment (.env supported).
"""

import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel, Field, field_validator

load_dotenv()


class Settings(BaseModel):
    """
    Process-wide defaults

    Model files may override the tolerances per run (see schemas.ToleranceConfig).
    """
    log_level: str = Field(default="error", description="error | info | debug")
    spectral_tol: float = Field(default=1e-12, gt=0)
    max_iter: int = Field(default=100_000, ge=1)
    entropy_tol: float = Field(default=1e-8, gt=0)
    minmax_tol: float = Field(default=1e-4, gt=0)
    bowen_tol: float = Field(default=1e-10, gt=0)
    gradient_tol: float = Field(default=1e-9, gt=0)
    gradient_accept: float = Field(default=1e-6, gt=0)
    workers: int = Field(default=1, ge=1)

    @field_validator("log_level")
    @classmethod
    def _known_level(cls, value: str) -> str:
        value = value.strip().lower()
        if value not in ("error", "info", "debug"):
            raise ValueError(f"THERMOFORMAL_LOG must be error, info or debug (got {value!r})")
        return value

    @classmethod
    def from_env(cls) -> "Settings":
        env = {
            "log_level": os.getenv("THERMOFORMAL_LOG"),
            "spectral_tol": os.getenv("THERMOFORMAL_SPECTRAL_TOL"),
            "max_iter": os.getenv("THERMOFORMAL_MAX_ITER"),
            "entropy_tol": os.getenv("THERMOFORMAL_ENTROPY_TOL"),
            "minmax_tol": os.getenv("THERMOFORMAL_MINMAX_TOL"),
            "bowen_tol": os.getenv("THERMOFORMAL_BOWEN_TOL"),
            "gradient_tol": os.getenv("THERMOFORMAL_GRADIENT_TOL"),
            "workers": os.getenv("THERMOFORMAL_WORKERS"),
        }
        return cls(**{key: value for key, value in env.items() if value is not None})


# singleton
_settings: Optional[Settings] = None


def get_settings() -> Settings:
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def reset_settings() -> None:
    """Forget the cached settings (the next get_settings() re-reads the environment)"""
    global _settings
    _settings = None


def override_settings(**updates) -> Settings:
    """Replace the cached settings with a copy carrying `updates` (None values ignored)"""
    global _settings
    updates = {key: value for key, value in updates.items() if value is not None}
    _settings = Settings(**{**get_settings().model_dump(), **updates})
    return _settings

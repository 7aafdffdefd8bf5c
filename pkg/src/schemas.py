"""
schemas.py

Pydantic models for model files, measure files and result envelopes.
Unknown fields are rejected so a typo in a model file fails loudly with its location.
"""

from typing import Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

# number | flat list (lexicographic admissible words) | d x d matrix | {"0,1,1": value}
TableValues = Union[float, List[float], List[List[float]], Dict[str, float]]


# ==========================================
# 1. Model file
# ==========================================
class PotentialConfig(BaseModel):
    """
    Potential description

    kind:
    - table: A given by `values` at `depth`
    - constant: A == value
    - two_coordinate: rho(i, j) from `weights` (or A(i, j) from `log_weights`)
    - from_H: rho = H^-beta with H given by `H`; beta = "critical" solves P(-beta log H) = 0
    """
    model_config = ConfigDict(extra="forbid")

    kind: Literal["table", "constant", "two_coordinate", "from_H"] = Field(..., description="how the potential is given")
    depth: Optional[int] = Field(None, ge=1, description="table depth; inferred from the values when omitted")
    values: Optional[TableValues] = Field(None, description="A values for kind=table")
    value: float = Field(default=0.0, description="A for kind=constant")
    weights: Optional[List[List[float]]] = Field(None, description="positive d x d rho for kind=two_coordinate")
    log_weights: Optional[List[List[float]]] = Field(None, description="d x d A for kind=two_coordinate")
    H: Optional[TableValues] = Field(None, description="positive H for kind=from_H")
    beta: Union[float, Literal["critical"]] = Field(default=1.0, description="inverse temperature for kind=from_H")

    @model_validator(mode="after")
    def _fields_for_kind(self):
        if self.kind == "table" and self.values is None:
            raise ValueError("kind=table needs `values`")
        if self.kind == "two_coordinate" and (self.weights is None) == (self.log_weights is None):
            raise ValueError("kind=two_coordinate needs exactly one of `weights` or `log_weights`")
        if self.kind == "from_H" and self.H is None:
            raise ValueError("kind=from_H needs `H`")
        return self


class ToleranceConfig(BaseModel):
    """Per-run overrides of the THERMOFORMAL_* defaults"""
    model_config = ConfigDict(extra="forbid")

    spectral: Optional[float] = Field(None, gt=0)
    entropy: Optional[float] = Field(None, gt=0)
    minmax: Optional[float] = Field(None, gt=0)
    bowen: Optional[float] = Field(None, gt=0)
    gradient: Optional[float] = Field(None, gt=0)
    max_iter: Optional[int] = Field(None, ge=1)


class ModelConfig(BaseModel):
    """Subshift + potential + optional seed and tolerances"""
    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "alphabet_size": 2,
                "transitions": [[1, 1], [1, 0]],
                "potential": {"kind": "constant", "value": 0.0},
                "seed": 7,
            }
        },
    )

    alphabet_size: int = Field(..., ge=1, description="d; symbols are 0..d-1")
    transitions: List[List[int]] = Field(..., description="d x d 0/1 table, row = current symbol")
    potential: PotentialConfig
    seed: Optional[int] = Field(None, description="default seed for randomized commands")
    tolerances: Optional[ToleranceConfig] = None


# ==========================================
# 2. Measure file (a gibbs envelope or a bare {p, P})
# ==========================================
class MeasureFile(BaseModel):
    model_config = ConfigDict(extra="ignore")

    p: List[float]
    P: List[List[float]]


# ==========================================
# 3. Output
# ==========================================
class ResultEnvelope(BaseModel):
    """Everything a command prints; `wall_time` is the only field that varies between identical runs"""
    model_config = ConfigDict(extra="forbid")

    ok: bool = True
    command: str
    inputs_digest: str = Field(..., description="SHA-256 of the canonical config + flags")
    outputs: Dict[str, Any] = Field(default_factory=dict)
    diagnostics: Dict[str, Any] = Field(default_factory=dict)
    wall_time: float = 0.0

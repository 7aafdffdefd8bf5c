"""
io.py

Model loading, measure loading and envelope serialization.
"""

import csv
import io
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from pydantic import ValidationError

from ..config import override_settings
from ..errors import InvalidModel
from ..schemas import MeasureFile, ModelConfig, PotentialConfig, ResultEnvelope
from ..spectral import MarkovMeasure
from ..symbolic import CylinderFunction, CylinderPotential, SubshiftSpec, word_table
from ..thermo import bowen_root
from ..utils import dumps

MAX_INFERRED_DEPTH = 8


@dataclass(frozen=True, eq=False)
class ModelBundle:
    """
    Parsed model file

    H and beta are set for kind=from_H (beta = "critical" is resolved to the
    root of P(-beta log H) = 0); for other kinds the KMS commands use
    H = e^-A at beta = 1 (so rho = e^A).
    """
    config: ModelConfig
    spec: SubshiftSpec
    potential: CylinderPotential
    H: Optional[CylinderFunction] = None
    beta: float = 1.0

    def kms_generator(self):
        if self.H is not None:
            return self.H, self.beta
        return (-self.potential.log_weights).exp(), 1.0


# ==========================================
# Loading
# ==========================================
def _read_json(path: str) -> Any:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InvalidModel(f"cannot read {path}: {exc.strerror}", location=str(path)) from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidModel(f"invalid JSON: {exc.msg}", location=f"line {exc.lineno}, column {exc.colno}") from exc


def _validation_error(exc: ValidationError) -> InvalidModel:
    first = exc.errors()[0]
    location = ".".join(str(part) for part in first["loc"]) or None
    return InvalidModel(first["msg"], location=location, errors=len(exc.errors()))


def _infer_depth(spec: SubshiftSpec, size: int, location: str) -> int:
    for depth in range(1, MAX_INFERRED_DEPTH + 1):
        count = len(word_table(spec, depth))
        if count == size:
            return depth
        if count > size:
            break
    raise InvalidModel(f"{size} values do not match the admissible words of any depth", location=location)


def build_table(spec: SubshiftSpec, values, depth: Optional[int], location: str) -> CylinderFunction:
    """Number, flat list, d x d matrix or {"0,1": v} mapping -> CylinderFunction"""
    if isinstance(values, (int, float)):
        return CylinderFunction.constant(spec, float(values), depth or 1)
    if isinstance(values, dict):
        keys = list(values)
        if not keys:
            raise InvalidModel("empty value mapping", location=location)
        inferred = len([part for part in keys[0].replace(" ", ",").split(",") if part])
        return CylinderFunction.from_mapping(spec, depth or inferred, values)
    if values and isinstance(values[0], list):
        if depth not in (None, 2):
            raise InvalidModel("a matrix of values describes a depth-2 table", location=location)
        return CylinderFunction.from_matrix(spec, values)
    depth = depth or _infer_depth(spec, len(values), location)
    return CylinderFunction(spec, depth, np.asarray(values, dtype=float))


def build_potential(spec: SubshiftSpec, config: PotentialConfig, bowen_tol: Optional[float] = None):
    """Returns (potential, H or None, beta)"""
    if config.kind == "constant":
        return CylinderPotential.constant(spec, config.value), None, 1.0
    if config.kind == "table":
        return CylinderPotential.from_log(build_table(spec, config.values, config.depth, "potential.values")), None, 1.0
    if config.kind == "two_coordinate":
        if config.weights is not None:
            return CylinderPotential.two_coordinate(spec, config.weights), None, 1.0
        return CylinderPotential.from_log(CylinderFunction.from_matrix(spec, config.log_weights)), None, 1.0
    H = build_table(spec, config.H, config.depth, "potential.H")
    beta = bowen_root(H, bowen_tol) if config.beta == "critical" else config.beta
    return CylinderPotential.from_H(H, beta), H, beta


def parse_model(data: Dict[str, Any]) -> ModelBundle:
    try:
        config = ModelConfig.model_validate(data)
    except ValidationError as exc:
        raise _validation_error(exc) from exc
    spec = SubshiftSpec(config.alphabet_size, tuple(tuple(row) for row in config.transitions))
    bowen_tol = config.tolerances.bowen if config.tolerances else None
    potential, H, beta = build_potential(spec, config.potential, bowen_tol)
    return ModelBundle(config=config, spec=spec, potential=potential, H=H, beta=beta)


def load_model(path: str) -> ModelBundle:
    return parse_model(_read_json(path))


def apply_tolerances(config: ModelConfig) -> None:
    """Model-file tolerances override the environment for this run"""
    tolerances = config.tolerances
    if tolerances is None:
        return
    override_settings(
        spectral_tol=tolerances.spectral,
        entropy_tol=tolerances.entropy,
        minmax_tol=tolerances.minmax,
        bowen_tol=tolerances.bowen,
        gradient_tol=tolerances.gradient,
        max_iter=tolerances.max_iter,
    )


def load_measure(path: str, spec: SubshiftSpec) -> MarkovMeasure:
    """A gibbs envelope (its `outputs`) or a bare {"p": ..., "P": ...} file"""
    data = _read_json(path)
    if isinstance(data, dict) and "outputs" in data:
        data = data["outputs"]
    try:
        measure = MeasureFile.model_validate(data)
    except ValidationError as exc:
        raise _validation_error(exc) from exc
    return MarkovMeasure(spec, measure.p, measure.P)


# ==========================================
# Writing
# ==========================================
def _flatten(prefix: str, value: Any, rows: list) -> None:
    if hasattr(value, "tolist"):
        value = value.tolist()
    if isinstance(value, dict):
        for key, item in value.items():
            _flatten(f"{prefix}.{key}" if prefix else str(key), item, rows)
    elif isinstance(value, (list, tuple)):
        for index, item in enumerate(value):
            _flatten(f"{prefix}[{index}]", item, rows)
    else:
        rows.append((prefix, value))


def render(envelope: ResultEnvelope, fmt: str = "json") -> str:
    """json: whole envelope; csv: one `field,value` row per scalar output; text: aligned `key: value` lines"""
    payload = envelope.model_dump()
    if fmt == "json":
        return dumps(payload, indent=2) + "\n"

    rows: list = []
    _flatten("", payload["outputs"], rows)
    if fmt == "csv":
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["field", "value"])
        for key, value in rows:
            writer.writerow([key, dumps(value) if isinstance(value, float) else value])
        return buffer.getvalue()
    if fmt == "text":
        width = max([len(key) for key, _ in rows] + [len("command")])
        lines = [f"{'command'.ljust(width)}: {envelope.command}"]
        lines += [f"{key.ljust(width)}: {dumps(value)}" for key, value in rows]
        return "\n".join(lines) + "\n"
    raise InvalidModel(f"unknown format {fmt!r}", location="--format")


def write_envelope(envelope: ResultEnvelope, path: str) -> None:
    try:
        Path(path).write_text(render(envelope, "json"), encoding="utf-8")
    except OSError as exc:
        raise InvalidModel(f"cannot write {path}: {exc.strerror}", location="--out") from exc

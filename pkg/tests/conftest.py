"""
conftest.py

Shared systems: the full 2-shift, the golden-mean shift, B = [[2, 1], [1, 1]]
and seeded random primitive systems.
"""

import math

import numpy as np
import pytest

from src.config import reset_settings
from src.errors import InvalidModel
from src.spectral import MarkovMeasure
from src.symbolic import (
    CylinderFunction,
    CylinderPotential,
    SubshiftSpec,
    full_shift,
    golden_mean_shift,
    is_primitive,
    word_table,
)

GOLDEN = (1 + math.sqrt(5)) / 2
B211 = [[2.0, 1.0], [1.0, 1.0]]
B211_LAMBDA = (3 + math.sqrt(5)) / 2


def random_spec(rng: np.random.Generator, d: int) -> SubshiftSpec:
    """Random primitive 0/1 transitions (density ~0.7)"""
    while True:
        matrix = (rng.random((d, d)) < 0.7).astype(int)
        try:
            spec = SubshiftSpec(d, tuple(tuple(int(x) for x in row) for row in matrix))
        except InvalidModel:
            continue
        if is_primitive(spec):
            return spec


def random_potential(rng: np.random.Generator, spec: SubshiftSpec, depth: int) -> CylinderPotential:
    """A uniform in [-2, 2] on the admissible depth-n words"""
    size = len(word_table(spec, depth))
    return CylinderPotential(CylinderFunction(spec, depth, rng.uniform(-2.0, 2.0, size)))


def random_markov(rng: np.random.Generator, spec: SubshiftSpec) -> MarkovMeasure:
    """Random positive transition matrix on the support of the transitions"""
    P = rng.random((spec.d, spec.d)) * spec.matrix + 1e-3 * spec.matrix
    P = P / P.sum(axis=1, keepdims=True)
    return MarkovMeasure.from_transition(spec, P)


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from the default settings"""
    for name in ("THERMOFORMAL_LOG", "THERMOFORMAL_WORKERS", "THERMOFORMAL_SPECTRAL_TOL", "THERMOFORMAL_MAX_ITER"):
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()


@pytest.fixture
def full2() -> SubshiftSpec:
    return full_shift(2)


@pytest.fixture
def golden() -> SubshiftSpec:
    return golden_mean_shift()


@pytest.fixture
def b211(full2) -> CylinderPotential:
    return CylinderPotential.two_coordinate(full2, B211)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)

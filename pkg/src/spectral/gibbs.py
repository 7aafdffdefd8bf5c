"""
gibbs.py

Markov measures, Gibbs measures and eigen-measures on cylinder sets.

Every measure here has product form
    weight(w) = initial[w_0] * prod_t transfer[w_t, w_t+1] * terminal[w_n-1]
which product_weights evaluates for all admissible n-words at once.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ..errors import InadmissibleWord, InvalidModel
from ..symbolic import (
    CylinderPotential,
    SubshiftSpec,
    encode_word,
    is_admissible,
    word_table,
)
from ..transfer import CylinderMeasure, TransferOperator
from .rpf import SpectralData, rpf_solve

# measures rebuilt from power-iteration eigenvectors carry defects near 1e-11
MARKOV_TOL = 1e-9


def product_weights(spec: SubshiftSpec, n: int, initial, transfer, terminal) -> np.ndarray:
    """initial[w_0] * prod transfer[w_t, w_t+1] * terminal[w_n-1] for every admissible n-word"""
    initial = np.asarray(initial, dtype=float)
    transfer = np.asarray(transfer, dtype=float)
    terminal = np.asarray(terminal, dtype=float)
    weights = initial.copy()
    for length in range(2, n + 1):
        table = word_table(spec, length)
        weights = weights[table.prefix] * transfer[table.array[:, -2], table.array[:, -1]]
    return weights * terminal[word_table(spec, n).last]


def stationary_distribution(P: np.ndarray) -> np.ndarray:
    """Left Perron vector of a row-stochastic matrix, normalized to sum 1"""
    values, vectors = np.linalg.eig(P.T)
    index = int(np.argmin(np.abs(values - 1.0)))
    p = np.abs(np.real(vectors[:, index]))
    return p / np.sum(p)


@dataclass(frozen=True, eq=False)
class MarkovMeasure:
    """
    Order-1 shift-invariant Markov measure (p, P) on a subshift

    Args:
        spec: subshift
        p: stationary distribution
        P: row-stochastic matrix, zero where transitions forbid
        tol: tolerance for the invariants
    """
    spec: SubshiftSpec
    p: np.ndarray
    P: np.ndarray
    tol: float = MARKOV_TOL
    order: int = 1

    def __post_init__(self):
        p = np.array(self.p, dtype=float).reshape(-1)
        P = np.array(self.P, dtype=float)
        d = self.spec.d
        if p.shape != (d,) or P.shape != (d, d):
            raise InvalidModel(f"Markov measure needs p of length {d} and a {d} x {d} matrix P")
        if np.any(p < 0) or abs(np.sum(p) - 1.0) > self.tol:
            raise InvalidModel("p must be a probability vector")
        if np.any(P < 0) or np.any(np.abs(P.sum(axis=1) - 1.0) > self.tol):
            raise InvalidModel("P must be row-stochastic")
        if np.any(P[self.spec.matrix == 0] != 0):
            raise InvalidModel("P charges a forbidden transition")
        if np.max(np.abs(p @ P - p)) > self.tol:
            raise InvalidModel("p is not stationary for P")
        for arr in (p, P):
            arr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "P", P)

    @classmethod
    def from_transition(cls, spec: SubshiftSpec, P, tol: float = MARKOV_TOL) -> "MarkovMeasure":
        P = np.asarray(P, dtype=float)
        return cls(spec, stationary_distribution(P), P, tol=tol)

    @property
    def pair_weights(self) -> np.ndarray:
        """mu[i, j] = p_i P(i, j)"""
        return self.p[:, None] * self.P

    def to_measure(self, depth: int) -> CylinderMeasure:
        weights = product_weights(self.spec, depth, self.p, self.P, np.ones(self.spec.d))
        return CylinderMeasure(self.spec, depth, weights)

    def cylinder_weight(self, word: Sequence[int]) -> float:
        word = tuple(int(s) for s in word)
        if not is_admissible(self.spec, word):
            raise InadmissibleWord(word)
        weight = self.p[word[0]]
        for a, b in zip(word, word[1:]):
            weight *= self.P[a, b]
        return float(weight)


@dataclass(frozen=True, eq=False)
class GibbsMeasure:
    """Gibbs measure of a potential: the Markov chain plus the data it came from"""
    markov: MarkovMeasure
    operator: TransferOperator
    spectral: SpectralData
    potential: Optional[CylinderPotential] = None

    @property
    def spec(self) -> SubshiftSpec:
        return self.markov.spec

    @property
    def p(self) -> np.ndarray:
        return self.markov.p

    @property
    def P(self) -> np.ndarray:
        return self.markov.P

    def to_measure(self, depth: int) -> CylinderMeasure:
        return self.markov.to_measure(depth)

    def cylinder_weight(self, word: Sequence[int]) -> float:
        return self.markov.cylinder_weight(word)

    def original_cylinder_weight(self, word: Sequence[int]) -> float:
        """Weight of a word over the potential's own alphabet (length >= m - 1)"""
        source = self.operator.source or self.operator.spec
        m = self.operator.block_depth
        if m == 2:
            return self.markov.cylinder_weight(word)
        return self.markov.cylinder_weight(encode_word(source, m, word))

    def original_measure(self, depth: int) -> CylinderMeasure:
        source = self.operator.source or self.operator.spec
        table = word_table(source, depth)
        return CylinderMeasure(source, depth, np.array([self.original_cylinder_weight(w) for w in table.words]))


# ==========================================
# Operations
# ==========================================
def gibbs_measure(spectral: SpectralData, op: TransferOperator, potential: Optional[CylinderPotential] = None) -> GibbsMeasure:
    """
    mu = phi nu after normalization, as a Markov chain

    p_i = u_i v_i / sum_k u_k v_k and P(i, j) = B(i, j) u_j / (lambda u_i).
    """
    u, v = spectral.right_vector, spectral.left_vector
    scaled = op.scaled_matrix
    lam_scaled = float(np.exp(spectral.log_lambda - op.log_scale))

    P = scaled * u[None, :] / (lam_scaled * u[:, None])
    P = P / P.sum(axis=1, keepdims=True)
    p = u * v
    p = p / np.sum(p)
    return GibbsMeasure(MarkovMeasure(op.spec, p, P), op, spectral, potential)


def gibbs_of(pot: CylinderPotential) -> GibbsMeasure:
    """Recode, solve and build the Gibbs measure of a potential in one step"""
    op = TransferOperator.from_potential(pot)
    return gibbs_measure(rpf_solve(op), op, pot)


def parry_measure(spec: SubshiftSpec) -> GibbsMeasure:
    """Measure of maximal entropy (Gibbs measure of A = 0)"""
    return gibbs_of(CylinderPotential.constant(spec, 0.0))


def eigen_measure_cylinder(spectral: SpectralData, op: TransferOperator, word: Sequence[int]) -> float:
    """
    nu[w] = lambda^-(n-1) prod B(w_t, w_t+1) u_(w_n-1) / sum u

    Marginalizing the last symbol reproduces the shorter word's weight.
    """
    word = tuple(int(s) for s in word)
    if not is_admissible(op.spec, word):
        raise InadmissibleWord(word)
    scaled = op.scaled_matrix
    lam_scaled = float(np.exp(spectral.log_lambda - op.log_scale))
    u = spectral.right_vector
    weight = u[word[-1]] / np.sum(u)
    for a, b in zip(word, word[1:]):
        weight *= scaled[a, b] / lam_scaled
    return float(weight)


def eigen_measure(spectral: SpectralData, op: TransferOperator, depth: int) -> CylinderMeasure:
    """All depth-n eigen-measure weights at once"""
    scaled = op.scaled_matrix
    lam_scaled = float(np.exp(spectral.log_lambda - op.log_scale))
    u = spectral.right_vector
    weights = product_weights(op.spec, depth, np.ones(op.spec.d), scaled / lam_scaled, u / np.sum(u))
    return CylinderMeasure(op.spec, depth, weights)

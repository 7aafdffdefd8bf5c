"""
measure.py

Measures on cylinder sets and the dual operator L*.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InadmissibleWord, InvalidModel
from ..symbolic import CylinderFunction, SubshiftSpec, is_admissible, truncation, word_table
from .operator import TransferOperator, transfer_matrix


@dataclass(frozen=True, eq=False)
class CylinderMeasure:
    """
    Nonnegative weights on the admissible n-words

    Functions of depth <= n are integrated by viewing them at depth n;
    deeper functions cannot be integrated.
    """
    spec: SubshiftSpec
    depth: int
    weights: np.ndarray

    def __post_init__(self):
        weights = np.array(self.weights, dtype=float).reshape(-1)
        if weights.shape[0] != len(word_table(self.spec, self.depth)):
            raise InvalidModel(f"depth-{self.depth} measure needs one weight per admissible word")
        if np.any(weights < 0) or not np.all(np.isfinite(weights)):
            raise InvalidModel("measure weights must be finite and nonnegative")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)

    @classmethod
    def zero(cls, spec: SubshiftSpec, depth: int = 1) -> "CylinderMeasure":
        return cls(spec, depth, np.zeros(len(word_table(spec, depth))))

    @classmethod
    def uniform(cls, spec: SubshiftSpec, depth: int = 1) -> "CylinderMeasure":
        size = len(word_table(spec, depth))
        return cls(spec, depth, np.full(size, 1.0 / size))

    @property
    def total(self) -> float:
        return float(np.sum(self.weights))

    @property
    def words(self):
        return word_table(self.spec, self.depth).words

    def is_probability(self, tol: float = 1e-12) -> bool:
        return abs(self.total - 1.0) <= tol

    def weight(self, word) -> float:
        word = tuple(int(s) for s in word)
        if not is_admissible(self.spec, word):
            raise InadmissibleWord(word)
        if len(word) > self.depth:
            raise InvalidModel(f"depth-{self.depth} measure cannot weigh a length-{len(word)} word")
        table = word_table(self.spec, len(word))
        return float(self.marginal(len(word)).weights[table.index[word]])

    def marginal(self, depth: int) -> "CylinderMeasure":
        """Push forward to the depth-k prefixes"""
        if depth == self.depth:
            return self
        if depth > self.depth:
            raise InvalidModel(f"cannot refine a depth-{self.depth} measure to depth {depth}")
        size = len(word_table(self.spec, depth))
        index = truncation(self.spec, self.depth, depth)
        return CylinderMeasure(self.spec, depth, np.bincount(index, weights=self.weights, minlength=size))

    def integrate(self, f: CylinderFunction) -> float:
        if f.spec != self.spec:
            raise InvalidModel("function and measure live on different subshifts")
        if f.depth > self.depth:
            raise InvalidModel(f"depth-{f.depth} function cannot be integrated against a depth-{self.depth} measure")
        return float(self.marginal(f.depth).weights @ f.values)

    def normalized(self) -> "CylinderMeasure":
        return CylinderMeasure(self.spec, self.depth, self.weights / self.total)

    def is_consistent_with(self, deeper: "CylinderMeasure", tol: float = 1e-12) -> bool:
        return bool(np.allclose(deeper.marginal(self.depth).weights, self.weights, atol=tol, rtol=0))


def dual_apply(op: TransferOperator, nu: CylinderMeasure) -> CylinderMeasure:
    """
    (L* nu)(f) = nu(L f) for every depth-n f

    Depth 1: nu -> B nu. Depth n >= 2: weight of (a, x) is B(a, x_0) nu[x]
    with nu[x] the (n-1)-marginal.
    """
    if nu.spec != op.spec:
        raise InvalidModel("measure and operator live on different subshifts")
    pushed = nu.marginal(max(nu.depth - 1, 1)).weights
    return CylinderMeasure(op.spec, nu.depth, transfer_matrix(op, nu.depth).T @ pushed)

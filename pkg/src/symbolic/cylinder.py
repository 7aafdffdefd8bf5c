"""
cylinder.py

Cylinder functions (tables over admissible words) and potentials.

A depth-n function is stored sparsely: one value per admissible n-word,
aligned with word_table(spec, n). Binary operations lift the shallower
operand to the deeper depth by ignoring trailing coordinates.
"""

from dataclasses import dataclass
from typing import Callable, Dict, Mapping, Sequence, Union

import numpy as np

from ..errors import InadmissibleWord, InvalidModel
from .subshift import SubshiftSpec, Word, is_admissible, truncation, word_table

Number = Union[int, float]


def parse_word(key) -> Word:
    """Accept (0, 1, 1), [0, 1, 1] or the string "0,1,1" """
    if isinstance(key, str):
        parts = [part for part in key.replace(" ", ",").split(",") if part]
        return tuple(int(part) for part in parts)
    return tuple(int(s) for s in key)


@dataclass(frozen=True, eq=False)
class CylinderFunction:
    """
    Real function of the first `depth` coordinates

    Args:
        spec: the subshift the words live in
        depth: n >= 1
        values: one number per admissible n-word, lexicographic order
    """
    spec: SubshiftSpec
    depth: int
    values: np.ndarray

    def __post_init__(self):
        if self.depth < 1:
            raise InvalidModel(f"cylinder depth must be >= 1 (got {self.depth})")
        values = np.array(self.values, dtype=float).reshape(-1)
        expected = len(word_table(self.spec, self.depth))
        if values.shape[0] != expected:
            raise InvalidModel(
                f"depth-{self.depth} table needs {expected} values (one per admissible word), got {values.shape[0]}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    # ------------------------------------------------------------------
    # constructors
    # ------------------------------------------------------------------
    @classmethod
    def constant(cls, spec: SubshiftSpec, value: float, depth: int = 1) -> "CylinderFunction":
        return cls(spec, depth, np.full(len(word_table(spec, depth)), float(value)))

    @classmethod
    def from_mapping(cls, spec: SubshiftSpec, depth: int, mapping: Mapping) -> "CylinderFunction":
        """Build from {word: value}; every admissible word must be present, no other word may be"""
        table = word_table(spec, depth)
        values = np.full(len(table), np.nan)
        for key, value in mapping.items():
            word = parse_word(key)
            if len(word) != depth:
                raise InvalidModel(f"word {word} has length {len(word)}, expected {depth}")
            if word not in table.index:
                raise InadmissibleWord(word)
            values[table.index[word]] = float(value)
        missing = [table.words[i] for i in np.flatnonzero(np.isnan(values))]
        if missing:
            raise InvalidModel(f"missing values for admissible words {missing[:5]}")
        return cls(spec, depth, values)

    @classmethod
    def from_function(cls, spec: SubshiftSpec, depth: int, fn: Callable[[Word], float]) -> "CylinderFunction":
        table = word_table(spec, depth)
        return cls(spec, depth, np.array([fn(word) for word in table.words], dtype=float))

    @classmethod
    def from_matrix(cls, spec: SubshiftSpec, matrix) -> "CylinderFunction":
        """Depth-2 function read off a d x d matrix (inadmissible entries ignored)"""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (spec.d, spec.d):
            raise InvalidModel(f"matrix must be {spec.d} x {spec.d}")
        table = word_table(spec, 2)
        return cls(spec, 2, matrix[table.array[:, 0], table.array[:, 1]])

    @classmethod
    def indicator(cls, spec: SubshiftSpec, word: Sequence[int]) -> "CylinderFunction":
        word = tuple(word)
        if not is_admissible(spec, word):
            raise InadmissibleWord(word)
        table = word_table(spec, len(word))
        values = np.zeros(len(table))
        values[table.index[word]] = 1.0
        return cls(spec, len(word), values)

    # ------------------------------------------------------------------
    # access
    # ------------------------------------------------------------------
    @property
    def table(self):
        return word_table(self.spec, self.depth)

    @property
    def words(self):
        return self.table.words

    def __call__(self, word: Sequence[int]) -> float:
        word = tuple(int(s) for s in word)
        if len(word) < self.depth:
            raise InvalidModel(f"depth-{self.depth} function needs at least {self.depth} symbols")
        head = word[: self.depth]
        if not is_admissible(self.spec, word):
            raise InadmissibleWord(word)
        return float(self.values[self.table.index[head]])

    def as_dict(self) -> Dict[str, float]:
        return {",".join(map(str, w)): float(v) for w, v in zip(self.words, self.values)}

    def as_matrix(self) -> np.ndarray:
        """d x d matrix of a depth-<=2 function, zero on inadmissible pairs"""
        if self.depth > 2:
            raise InvalidModel("only depth <= 2 functions have a matrix form")
        lifted = self.extend(2)
        table = word_table(self.spec, 2)
        matrix = np.zeros((self.spec.d, self.spec.d))
        matrix[table.array[:, 0], table.array[:, 1]] = lifted.values
        return matrix

    # ------------------------------------------------------------------
    # depth bookkeeping
    # ------------------------------------------------------------------
    def extend(self, depth: int) -> "CylinderFunction":
        """Same function viewed at a larger depth (trailing coordinates ignored)"""
        if depth == self.depth:
            return self
        if depth < self.depth:
            raise InvalidModel(f"cannot view a depth-{self.depth} function at depth {depth}")
        return CylinderFunction(self.spec, depth, self.values[truncation(self.spec, depth, self.depth)])

    def _aligned(self, other):
        if isinstance(other, CylinderFunction):
            if other.spec != self.spec:
                raise InvalidModel("cylinder functions live on different subshifts")
            depth = max(self.depth, other.depth)
            return depth, self.extend(depth).values, other.extend(depth).values
        return self.depth, self.values, float(other)

    def _combine(self, other, op) -> "CylinderFunction":
        depth, left, right = self._aligned(other)
        return CylinderFunction(self.spec, depth, op(left, right))

    def __add__(self, other):
        return self._combine(other, np.add)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, np.subtract)

    def __rsub__(self, other):
        return self._combine(other, lambda a, b: b - a)

    def __mul__(self, other):
        return self._combine(other, np.multiply)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._combine(other, np.divide)

    def __rtruediv__(self, other):
        return self._combine(other, lambda a, b: b / a)

    def __neg__(self):
        return CylinderFunction(self.spec, self.depth, -self.values)

    def __pow__(self, exponent: Number):
        return CylinderFunction(self.spec, self.depth, self.values ** exponent)

    def log(self) -> "CylinderFunction":
        if np.any(self.values <= 0):
            raise InvalidModel("log of a non-positive cylinder function")
        return CylinderFunction(self.spec, self.depth, np.log(self.values))

    def exp(self) -> "CylinderFunction":
        return CylinderFunction(self.spec, self.depth, np.exp(self.values))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def min(self) -> float:
        return float(np.min(self.values))

    def max(self) -> float:
        return float(np.max(self.values))

    def allclose(self, other: "CylinderFunction", atol: float = 1e-12, rtol: float = 0.0) -> bool:
        _, left, right = self._aligned(other)
        return bool(np.allclose(left, right, atol=atol, rtol=rtol))

    def __repr__(self) -> str:
        return f"CylinderFunction(depth={self.depth}, values={np.array2string(self.values, precision=6)})"


# ==========================================
# Potentials
# ==========================================
@dataclass(frozen=True, eq=False)
class CylinderPotential:
    """
    Weight rho = e^A stored through its log A

    Depth-1 potentials are canonicalized to depth 2 (second coordinate ignored).
    """
    log_weights: CylinderFunction

    def __post_init__(self):
        log_weights = self.log_weights
        if not np.all(np.isfinite(log_weights.values)):
            raise InvalidModel("potential weights must be strictly positive and finite")
        if log_weights.depth == 1:
            log_weights = log_weights.extend(2)
        object.__setattr__(self, "log_weights", log_weights)

    @classmethod
    def from_log(cls, fn: CylinderFunction) -> "CylinderPotential":
        return cls(fn)

    @classmethod
    def from_weights(cls, fn: CylinderFunction) -> "CylinderPotential":
        if np.any(fn.values <= 0) or not np.all(np.isfinite(fn.values)):
            raise InvalidModel("potential weights must be strictly positive and finite")
        return cls(fn.log())

    @classmethod
    def from_H(cls, H: CylinderFunction, beta: float) -> "CylinderPotential":
        """rho = H^(-beta), i.e. A = -beta log H"""
        if np.any(H.values <= 0):
            raise InvalidModel("H must be strictly positive")
        return cls(H.log() * (-float(beta)))

    @classmethod
    def constant(cls, spec: SubshiftSpec, value: float = 0.0) -> "CylinderPotential":
        """A == value"""
        return cls(CylinderFunction.constant(spec, value, depth=2))

    @classmethod
    def two_coordinate(cls, spec: SubshiftSpec, weights) -> "CylinderPotential":
        """rho(i, j) read off a d x d matrix of positive weights"""
        return cls.from_weights(CylinderFunction.from_matrix(spec, weights))

    @property
    def spec(self) -> SubshiftSpec:
        return self.log_weights.spec

    @property
    def depth(self) -> int:
        return self.log_weights.depth

    @property
    def weights(self) -> CylinderFunction:
        return self.log_weights.exp()

    def scaled(self, beta: float) -> "CylinderPotential":
        """beta * A, the potential at inverse temperature beta"""
        return CylinderPotential(self.log_weights * float(beta))

    def shifted(self, c: float) -> "CylinderPotential":
        """A + c"""
        return CylinderPotential(self.log_weights + float(c))

    def __repr__(self) -> str:
        return f"CylinderPotential(depth={self.depth}, A={np.array2string(self.log_weights.values, precision=6)})"

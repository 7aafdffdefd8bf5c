"""
operator.py

Ruelle transfer operator L_rho on cylinder functions.

Convention: (L f)(x) = sum over preimages z = a.x of rho(z) f(z),
so in coordinates (L f)(x_0 ...) = sum_a B(a, x_0) f(a, x_0, ...)
with B(i, j) = transitions(i, j) * rho(i, j).
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np
from scipy.sparse import csr_matrix

from ..errors import InvalidModel, NonPrimitive
from ..symbolic import (
    CylinderFunction,
    CylinderPotential,
    SubshiftSpec,
    higher_block_recode,
    is_primitive,
    word_table,
)
from ..utils import get_logger

logger = get_logger("transfer")


@dataclass(frozen=True, eq=False)
class TransferOperator:
    """
    L_rho for a depth-2 weight on `spec`

    Deeper potentials are recoded first (see from_potential); `source` and
    `block_depth` remember the original subshift and potential depth m.
    """
    spec: SubshiftSpec
    rho: CylinderPotential
    source: Optional[SubshiftSpec] = None
    block_depth: int = 2

    def __post_init__(self):
        if self.rho.spec != self.spec or self.rho.depth != 2:
            raise InvalidModel("transfer operators need a canonical depth-2 weight on their own subshift")

    @classmethod
    def from_potential(cls, pot: CylinderPotential) -> "TransferOperator":
        spec, rho = higher_block_recode(pot.spec, pot)
        if pot.depth > 2:
            logger.debug(f"recoded depth-{pot.depth} potential onto {spec.d} blocks")
        return cls(spec, rho, source=pot.spec, block_depth=pot.depth)

    @classmethod
    def from_matrix(cls, spec: SubshiftSpec, matrix) -> "TransferOperator":
        """B must be positive exactly where the transitions allow"""
        matrix = np.asarray(matrix, dtype=float)
        if matrix.shape != (spec.d, spec.d):
            raise InvalidModel(f"matrix must be {spec.d} x {spec.d}")
        allowed = spec.matrix > 0
        if np.any(matrix[allowed] <= 0) or np.any(matrix[~allowed] != 0):
            raise InvalidModel("B must be > 0 on allowed transitions and 0 elsewhere")
        return cls.from_potential(CylinderPotential.two_coordinate(spec, np.where(allowed, matrix, 1.0)))

    @property
    def log_scale(self) -> float:
        """max A; the scaled matrix B e^(-max A) has largest entry 1"""
        return self.rho.log_weights.max()

    @property
    def scaled_matrix(self) -> np.ndarray:
        shifted = self.rho.log_weights - self.log_scale
        return shifted.exp().as_matrix()

    @property
    def matrix(self) -> np.ndarray:
        """B(i, j) = transitions(i, j) * rho(i, j)"""
        return self.rho.weights.as_matrix()


# ==========================================
# Sparse depth-k matrices
# ==========================================
@lru_cache(maxsize=256)
def transfer_matrix(op: TransferOperator, depth: int) -> csr_matrix:
    """
    Matrix of L from depth-k tables to depth-max(k-1, 1) tables

    Column = input word, row = output word; each row is an independent
    sum in fixed column order.
    """
    spec = op.spec
    B = op.matrix
    if depth == 1:
        pairs = word_table(spec, 2).array
        rows, cols = pairs[:, 1], pairs[:, 0]
        data = B[pairs[:, 0], pairs[:, 1]]
        shape = (spec.d, spec.d)
    else:
        table = word_table(spec, depth)
        rows = table.suffix
        cols = np.arange(len(table))
        data = B[table.array[:, 0], table.array[:, 1]]
        shape = (len(word_table(spec, depth - 1)), len(table))
    return csr_matrix((data, (rows, cols)), shape=shape)


def _check_spec(op: TransferOperator, f) -> None:
    if f.spec != op.spec:
        raise InvalidModel("function and operator live on different subshifts (recoded potentials change the alphabet)")


# ==========================================
# Operations
# ==========================================
def apply(op: TransferOperator, f: CylinderFunction) -> CylinderFunction:
    """(L_rho f); depth k -> max(k - 1, 1)"""
    _check_spec(op, f)
    out_depth = max(f.depth - 1, 1)
    return CylinderFunction(op.spec, out_depth, transfer_matrix(op, f.depth) @ f.values)


def apply_power(op: TransferOperator, f: CylinderFunction, n: int) -> CylinderFunction:
    for _ in range(n):
        f = apply(op, f)
    return f


def alpha_lift(f: CylinderFunction) -> CylinderFunction:
    """alpha(f) = f o T: depth k -> k + 1, value on (w_0 ... w_k) is f(w_1 ... w_k)"""
    table = word_table(f.spec, f.depth + 1)
    return CylinderFunction(f.spec, f.depth + 1, f.values[table.suffix])


def alpha_power(f: CylinderFunction, n: int) -> CylinderFunction:
    for _ in range(n):
        f = alpha_lift(f)
    return f


def normalize(op: TransferOperator, spectral) -> TransferOperator:
    """
    rho~ = rho k / (lambda alpha(k)) with L_rho k = lambda k

    B~(i, j) = B(i, j) k(i) / (lambda k(j)); the result satisfies L~1 = 1.
    """
    if not is_primitive(op.spec):
        raise NonPrimitive("normalization needs a primitive transition matrix")
    k = spectral.phi
    if k.spec != op.spec or k.depth != 1:
        raise InvalidModel("spectral data was not solved for this operator")
    if np.any(k.values <= 0):
        raise InvalidModel("eigenfunction must be strictly positive")
    residual = apply(op, k) - k * spectral.lambda_
    if residual.sup_norm() > 1e-8 * spectral.lambda_ * max(k.sup_norm(), 1.0):
        raise InvalidModel("spectral data does not solve L k = lambda k for this operator")

    log_k = k.log()
    pairs = word_table(op.spec, 2).array
    log_rho = op.rho.log_weights.values + log_k.values[pairs[:, 0]] - log_k.values[pairs[:, 1]] - np.log(spectral.lambda_)
    rho_tilde = CylinderPotential(CylinderFunction(op.spec, 2, log_rho))
    return TransferOperator(op.spec, rho_tilde, source=op.source, block_depth=op.block_depth)


def normalization_defect(op: TransferOperator) -> float:
    """|L1 - 1|_inf"""
    return (apply(op, CylinderFunction.constant(op.spec, 1.0)) - 1.0).sup_norm()

"""
rpf.py

Ruelle-Perron-Frobenius eigendata of a transfer operator.

Eigenvector convention (fixed once):
- phi solves B^T phi = lambda phi (L acting on depth-1 functions)
- nu  solves B nu = lambda nu     (L* acting on depth-1 marginals)
nu is a probability and phi is scaled so that nu(phi) = 1.
"""

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.sparse.linalg import eigs

from ..config import get_settings
from ..errors import NoConvergence, NonPrimitive
from ..symbolic import CylinderFunction, is_primitive
from ..transfer import CylinderMeasure, TransferOperator
from ..utils import get_logger

logger = get_logger("rpf_solve")

DIRECT_GAP_LIMIT = 64


@dataclass(frozen=True, eq=False)
class SpectralData:
    """(lambda, phi, nu) plus solver diagnostics"""
    lambda_: float
    log_lambda: float
    phi: CylinderFunction
    nu: CylinderMeasure
    iterations: int
    residual_phi: float
    residual_nu: float

    @property
    def right_vector(self) -> np.ndarray:
        """u with B u = lambda u (sums to 1)"""
        return self.nu.weights

    @property
    def left_vector(self) -> np.ndarray:
        """v with v^T B = lambda v^T (nu(v) = 1)"""
        return self.phi.values


def _power_iteration(matrix: np.ndarray, tol: float, max_iter: int) -> Tuple[float, np.ndarray, int, float]:
    """
    Dominant eigenpair of a primitive nonnegative matrix from the all-ones start

    Stops when successive Rayleigh quotients differ by < tol * lambda and the
    Collatz-Wielandt bracket min_i (A x)_i / x_i <= lambda <= max_i (A x)_i / x_i
    is narrower than tol * lambda, which bounds every componentwise residual.
    """
    x = np.ones(matrix.shape[0])
    previous = np.inf
    residual = np.inf
    for iteration in range(1, max_iter + 1):
        y = matrix @ x
        lam = float(x @ y) / float(x @ x)
        x = y / np.max(y)
        ratios = (matrix @ x) / x
        residual = float(np.max(ratios) - np.min(ratios))
        if abs(lam - previous) < tol * lam and residual <= tol * lam:
            return float(np.max(ratios) + np.min(ratios)) / 2, x, iteration, residual
        previous = lam
    raise NoConvergence(f"power iteration did not converge in {max_iter} steps", residual=residual, iterations=max_iter)


def rpf_solve(op: TransferOperator, tol: Optional[float] = None, max_iter: Optional[int] = None) -> SpectralData:
    """
    Maximal eigenvalue, eigenfunction and eigen-measure of L_rho

    Args:
        op: transfer operator on a primitive subshift
        tol: Rayleigh-quotient / residual tolerance (default THERMOFORMAL_SPECTRAL_TOL)
        max_iter: iteration cap per eigenvector (default THERMOFORMAL_MAX_ITER)

    Returns:
        SpectralData
    """
    settings = get_settings()
    tol = settings.spectral_tol if tol is None else tol
    max_iter = settings.max_iter if max_iter is None else max_iter
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not is_primitive(op.spec):
        raise NonPrimitive("transition matrix is not primitive; the Perron eigendata is not unique")

    scaled = op.scaled_matrix
    lam_left, v, it_left, _ = _power_iteration(scaled.T, tol, max_iter)
    lam_right, u, it_right, _ = _power_iteration(scaled, tol, max_iter)
    lam_scaled = 0.5 * (lam_left + lam_right)

    u = u / np.sum(u)
    v = v / float(u @ v)
    log_lambda = float(np.log(lam_scaled) + op.log_scale)
    lam = float(lam_scaled * np.exp(op.log_scale))

    residual_phi = float(np.max(np.abs(scaled.T @ v - lam_scaled * v)) / (lam_scaled * np.max(v)))
    residual_nu = float(np.sum(np.abs(scaled @ u - lam_scaled * u)) / lam_scaled)
    logger.debug(f"lambda={lam:.15g} iterations={it_left}/{it_right} residuals={residual_phi:.2e}/{residual_nu:.2e}")

    return SpectralData(
        lambda_=lam,
        log_lambda=log_lambda,
        phi=CylinderFunction(op.spec, 1, v),
        nu=CylinderMeasure(op.spec, 1, u),
        iterations=max(it_left, it_right),
        residual_phi=residual_phi,
        residual_nu=residual_nu,
    )


def spectral_gap(op: TransferOperator, spectral: Optional[SpectralData] = None) -> float:
    """
    |lambda_2| / lambda_1 of the transfer matrix

    The Perron root is deflated out (B - lambda u v^T / v^T u); the largest
    remaining modulus is found directly for d <= 64, by ARPACK otherwise.
    """
    if not is_primitive(op.spec):
        raise NonPrimitive("spectral gap needs a primitive transition matrix")
    if op.spec.d == 1:
        return 0.0
    spectral = spectral or rpf_solve(op)

    scaled = op.scaled_matrix
    lam_scaled = float(np.exp(spectral.log_lambda - op.log_scale))
    u, v = spectral.right_vector, spectral.left_vector
    deflated = scaled - lam_scaled * np.outer(u, v) / float(v @ u)

    if op.spec.d <= DIRECT_GAP_LIMIT:
        second = float(np.max(np.abs(np.linalg.eigvals(deflated))))
    else:
        values = eigs(deflated, k=1, which="LM", return_eigenvectors=False, tol=1e-12)
        second = float(np.abs(values[0]))
    ratio = min(max(second / lam_scaled, 0.0), 1.0)
    logger.debug(f"gap ratio {ratio:.6g}")
    return ratio

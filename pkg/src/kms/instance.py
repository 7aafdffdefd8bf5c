"""
instance.py

KMS data for a dynamics generator H at inverse temperature beta:

    rho = H^-beta,  L_rho k = lambda k,  rho~ = rho k / (lambda alpha(k)),
    ind(E) = 1 / rho~,  Lambda = rho / rho~ = lambda alpha(k) / k

and measure-level states (restrictions of KMS states to the diagonal).
"""

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..errors import InvalidModel, NotNormalized
from ..spectral import MarkovMeasure, SpectralData, product_weights, rpf_solve
from ..symbolic import CylinderFunction, CylinderPotential, SubshiftSpec
from ..thermo.bowen import HLike, as_h_function, bowen_root
from ..transfer import CylinderMeasure, TransferOperator, alpha_power, apply, normalization_defect, normalize
from ..utils import get_logger

logger = get_logger("kms")

NORMALIZED_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class KmsInstance:
    """Everything derived from (H, beta); build with KmsInstance.build"""
    H: CylinderFunction
    beta: float
    op: TransferOperator
    spectral: SpectralData
    op_tilde: TransferOperator
    index: CylinderFunction
    Lambda: CylinderFunction

    @classmethod
    def build(cls, H: HLike, beta: float) -> "KmsInstance":
        H = as_h_function(H)
        if np.any(H.values <= 0):
            raise InvalidModel("H must be strictly positive")
        op = TransferOperator.from_potential(CylinderPotential.from_H(H, beta))
        spectral = rpf_solve(op)
        op_tilde = normalize(op, spectral)
        defect = normalization_defect(op_tilde)
        if defect > NORMALIZED_TOL:
            raise NotNormalized(defect)

        log_rho = op.rho.log_weights
        log_rho_tilde = op_tilde.rho.log_weights
        index = (-log_rho_tilde).exp()
        Lambda = (log_rho - log_rho_tilde).exp()
        logger.debug(f"beta={beta} lambda={spectral.lambda_:.15g} normalization defect={defect:.2e}")
        return cls(H=H, beta=float(beta), op=op, spectral=spectral, op_tilde=op_tilde, index=index, Lambda=Lambda)

    @classmethod
    def at_critical_beta(cls, H: HLike, tol: Optional[float] = None) -> "KmsInstance":
        """Instance at the root of P(-beta log H) = 0, where lambda = 1"""
        return cls.build(H, bowen_root(H, tol))

    @property
    def spec(self) -> SubshiftSpec:
        return self.op.spec

    @property
    def rho(self) -> CylinderPotential:
        return self.op.rho

    @property
    def rho_tilde(self) -> CylinderPotential:
        return self.op_tilde.rho

    @property
    def k(self) -> CylinderFunction:
        return self.spectral.phi

    @property
    def lambda_(self) -> float:
        return self.spectral.lambda_


# ==========================================
# States
# ==========================================
@dataclass(frozen=True, eq=False)
class KmsState:
    """
    State with product-form cylinder weights

        phi[w] = initial[w_0] * prod transfer[w_t, w_t+1] * terminal[w_n-1]

    transfer @ terminal = terminal keeps the depths consistent, and
    sum(initial * terminal) = 1 makes phi(1) = 1.
    """
    spec: SubshiftSpec
    initial: np.ndarray
    transfer: np.ndarray
    terminal: np.ndarray

    def __post_init__(self):
        arrays = [np.array(x, dtype=float) for x in (self.initial, self.transfer, self.terminal)]
        initial, transfer, terminal = arrays
        d = self.spec.d
        if initial.shape != (d,) or transfer.shape != (d, d) or terminal.shape != (d,):
            raise InvalidModel("state vectors must match the alphabet size")
        if np.any(initial < 0) or np.any(transfer < 0) or np.any(terminal < 0):
            raise InvalidModel("state weights must be nonnegative")
        if np.max(np.abs(transfer @ terminal - terminal)) > 1e-9 * max(1.0, float(np.max(terminal))):
            raise InvalidModel("terminal vector must be fixed by the transfer matrix")
        if abs(float(initial @ terminal) - 1.0) > 1e-9:
            raise InvalidModel("state must satisfy phi(1) = 1")
        for arr in arrays:
            arr.setflags(write=False)
        object.__setattr__(self, "initial", initial)
        object.__setattr__(self, "transfer", transfer)
        object.__setattr__(self, "terminal", terminal)

    @classmethod
    def from_eigen(cls, spectral: SpectralData, op: TransferOperator) -> "KmsState":
        """Eigen-measure of L_rho*: nu[w] = lambda^-(n-1) prod B * u_last / sum u"""
        lam_scaled = float(np.exp(spectral.log_lambda - op.log_scale))
        u = spectral.right_vector
        return cls(op.spec, np.ones(op.spec.d), op.scaled_matrix / lam_scaled, u / np.sum(u))

    @classmethod
    def from_markov(cls, mu: MarkovMeasure) -> "KmsState":
        return cls(mu.spec, mu.p, mu.P, np.ones(mu.spec.d))

    def tilted(self, symbol: int = 0, amount: float = 0.05) -> "KmsState":
        """Move `amount` of depth-1 mass onto `symbol` and renormalize"""
        marginal = self.initial * self.terminal
        if self.terminal[symbol] <= 0:
            raise InvalidModel(f"cannot tilt towards symbol {symbol} without terminal mass")
        shifted = marginal.copy()
        shifted[symbol] += amount
        shifted /= np.sum(shifted)
        initial = np.divide(shifted, self.terminal, out=np.zeros_like(shifted), where=self.terminal > 0)
        return KmsState(self.spec, initial, self.transfer, self.terminal)

    def measure(self, depth: int) -> CylinderMeasure:
        return CylinderMeasure(self.spec, depth, product_weights(self.spec, depth, self.initial, self.transfer, self.terminal))

    def __call__(self, a: CylinderFunction) -> float:
        """phi(a)"""
        if a.spec != self.spec:
            raise InvalidModel("function and state live on different subshifts")
        return self.measure(a.depth).integrate(a)

    def reweighted(self, k: CylinderFunction) -> "KmsState":
        """phi~(a) = phi(k a) / phi(k) for a positive depth-1 k"""
        if k.depth != 1 or np.any(k.values <= 0):
            raise InvalidModel("reweighting needs a positive depth-1 function")
        initial = self.initial * k.values
        return KmsState(self.spec, initial / float(initial @ self.terminal), self.transfer, self.terminal)

    def to_markov(self) -> MarkovMeasure:
        """(p, P) read off the product form; raises InvalidModel when the state is not shift-invariant"""
        p = self.initial * self.terminal
        safe = np.where(self.terminal > 0, self.terminal, 1.0)
        P = self.transfer * self.terminal[None, :] / safe[:, None]
        return MarkovMeasure(self.spec, p, P)


# ==========================================
# Operations
# ==========================================
def kms_measure(H: HLike, beta: float) -> KmsState:
    """Eigen-measure of L*_(H^-beta), the measure-level KMS state"""
    inst = KmsInstance.build(H, beta)
    return KmsState.from_eigen(inst.spectral, inst.op)


def tilde_state(inst: KmsInstance, state: KmsState) -> KmsState:
    """phi~(a) = phi(k a) / phi(k); turns the eigen-measure into the Gibbs measure"""
    return state.reweighted(inst.k)


def lambda_n(inst: KmsInstance, n: int) -> CylinderFunction:
    """Lambda^[n] = prod_{i<n} alpha^i(Lambda), a depth-(n+1) function; 1 for n = 0"""
    if n < 0:
        raise InvalidModel(f"n must be >= 0 (got {n})")
    result = CylinderFunction.constant(inst.spec, 1.0)
    for i in range(n):
        result = result * alpha_power(inst.Lambda, i)
    return result


def lambda_n_closed_form(inst: KmsInstance, n: int) -> CylinderFunction:
    """lambda^n alpha^n(k) / k"""
    if n < 0:
        raise InvalidModel(f"n must be >= 0 (got {n})")
    k = inst.k
    return alpha_power(k, n) * (inst.lambda_ ** n) / k


def is_balanced(inst: KmsInstance, tol: Optional[float] = None) -> bool:
    """L(Lambda 1) = L_rho(1) = 1"""
    tol = NORMALIZED_TOL if tol is None else tol
    image = apply(inst.op_tilde, inst.Lambda)
    return bool((image - 1.0).sup_norm() <= tol)

"""
commands.py

Command functions and the dispatcher.

Every command takes (bundle, options) and returns (outputs, diagnostics);
execute_command wraps the result as {"ok": True, ...} or {"ok": False, "error": {...}}.
"""

from dataclasses import dataclass
from typing import Any, Callable, Dict, Optional, Tuple

from ..config import get_settings
from ..errors import InvalidModel, ThermoError, UnknownCommand
from ..kms import (
    KmsInstance,
    KmsState,
    is_balanced,
    residual_sweep,
    telescoping_convergence_check,
    v_algebra_beta,
)
from ..spectral import convergence_report, gibbs_measure, rpf_solve, spectral_gap
from ..symbolic import CylinderFunction, word_table
from ..thermo import (
    entropy_oracle,
    entropy_variational,
    pressure,
    pressure_minmax,
    pressure_oracle,
)
from ..transfer import TransferOperator
from ..utils import get_logger
from .io import ModelBundle, load_measure

logger = get_logger("cli")

Result = Tuple[Dict[str, Any], Dict[str, Any]]

ORACLE_AGREEMENT = 1e-6


@dataclass
class CommandOptions:
    depth: Optional[int] = None
    restarts: int = 4
    seed: Optional[int] = None
    tol: Optional[float] = None
    oracle: bool = False
    method: str = "oracle"
    n: Optional[int] = None
    measure: Optional[str] = None

    def canonical(self) -> Dict[str, Any]:
        """Flags that influence the outputs (digest input)"""
        return {
            "depth": self.depth,
            "restarts": self.restarts,
            "seed": self.seed,
            "tol": self.tol,
            "oracle": self.oracle,
            "method": self.method,
            "n": self.n,
            "measure": self.measure,
        }


def _cylinders(measure) -> Dict[str, float]:
    return {",".join(map(str, word)): float(weight) for word, weight in zip(measure.words, measure.weights)}


def _solve(bundle: ModelBundle):
    op = TransferOperator.from_potential(bundle.potential)
    return op, rpf_solve(op)


# ==========================================
# Commands
# ==========================================
def run_spectral(bundle: ModelBundle, options: CommandOptions) -> Result:
    op, spectral = _solve(bundle)
    outputs = {
        "lambda": spectral.lambda_,
        "log_lambda": spectral.log_lambda,
        "phi": spectral.phi.values,
        "nu": spectral.nu.weights,
        "gap": spectral_gap(op, spectral),
    }
    diagnostics = {
        "iterations": spectral.iterations,
        "residual_phi": spectral.residual_phi,
        "residual_nu": spectral.residual_nu,
        "alphabet_size": op.spec.d,
        "block_depth": op.block_depth,
    }
    return outputs, diagnostics


def run_pressure(bundle: ModelBundle, options: CommandOptions) -> Result:
    value = pressure(bundle.potential)
    outputs: Dict[str, Any] = {"pressure": value}
    if options.oracle:
        oracle = pressure_oracle(bundle.potential)
        outputs.update(oracle=oracle, difference=abs(value - oracle))
    return outputs, {}


def run_gibbs(bundle: ModelBundle, options: CommandOptions) -> Result:
    op, spectral = _solve(bundle)
    mu = gibbs_measure(spectral, op, bundle.potential)
    depth = options.depth or 2
    outputs = {
        "p": mu.p,
        "P": mu.P,
        "entropy": entropy_oracle(mu),
        "cylinders": _cylinders(mu.to_measure(depth)),
    }
    return outputs, {"depth": depth, "alphabet_size": op.spec.d}


def run_entropy(bundle: ModelBundle, options: CommandOptions) -> Result:
    op, spectral = _solve(bundle)
    if options.measure:
        mu = load_measure(options.measure, op.spec)
    else:
        mu = gibbs_measure(spectral, op, bundle.potential).markov
    oracle = entropy_oracle(mu)

    if options.method == "oracle":
        return {"entropy": oracle}, {"method": "oracle"}
    if options.method != "variational":
        raise InvalidModel(f"unknown method {options.method!r}", location="--method")

    depth = options.depth or 1
    result = entropy_variational(mu, bundle.potential, depth)
    outputs: Dict[str, Any] = {"value": result.value, "depth": depth, "argmin": result.argmin.as_dict()}
    if options.oracle:
        difference = abs(result.value - oracle)
        outputs.update(oracle=oracle, difference=difference, agrees=difference <= ORACLE_AGREEMENT)
    return outputs, result.diagnostics.to_dict()


def run_minmax(bundle: ModelBundle, options: CommandOptions) -> Result:
    seed = options.seed if options.seed is not None else (bundle.config.seed or 0)
    depth = options.depth or 1
    result = pressure_minmax(bundle.potential, depth=depth, restarts=options.restarts, seed=seed, tol=options.tol)
    outputs: Dict[str, Any] = {"value": result.value, "p": result.measure.p, "P": result.measure.P}
    if options.oracle:
        reference = pressure(bundle.potential)
        outputs.update(pressure=reference, difference=abs(reference - result.value))
    diagnostics = result.diagnostics.to_dict()
    diagnostics.update(seed=seed, depth=depth)
    return outputs, diagnostics


def run_bowen_root(bundle: ModelBundle, options: CommandOptions) -> Result:
    H, _ = bundle.kms_generator()
    beta = v_algebra_beta(H, options.tol)
    return {"beta": beta}, {"tol": options.tol if options.tol is not None else get_settings().bowen_tol}


def run_kms_measure(bundle: ModelBundle, options: CommandOptions) -> Result:
    H, beta = bundle.kms_generator()
    inst = KmsInstance.build(H, beta)
    state = KmsState.from_eigen(inst.spectral, inst.op)
    depth = options.depth or 2
    cylinders = state.measure(depth)
    outputs = {
        "beta": beta,
        "lambda": inst.lambda_,
        "weights": state.measure(1).weights,
        "cylinders": _cylinders(cylinders),
    }
    return outputs, {"depth": depth, "balanced": is_balanced(inst), "probability": cylinders.is_probability(1e-9)}


def run_kms_check(bundle: ModelBundle, options: CommandOptions) -> Result:
    H, beta = bundle.kms_generator()
    inst = KmsInstance.build(H, beta)
    state = KmsState.from_eigen(inst.spectral, inst.op)
    n = options.n or 1
    depth = options.depth or 3
    report = residual_sweep(inst, state, n=n, depth=depth)
    outputs = report.to_dict()
    outputs["max_residual"] = max(report.crossed, report.approx)
    return outputs, {"n": n, "depth": depth, "lambda": inst.lambda_, "balanced": is_balanced(inst)}


def run_convergence(bundle: ModelBundle, options: CommandOptions) -> Result:
    H, beta = bundle.kms_generator()
    inst = KmsInstance.build(H, beta)
    N = options.n or 20
    depth = options.depth or 1
    a = CylinderFunction.indicator(inst.spec, word_table(inst.spec, depth).words[0])
    report = convergence_report(inst.op_tilde, a, N)
    telescoping = telescoping_convergence_check(inst, KmsState.from_eigen(inst.spectral, inst.op), a, N)
    outputs = report.to_dict()
    outputs["telescoping"] = telescoping.to_dict()
    return outputs, {"N": N, "depth": depth, "test_function": list(word_table(inst.spec, depth).words[0])}


# ==========================================
# Registry and dispatcher
# ==========================================
COMMAND_REGISTRY: Dict[str, Callable[[ModelBundle, CommandOptions], Result]] = {
    "spectral": run_spectral,
    "pressure": run_pressure,
    "gibbs": run_gibbs,
    "entropy": run_entropy,
    "minmax": run_minmax,
    "bowen-root": run_bowen_root,
    "kms-measure": run_kms_measure,
    "kms-check": run_kms_check,
    "convergence": run_convergence,
}


def execute_command(name: str, bundle: ModelBundle, options: CommandOptions) -> Dict[str, Any]:
    """
    Command dispatcher

    Returns:
        {"ok": True, "command", "outputs", "diagnostics"} or
        {"ok": False, "command", "error", "exit_code"}
    """
    if name not in COMMAND_REGISTRY:
        error = UnknownCommand(f"Unknown command: {name}", choices=sorted(COMMAND_REGISTRY))
        return {"ok": False, "command": name, "error": error.to_dict(), "exit_code": error.exit_code}

    try:
        outputs, diagnostics = COMMAND_REGISTRY[name](bundle, options)
        return {"ok": True, "command": name, "outputs": outputs, "diagnostics": diagnostics}
    except ThermoError as exc:
        logger.error(f"{name} failed: {exc.message}")
        return {"ok": False, "command": name, "error": exc.to_dict(), "exit_code": exc.exit_code}

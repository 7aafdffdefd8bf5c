"""
main.py

Command-line entry: `python app.py <command> --model FILE [flags]`.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
Results (or the error object) go to standard output; logs go to standard error.
"""

import argparse
import sys
import time
from typing import List, Optional, TextIO

from ..config import reset_settings
from ..errors import ConfigError, ThermoError, UnknownCommand
from ..schemas import ResultEnvelope
from ..utils import configure_logging, digest, dumps, get_logger
from .commands import COMMAND_REGISTRY, CommandOptions, execute_command
from .io import apply_tolerances, load_model, render, write_envelope

logger = get_logger("cli")

INTERNAL_ERROR_EXIT = 3


class ThermoArgumentParser(argparse.ArgumentParser):
    """argparse that raises ConfigError instead of printing usage and exiting"""

    def error(self, message: str):
        raise ConfigError(message, usage=self.format_usage().strip())


def build_parser() -> ThermoArgumentParser:
    parser = ThermoArgumentParser(prog="thermoformal", description="Thermodynamic formalism on subshifts of finite type")
    parser.add_argument("command", help=", ".join(COMMAND_REGISTRY))
    parser.add_argument("--model", required=True, help="model file (JSON)")
    parser.add_argument("--format", default="json", choices=["json", "csv", "text"])
    parser.add_argument("--depth", type=int, default=None, help="cylinder depth k")
    parser.add_argument("--restarts", type=int, default=4, help="min-max restarts")
    parser.add_argument("--seed", type=int, default=None, help="min-max seed (default: model seed, else 0)")
    parser.add_argument("--tol", type=float, default=None, help="solver tolerance")
    parser.add_argument("--out", default=None, help="also write the JSON envelope to this path")
    parser.add_argument("--oracle", action="store_true", help="also run the dense-matrix oracle and report the difference")
    parser.add_argument("--method", default="oracle", choices=["oracle", "variational"], help="entropy method")
    parser.add_argument("--n", type=int, default=None, help="KMS order / convergence steps")
    parser.add_argument("--measure", default=None, help="measure file for entropy (a gibbs envelope or {p, P})")
    return parser


def _emit_error(stream: TextIO, command: Optional[str], error: dict) -> None:
    stream.write(dumps({"ok": False, "command": command, "error": error}, indent=2) + "\n")


def run(argv: Optional[List[str]] = None, stdout: Optional[TextIO] = None) -> int:
    """
    Parse flags, run one command and print its envelope

    Returns:
        process exit code
    """
    stdout = stdout or sys.stdout
    started = time.perf_counter()
    command = None
    reset_settings()
    try:
        args = build_parser().parse_args(argv)
        command = args.command
        configure_logging()
        if command not in COMMAND_REGISTRY:
            raise UnknownCommand(f"Unknown command: {command}", choices=sorted(COMMAND_REGISTRY))
        bundle = load_model(args.model)
        apply_tolerances(bundle.config)
        options = CommandOptions(
            depth=args.depth,
            restarts=args.restarts,
            seed=args.seed,
            tol=args.tol,
            oracle=args.oracle,
            method=args.method,
            n=args.n,
            measure=args.measure,
        )
        result = execute_command(command, bundle, options)
        if not result["ok"]:
            _emit_error(stdout, command, result["error"])
            return result["exit_code"]

        envelope = ResultEnvelope(
            command=command,
            inputs_digest=digest({"command": command, "model": bundle.config.model_dump(), "flags": options.canonical()}),
            outputs=result["outputs"],
            diagnostics=result["diagnostics"],
            wall_time=time.perf_counter() - started,
        )
        stdout.write(render(envelope, args.format))
        if args.out:
            write_envelope(envelope, args.out)
        logger.info(f"{command} finished in {envelope.wall_time:.3f}s")
        return 0
    except ThermoError as exc:
        _emit_error(stdout, command, exc.to_dict())
        return exc.exit_code
    except Exception as exc:  # noqa: BLE001
        logger.error(f"unexpected {type(exc).__name__}: {exc}")
        _emit_error(stdout, command, {"type": type(exc).__name__, "kind": "internal", "message": str(exc)})
        return INTERNAL_ERROR_EXIT


def main() -> None:
    sys.exit(run())

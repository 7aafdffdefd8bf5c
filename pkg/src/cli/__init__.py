from .commands import COMMAND_REGISTRY, CommandOptions, execute_command
from .io import ModelBundle, load_measure, load_model, parse_model, render
from .main import build_parser, main, run

__all__ = [
    "COMMAND_REGISTRY",
    "CommandOptions",
    "execute_command",
    "ModelBundle",
    "load_measure",
    "load_model",
    "parse_model",
    "render",
    "build_parser",
    "main",
    "run",
]

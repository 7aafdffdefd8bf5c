"""
utils.py

Logging setup and canonical JSON helpers.
"""

import hashlib
import json
import logging
import math
import sys
from typing import Any

from .config import get_settings

_LEVELS = {"error": logging.ERROR, "info": logging.INFO, "debug": logging.DEBUG}
_ROOT = "thermoformal"


def configure_logging(level: str = None) -> None:
    """Attach the stderr handler once; stdout stays reserved for results"""
    root = logging.getLogger(_ROOT)
    if not root.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter("[%(tag)s] %(message)s"))
        root.addHandler(handler)
        root.propagate = False
    root.setLevel(_LEVELS[level or get_settings().log_level])


class _TagAdapter(logging.LoggerAdapter):
    def process(self, msg, kwargs):
        kwargs.setdefault("extra", {})["tag"] = self.extra["tag"]
        return msg, kwargs


def get_logger(tag: str) -> logging.LoggerAdapter:
    """Logger whose records print as `[tag] message`"""
    configure_logging()
    return _TagAdapter(logging.getLogger(f"{_ROOT}.{tag}"), {"tag": tag})


# ==========================================
# Canonical JSON (17 significant digits)
# ==========================================
def format_float(value: float) -> str:
    if math.isnan(value) or math.isinf(value):
        return json.dumps(str(value))
    text = format(value, ".17g")
    if "." not in text and "e" not in text and "n" not in text:
        text += ".0"
    return text


def dumps(obj: Any, indent: int = None, sort_keys: bool = False, _level: int = 0) -> str:
    """
    json.dumps replacement printing every float with 17 significant digits

    Args:
        obj: JSON-compatible structure (numpy scalars and arrays accepted)
        indent: pretty-print indentation, None for a single line
        sort_keys: sort dictionary keys (used for digests)
    """
    if hasattr(obj, "tolist"):
        obj = obj.tolist()
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)

    pad = "" if indent is None else "\n" + " " * (indent * (_level + 1))
    end = "" if indent is None else "\n" + " " * (indent * _level)
    sep = ", " if indent is None else ","
    if isinstance(obj, dict):
        items = sorted(obj.items()) if sort_keys else obj.items()
        body = sep.join(
            f"{pad}{json.dumps(str(key), ensure_ascii=False)}: {dumps(value, indent, sort_keys, _level + 1)}"
            for key, value in items
        )
        return "{" + body + (end if obj else "") + "}"
    if isinstance(obj, (list, tuple)):
        body = sep.join(f"{pad}{dumps(value, indent, sort_keys, _level + 1)}" for value in obj)
        return "[" + body + (end if obj else "") + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def digest(obj: Any) -> str:
    """Stable SHA-256 of the canonical (sorted-key) JSON form"""
    return hashlib.sha256(dumps(obj, sort_keys=True).encode("utf-8")).hexdigest()

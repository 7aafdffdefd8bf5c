"""
symbolic package

Subshifts of finite type, cylinder functions and potentials, higher-block recoding.
"""

from .subshift import (
    SubshiftSpec,
    Word,
    WordTable,
    admissible_words,
    full_shift,
    golden_mean_shift,
    is_admissible,
    is_primitive,
    truncation,
    word_table,
)
from .cylinder import CylinderFunction, CylinderPotential, parse_word
from .recode import decode_word, encode_word, higher_block_recode

__all__ = [
    "SubshiftSpec",
    "Word",
    "WordTable",
    "admissible_words",
    "full_shift",
    "golden_mean_shift",
    "is_admissible",
    "is_primitive",
    "truncation",
    "word_table",
    "CylinderFunction",
    "CylinderPotential",
    "parse_word",
    "decode_word",
    "encode_word",
    "higher_block_recode",
]

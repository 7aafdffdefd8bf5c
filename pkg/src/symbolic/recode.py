"""
recode.py

Higher-block recoding: a depth-m potential on X becomes a depth-2
potential on the space of (m-1)-blocks, so every finite-range potential
has a transfer matrix.
"""

from typing import Sequence, Tuple

import numpy as np

from ..errors import InadmissibleWord, InvalidModel
from .cylinder import CylinderFunction, CylinderPotential
from .subshift import SubshiftSpec, Word, is_admissible, word_table


def higher_block_recode(spec: SubshiftSpec, pot: CylinderPotential) -> Tuple[SubshiftSpec, CylinderPotential]:
    """
    Recode a depth-m potential to depth 2

    New alphabet: admissible (m-1)-words in lexicographic order.
    (w, w') is allowed iff they overlap in m-2 symbols and w + w'[-1] is admissible;
    the new weight on (w, w') is the old weight on that m-word.

    Returns:
        (recoded spec, depth-2 potential); m == 2 returns the inputs unchanged
    """
    if pot.spec != spec:
        raise InvalidModel("potential is defined on a different subshift")
    m = pot.depth
    if m < 2:
        raise InvalidModel(f"recoding needs depth >= 2 (got {m})")
    if m == 2:
        return spec, pot

    blocks = word_table(spec, m - 1)
    long_words = word_table(spec, m)
    size = len(blocks)

    transitions = np.zeros((size, size), dtype=int)
    transitions[long_words.prefix, long_words.suffix] = 1
    recoded = SubshiftSpec(size, tuple(tuple(int(x) for x in row) for row in transitions))

    # recoded 2-word (i, j) <-> m-word blocks[i] + blocks[j][-1]
    pairs = word_table(recoded, 2)
    lookup = {(int(p), int(s)): k for k, (p, s) in enumerate(zip(long_words.prefix, long_words.suffix))}
    order = np.array([lookup[(i, j)] for i, j in pairs.words], dtype=np.intp)
    values = pot.log_weights.values[order]
    return recoded, CylinderPotential(CylinderFunction(recoded, 2, values))


def encode_word(spec: SubshiftSpec, m: int, word: Sequence[int]) -> Word:
    """Original word (length >= m-1) -> word over the (m-1)-block alphabet"""
    word = tuple(int(s) for s in word)
    if m < 2:
        raise InvalidModel(f"block coding needs m >= 2 (got {m})")
    if len(word) < m - 1:
        raise InvalidModel(f"word {word} is shorter than the block length {m - 1}")
    if not is_admissible(spec, word):
        raise InadmissibleWord(word)
    blocks = word_table(spec, m - 1)
    return tuple(blocks.index[word[t:t + m - 1]] for t in range(len(word) - m + 2))


def decode_word(spec: SubshiftSpec, m: int, block_word: Sequence[int]) -> Word:
    """Inverse of encode_word"""
    blocks = word_table(spec, m - 1)
    block_word = [int(b) for b in block_word]
    if not block_word or any(b < 0 or b >= len(blocks) for b in block_word):
        raise InadmissibleWord(tuple(block_word))
    word = blocks.words[block_word[0]]
    for previous, current in zip(block_word, block_word[1:]):
        if blocks.words[previous][1:] != blocks.words[current][:-1]:
            raise InadmissibleWord(tuple(block_word))
        word = word + (blocks.words[current][-1],)
    if not is_admissible(spec, word):
        raise InadmissibleWord(tuple(block_word))
    return word

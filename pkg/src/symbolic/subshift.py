"""
subshift.py

Subshifts of finite type and their admissible words.

Alphabet is {0, ..., d-1}; transitions[i][j] == 1 means symbol j may follow symbol i.
Word tables are cached per (spec, length) and shared by every cylinder object.
"""

from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from ..errors import InvalidModel

Word = Tuple[int, ...]


@dataclass(frozen=True)
class SubshiftSpec:
    """
    Symbolic space X and shift T

    Args:
        alphabet_size: d >= 1
        transitions: d x d table of 0/1, no dead row or column
    """
    alphabet_size: int
    transitions: Tuple[Tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        try:
            d = int(self.alphabet_size)
            rows = tuple(tuple(int(x) for x in row) for row in self.transitions)
        except (TypeError, ValueError) as exc:
            raise InvalidModel(f"transitions must be a d x d table of integers: {exc}", location="transitions") from exc
        object.__setattr__(self, "alphabet_size", d)
        object.__setattr__(self, "transitions", rows)

        if d < 1:
            raise InvalidModel("alphabet_size must be >= 1", location="alphabet_size")
        if len(rows) != d or any(len(row) != d for row in rows):
            raise InvalidModel(f"transitions must be {d} x {d}", location="transitions")
        if any(x not in (0, 1) for row in rows for x in row):
            raise InvalidModel("transition entries must be 0 or 1", location="transitions")
        matrix = np.array(rows, dtype=int)
        for i in range(d):
            if not matrix[i].any():
                raise InvalidModel(f"symbol {i} has no successor", location=f"transitions[{i}]")
            if not matrix[:, i].any():
                raise InvalidModel(f"symbol {i} has no predecessor", location=f"transitions[*][{i}]")

    @property
    def d(self) -> int:
        return self.alphabet_size

    @cached_property
    def matrix(self) -> np.ndarray:
        """Read-only 0/1 numpy view of the transitions"""
        matrix = np.array(self.transitions, dtype=float)
        matrix.setflags(write=False)
        return matrix

    def allows(self, i: int, j: int) -> bool:
        return self.transitions[i][j] == 1


def full_shift(d: int) -> SubshiftSpec:
    return SubshiftSpec(d, tuple((1,) * d for _ in range(d)))


def golden_mean_shift() -> SubshiftSpec:
    """Binary sequences without two consecutive 1s"""
    return SubshiftSpec(2, ((1, 1), (1, 0)))


# ==========================================
# Word tables
# ==========================================
@dataclass(frozen=True, eq=False)
class WordTable:
    """
    Admissible words of one length, in lexicographic order

    prefix[w] / suffix[w] index w[:-1] / w[1:] in the table one shorter
    (empty arrays for length 1).
    """
    length: int
    words: Tuple[Word, ...]
    index: Dict[Word, int]
    array: np.ndarray
    prefix: np.ndarray
    suffix: np.ndarray

    def __len__(self) -> int:
        return len(self.words)

    @property
    def first(self) -> np.ndarray:
        return self.array[:, 0]

    @property
    def last(self) -> np.ndarray:
        return self.array[:, -1]


@lru_cache(maxsize=None)
def word_table(spec: SubshiftSpec, n: int) -> WordTable:
    if n < 1:
        raise InvalidModel(f"word length must be >= 1 (got {n})")

    if n == 1:
        words = tuple((s,) for s in range(spec.d))
        prefix = suffix = np.zeros(0, dtype=np.intp)
    else:
        shorter = word_table(spec, n - 1)
        words_list: List[Word] = []
        parents: List[int] = []
        for position, word in enumerate(shorter.words):
            row = spec.transitions[word[-1]]
            for symbol in range(spec.d):
                if row[symbol]:
                    words_list.append(word + (symbol,))
                    parents.append(position)
        words = tuple(words_list)
        prefix = np.array(parents, dtype=np.intp)
        suffix = np.array([shorter.index[w[1:]] for w in words], dtype=np.intp)

    array = np.array(words, dtype=np.intp).reshape(len(words), n)
    for arr in (array, prefix, suffix):
        arr.setflags(write=False)
    return WordTable(n, words, {w: i for i, w in enumerate(words)}, array, prefix, suffix)


@lru_cache(maxsize=None)
def truncation(spec: SubshiftSpec, n: int, k: int) -> np.ndarray:
    """Index of the k-prefix of every admissible n-word (k <= n)"""
    if k > n:
        raise InvalidModel(f"cannot truncate length-{n} words to length {k}")
    result = np.arange(len(word_table(spec, n)), dtype=np.intp)
    for length in range(n, k, -1):
        result = word_table(spec, length).prefix[result]
    result.setflags(write=False)
    return result


# ==========================================
# Operations
# ==========================================
def admissible_words(spec: SubshiftSpec, n: int) -> List[Word]:
    """Admissible words of length n in lexicographic order"""
    return list(word_table(spec, n).words)


def is_admissible(spec: SubshiftSpec, word: Sequence[int]) -> bool:
    word = tuple(int(s) for s in word)
    if not word or any(s < 0 or s >= spec.d for s in word):
        return False
    return all(spec.transitions[a][b] for a, b in zip(word, word[1:]))


def is_primitive(spec: SubshiftSpec) -> bool:
    """Some power M^k, k <= (d-1)^2 + 1 (Wielandt), is strictly positive"""
    base = spec.matrix > 0
    power = base.copy()
    for _ in range((spec.d - 1) ** 2 + 1):
        if power.all():
            return True
        power = (power.astype(np.int64) @ base.astype(np.int64)) > 0
    return bool(power.all())

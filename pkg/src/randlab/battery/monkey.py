"""Sparse-occupancy monkey tests: BITSTREAM, OPSO, OQSO and DNA.

Each pass forms 2^21 twenty-bit words and counts how many of the 2^20
possible words never appear.  Under the null the missing count is close
to normal with mean ``2^20 * exp(-2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..stats import PValue, normal_cdf
from . import constants
from .base import InsufficientData, TestResult, bits_label, require_words

WORD_BITS = 20
CELLS = 1 << WORD_BITS
N_WORDS = 1 << 21
NULL_MEAN = CELLS * math.exp(-N_WORDS / CELLS)


@dataclass(frozen=True)
class MonkeyConfig:
    name: str
    letter_bits: int
    letters_per_word: int
    sigma: float
    mean: float = NULL_MEAN
    n_words: int = N_WORDS

    def __post_init__(self):
        if self.letter_bits * self.letters_per_word != WORD_BITS:
            raise ValueError("letters must compose a 20-bit word")

    @property
    def n_passes(self) -> int:
        if self.name == "bitstream":
            return 20
        return 32 - self.letter_bits + 1

    @property
    def words_needed(self) -> int:
        if self.name == "bitstream":
            return self.n_passes * self.n_words // 32 + 1
        return self.n_words + self.letters_per_word - 1


BITSTREAM = MonkeyConfig("bitstream", 1, 20, constants.MONKEY_SIGMA["bitstream"])
OPSO = MonkeyConfig("opso", 10, 2, constants.MONKEY_SIGMA["opso"])
OQSO = MonkeyConfig("oqso", 5, 4, constants.MONKEY_SIGMA["oqso"])
DNA = MonkeyConfig("dna", 2, 10, constants.MONKEY_SIGMA["dna"])
CONFIGS = {c.name: c for c in (BITSTREAM, OPSO, OQSO, DNA)}


def count_missing(words20: np.ndarray) -> int:
    seen = np.zeros(CELLS, dtype=bool)
    seen[words20] = True
    return CELLS - int(np.count_nonzero(seen))


def bitstream_words(words: np.ndarray, start_word: int, n_words: int = N_WORDS) -> np.ndarray:
    """Overlapping 20-bit words beginning at bit 0 of ``words[start_word]``.

    Returned grouped by bit offset within a 32-bit word, not in stream
    order; only the multiset matters for occupancy.
    """
    nfull = n_words // 32
    seg = words[start_word:start_word + nfull + 1].astype(np.uint64)
    if seg.size < nfull + 1:
        raise InsufficientData("bitstream pass runs past the end of the buffer")
    pairs = (seg[:-1] << np.uint64(32)) | seg[1:]
    mask = np.uint64(CELLS - 1)
    return np.concatenate([
        ((pairs >> np.uint64(64 - WORD_BITS - s)) & mask) for s in range(32)
    ]).astype(np.int64)


def letter_words(words: np.ndarray, shift: int, config: MonkeyConfig) -> np.ndarray:
    """Overlapping words of ``letters_per_word`` letters taken at ``shift``."""
    lb, k, n = config.letter_bits, config.letters_per_word, config.n_words
    letters = (words[:n + k - 1] >> np.uint32(shift)) & np.uint32((1 << lb) - 1)
    # grow words by doubling their letter count: 1, 2, 4, ... then top up
    grams = {1: letters}
    size = 1
    while 2 * size <= k:
        g = grams[size]
        grams[2 * size] = (g[:g.size - size] << np.uint32(lb * size)) | g[size:]
        size *= 2
    out = grams[size]
    have = size
    for part in sorted(grams, reverse=True):
        if have + part <= k:
            g = grams[part]
            out = (out[:out.size - part] << np.uint32(lb * part)) | g[have:have + out.size - part]
            have += part
    return out[:n]


def missing_counts(buffer, config: MonkeyConfig) -> list[tuple[str, int]]:
    words = require_words(buffer, config.words_needed, config.name)
    out = []
    if config.name == "bitstream":
        step = config.n_words // 32
        for k in range(config.n_passes):
            out.append((f"sample {k + 1}", count_missing(bitstream_words(words, k * step))))
        return out
    for k in range(config.n_passes):
        shift = 32 - config.letter_bits - k
        label = bits_label(k + 1, config.letter_bits)
        out.append((label, count_missing(letter_words(words, shift, config))))
    return out


def monkey_test(buffer, config: MonkeyConfig) -> TestResult:
    counts = missing_counts(buffer, config)
    pvalues = [PValue(label, normal_cdf((miss - config.mean) / config.sigma))
               for label, miss in counts]
    return TestResult(config.name, pvalues, {
        "missing": [miss for _, miss in counts],
        "mean": config.mean,
        "sigma": config.sigma,
    })


def bitstream(buffer) -> TestResult:
    return monkey_test(buffer, BITSTREAM)


def opso(buffer) -> TestResult:
    return monkey_test(buffer, OPSO)


def oqso(buffer) -> TestResult:
    return monkey_test(buffer, OQSO)


def dna(buffer) -> TestResult:
    return monkey_test(buffer, DNA)

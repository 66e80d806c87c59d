"""Count-the-1s on a byte stream and on specific bytes of each word."""

from __future__ import annotations

from math import comb

import numpy as np

from ..bitstream import ByteBuffer
from ..stats import PValue, chisq_counts, chisq_pvalue
from .base import InsufficientData, TestResult, bits_label, require_words

N_WORDS = 256_000
WORD_LETTERS = 5
DOF = 5 ** 5 - 5 ** 4

# popcount 0-2 -> A, 3 -> B, 4 -> C, 5 -> D, 6-8 -> E
_LETTER_OF_WEIGHT = np.array([0, 0, 0, 1, 2, 3, 4, 4, 4], dtype=np.int64)
_POPCOUNT = np.array([bin(v).count("1") for v in range(256)], dtype=np.int64)
LETTER_OF_BYTE = _LETTER_OF_WEIGHT[_POPCOUNT]


def letter_probs() -> np.ndarray:
    weights = np.array([comb(8, k) for k in range(9)], dtype=np.float64)
    probs = np.zeros(5)
    np.add.at(probs, _LETTER_OF_WEIGHT, weights)
    return probs / 256.0


def _word_probs(length: int) -> np.ndarray:
    p = letter_probs()
    out = np.ones(1)
    for _ in range(length):
        out = np.outer(out, p).ravel()
    return out


def q5_minus_q4(byte_values: np.ndarray) -> float:
    """Q5 - Q4 statistic over ``len - 4`` overlapping 5-letter words."""
    letters = LETTER_OF_BYTE[byte_values]
    n = letters.size - WORD_LETTERS + 1
    idx4 = np.zeros(n, dtype=np.int64)
    for j in range(WORD_LETTERS - 1):
        idx4 = idx4 * 5 + letters[j:j + n]
    idx5 = idx4 * 5 + letters[WORD_LETTERS - 1:WORD_LETTERS - 1 + n]
    q5 = chisq_counts(np.bincount(idx5, minlength=5 ** 5), n * _word_probs(5))
    q4 = chisq_counts(np.bincount(idx4, minlength=5 ** 4), n * _word_probs(4))
    return q5 - q4


def count_the_1s(buffer: ByteBuffer, mode: str = "stream") -> TestResult:
    """``mode`` is ``"stream"`` (consecutive bytes) or ``"bytes"`` (one
    designated byte from each word, every byte position in turn)."""
    span = N_WORDS + WORD_LETTERS - 1
    if mode == "stream":
        if len(buffer) < span:
            raise InsufficientData(f"count_the_1s stream needs {span} bytes, buffer has {len(buffer)}")
        stat = q5_minus_q4(buffer.u8[:span])
        return TestResult("count_the_1s_stream", [PValue("stream", chisq_pvalue(stat, DOF))],
                          {"stream statistic": stat})
    if mode != "bytes":
        raise ValueError(f"unknown count-the-1s mode {mode!r}")
    words = require_words(buffer, span, "count_the_1s_bytes")[:span]
    pvalues, stats = [], []
    for k in range(4):
        b = ((words >> np.uint32(24 - 8 * k)) & np.uint32(0xFF)).astype(np.int64)
        stat = q5_minus_q4(b)
        stats.append(stat)
        pvalues.append(PValue(bits_label(8 * k + 1, 8), chisq_pvalue(stat, DOF)))
    return TestResult("count_the_1s_bytes", pvalues, {"byte statistics": stats})


def count_the_1s_both(buffer: ByteBuffer) -> TestResult:
    stream = count_the_1s(buffer, "stream")
    specific = count_the_1s(buffer, "bytes")
    return TestResult("count_the_1s", stream.pvalues + specific.pvalues,
                      {**stream.details, **specific.details, "dof": DOF})


WORDS_NEEDED = N_WORDS + WORD_LETTERS - 1

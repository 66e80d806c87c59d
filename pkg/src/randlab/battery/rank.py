"""Binary rank tests: 31x31, 32x32 and 6x8 matrices over GF(2)."""

from __future__ import annotations

import numpy as np

from ..stats import PValue, chisq_counts, chisq_pvalue, gf2_rank_distribution, gf2_ranks
from .base import TestResult, bits_label, ks_uniform_p, require_words

N_LARGE = 40_000
N_SMALL = 100_000
SMALL_ROWS, SMALL_COLS = 6, 8
SMALL_OFFSETS = 25


def lumped_rank_probs(nrows: int, ncols: int, ncells: int) -> np.ndarray:
    """Rank probabilities with everything below the top ``ncells - 1`` ranks lumped."""
    full = gf2_rank_distribution(nrows, ncols)
    top = len(full) - ncells
    return np.concatenate([[full[:top + 1].sum()], full[top + 1:]])


def _rank_pvalue(ranks: np.ndarray, size: int, nrows: int, ncols: int, ncells: int):
    probs = lumped_rank_probs(nrows, ncols, ncells)
    lowest = size - ncells + 1
    observed = np.bincount(np.maximum(ranks, lowest) - lowest, minlength=ncells)
    stat = chisq_counts(observed, len(ranks) * probs)
    return chisq_pvalue(stat, ncells - 1), observed


def binary_rank_large(buffer, size: int) -> TestResult:
    """Ranks of 40,000 square matrices built from ``size`` words each."""
    if size not in (31, 32):
        raise ValueError("size must be 31 or 32")
    words = require_words(buffer, N_LARGE * size, f"binary_rank_{size}x{size}")
    rows = words[:N_LARGE * size].reshape(N_LARGE, size)
    if size == 31:
        rows = rows >> np.uint32(1)
    ranks = gf2_ranks(rows, size)
    p, observed = _rank_pvalue(ranks, size, size, size, 4)
    label = f"{size}x{size}"
    return TestResult(f"binary_rank_{label}", [PValue(label, p)],
                      {f"{label} rank counts <= {size - 3}..{size}": observed.tolist()})


def binary_rank_6x8(buffer) -> TestResult:
    """25 byte positions x 100,000 matrices of six 8-bit rows, plus KS."""
    nwords = N_SMALL * SMALL_ROWS
    words = require_words(buffer, nwords, "binary_rank_6x8")[:nwords]
    pvalues, counts = [], {}
    for k in range(SMALL_OFFSETS):
        shift = np.uint32(32 - SMALL_COLS - k)
        rows = ((words >> shift) & np.uint32(0xFF)).reshape(N_SMALL, SMALL_ROWS)
        ranks = gf2_ranks(rows, SMALL_COLS)
        p, observed = _rank_pvalue(ranks, SMALL_ROWS, SMALL_ROWS, SMALL_COLS, 3)
        label = "6x8 " + bits_label(k + 1, SMALL_COLS)
        pvalues.append(PValue(label, p))
        counts[label] = observed.tolist()
    pvalues.append(PValue("6x8 overall", ks_uniform_p([p.value for p in pvalues])))
    return TestResult("binary_rank_6x8", pvalues, {"6x8 rank counts <=4,5,6": counts})


def binary_rank(buffer) -> TestResult:
    """The three rank tests reported together, each reading from byte 0."""
    parts = [binary_rank_large(buffer, 31), binary_rank_large(buffer, 32),
             binary_rank_6x8(buffer)]
    pvalues = [p for part in parts for p in part.pvalues]
    details = {k: v for part in parts for k, v in part.details.items()}
    return TestResult("binary_rank", pvalues, details)


WORDS_NEEDED = max(32 * N_LARGE, N_SMALL * SMALL_ROWS)

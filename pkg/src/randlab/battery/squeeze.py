"""Squeeze: how many k <- ceil(k * U) steps take 2^31 down to 1."""

from __future__ import annotations

import numpy as np

from ..stats import PValue, chisq_counts, chisq_pvalue
from . import constants
from .base import TestResult, require_words

START = 2.0 ** 31
N_REPS = 100_000
MIN_CELL, MAX_CELL = 6, 48
N_CELLS = MAX_CELL - MIN_CELL + 1
# the null uses ~2.3M uniforms; degenerate streams may need more and wrap around
WORDS_NEEDED = 2_400_000


def squeeze_steps(u: np.ndarray) -> np.ndarray:
    """Steps (capped at 48) for a squeeze started at every position of ``u``.

    ``u`` is read cyclically.
    """
    n = u.size
    ext = np.concatenate([u, np.resize(u, MAX_CELL)])
    steps = np.full(n, MAX_CELL, dtype=np.int64)
    active = np.arange(n)
    k = np.full(n, START)
    for t in range(MAX_CELL):
        k = np.ceil(k * ext[active + t])
        done = k == 1.0
        steps[active[done]] = t + 1
        keep = ~done
        active, k = active[keep], k[keep]
        if active.size == 0:
            break
    return steps


def squeeze_counts(u: np.ndarray, reps: int = N_REPS) -> np.ndarray:
    """Tally of steps per repetition for ``reps`` back-to-back squeezes."""
    steps = squeeze_steps(u).tolist()
    n = len(steps)
    counts = [0] * N_CELLS
    pos = 0
    for _ in range(reps):
        j = steps[pos]
        counts[min(max(j, MIN_CELL), MAX_CELL) - MIN_CELL] += 1
        pos = (pos + j) % n
    return np.array(counts)


def squeeze(buffer) -> TestResult:
    require_words(buffer, WORDS_NEEDED, "squeeze")
    counts = squeeze_counts(buffer.uniforms())
    expected = N_REPS * np.asarray(constants.SQUEEZE_PROBS)
    stat = chisq_counts(counts, expected)
    return TestResult("squeeze", [PValue("chisq", chisq_pvalue(stat, N_CELLS - 1))],
                      {"statistic": stat, "counts <=6..>=48": counts.tolist()})

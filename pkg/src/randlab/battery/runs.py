"""Runs up and runs down."""

from __future__ import annotations

import numpy as np

from ..stats import PValue, chisq_pvalue
from .base import TestResult, require_words

N_VALUES = 10_000
N_PASSES = 2
WORDS_NEEDED = N_VALUES * N_PASSES
MAX_LEN = 6

# Knuth's covariance-inverse constants for run lengths 1..5 and >= 6
RUNS_A = np.array([
    [4529.4, 9044.9, 13568.0, 18091.0, 22615.0, 27892.0],
    [9044.9, 18097.0, 27139.0, 36187.0, 45234.0, 55789.0],
    [13568.0, 27139.0, 40721.0, 54281.0, 67852.0, 83685.0],
    [18091.0, 36187.0, 54281.0, 72414.0, 90470.0, 111580.0],
    [22615.0, 45234.0, 67852.0, 90470.0, 113262.0, 139476.0],
    [27892.0, 55789.0, 83685.0, 111580.0, 139476.0, 172860.0],
])
RUNS_B = np.array([1 / 6, 5 / 24, 11 / 120, 19 / 720, 29 / 5040, 1 / 840])


def run_lengths(u: np.ndarray, up: bool = True) -> np.ndarray:
    """Counts of runs of length 1..5 and >= 6.

    A tie continues a run up and ends a run down.
    """
    rising = u[1:] >= u[:-1]
    breaks = ~rising if up else rising
    starts = np.concatenate([[0], np.flatnonzero(breaks) + 1, [u.size]])
    lengths = np.diff(starts)
    return np.bincount(np.minimum(lengths, MAX_LEN), minlength=MAX_LEN + 1)[1:]


def runs_statistic(counts: np.ndarray, n: int) -> float:
    d = counts - n * RUNS_B
    return float(d @ RUNS_A @ d / (n - 6))


def runs(buffer) -> TestResult:
    require_words(buffer, WORDS_NEEDED, "runs")
    u = buffer.uniforms(0, WORDS_NEEDED).reshape(N_PASSES, N_VALUES)
    pvalues, details = [], {}
    for k, row in enumerate(u):
        for up in (True, False):
            label = f"{'up' if up else 'down'} {k + 1}"
            counts = run_lengths(row, up)
            pvalues.append(PValue(label, chisq_pvalue(runs_statistic(counts, N_VALUES), 6)))
            details[label] = counts.tolist()
    return TestResult("runs", pvalues, details)

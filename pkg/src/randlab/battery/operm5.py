"""Overlapping 5-permutations."""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from ..stats import PValue, chisq_pvalue
from .base import TestResult, require_words

WINDOW = 5
N_PATTERNS = 120
N_WINDOWS = 1_000_000
N_PASSES = 2
# rank of the pattern-count covariance: 5! - 4!
DOF = 96
WORDS_NEEDED = N_PASSES * (N_WINDOWS + WINDOW - 1)

_POWERS = 5 ** np.arange(WINDOW)


@lru_cache(maxsize=1)
def _code_table() -> np.ndarray:
    table = np.full(5 ** WINDOW, -1, dtype=np.int64)
    for i, perm in enumerate(permutations(range(WINDOW))):
        table[np.dot(perm, _POWERS)] = i
    return table


def pattern_codes(windows: np.ndarray) -> np.ndarray:
    """Index 0..119 of the ordering pattern of each row of ``windows``.

    Equal values are ordered by position, earlier counting as smaller.
    """
    order = np.argsort(windows, axis=1, kind="stable")
    ranks = np.argsort(order, axis=1, kind="stable")
    return _code_table()[ranks @ _POWERS]


@lru_cache(maxsize=1)
def pattern_covariance() -> np.ndarray:
    """Per-window covariance of the 120 overlapping pattern counts.

    Built from the exact joint law of two windows ``d`` apart, obtained by
    enumerating every ordering of the ``5 + d`` values they span.
    """
    p = np.full(N_PATTERNS, 1.0 / N_PATTERNS)
    outer = np.outer(p, p)
    cov = np.diag(p) - outer
    for d in range(1, WINDOW):
        span = np.array(list(permutations(range(WINDOW + d))), dtype=np.int64)
        first = pattern_codes(span[:, :WINDOW])
        second = pattern_codes(span[:, d:d + WINDOW])
        joint = np.zeros((N_PATTERNS, N_PATTERNS))
        np.add.at(joint, (first, second), 1.0)
        joint /= len(span)
        cov += joint + joint.T - 2.0 * outer
    return cov


@lru_cache(maxsize=1)
def weak_inverse() -> np.ndarray:
    return np.linalg.pinv(pattern_covariance(), rcond=1e-10, hermitian=True)


def operm5_statistic(words: np.ndarray) -> float:
    counts = np.bincount(pattern_codes(sliding_window_view(words, WINDOW)),
                         minlength=N_PATTERNS).astype(np.float64)
    n = counts.sum()
    x = counts - n / N_PATTERNS
    return float(x @ weak_inverse() @ x / n)


def operm5(buffer) -> TestResult:
    words = require_words(buffer, WORDS_NEEDED, "operm5")
    span = N_WINDOWS + WINDOW - 1
    pvalues, stats = [], []
    for k in range(N_PASSES):
        stat = operm5_statistic(words[k * span:(k + 1) * span])
        stats.append(stat)
        pvalues.append(PValue(f"pass {k + 1}", chisq_pvalue(stat, DOF)))
    return TestResult("operm5", pvalues, {"statistics": stats, "dof": DOF})

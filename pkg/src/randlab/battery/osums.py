"""Overlapping sums of 100 consecutive uniforms."""

from __future__ import annotations

from functools import lru_cache

import numpy as np
from scipy.linalg import cholesky, solve_triangular
from scipy.special import ndtr

from ..stats import PValue
from .base import TestResult, ks_uniform_p, require_words

SPAN = 100
N_SUMS = 100
N_ROUNDS = 10
WORDS_PER_ROUND = N_SUMS + SPAN - 1
WORDS_NEEDED = N_ROUNDS * WORDS_PER_ROUND


def sums_covariance(n: int = N_SUMS, span: int = SPAN) -> np.ndarray:
    """cov(S_i, S_j) = (span - |i - j|) / 12 for moving sums of U(0, 1)."""
    lag = np.abs(np.subtract.outer(np.arange(n), np.arange(n)))
    return np.clip(span - lag, 0, None) / 12.0


@lru_cache(maxsize=1)
def _cholesky() -> np.ndarray:
    return cholesky(sums_covariance(), lower=True)


def decorrelate(u: np.ndarray) -> np.ndarray:
    """Map ``N_SUMS + SPAN - 1`` uniforms to N_SUMS approximately iid N(0, 1)."""
    c = np.concatenate([[0.0], np.cumsum(u)])
    sums = c[SPAN:] - c[:-SPAN]
    return solve_triangular(_cholesky(), sums - SPAN / 2.0, lower=True)


def overlapping_sums(buffer) -> TestResult:
    require_words(buffer, WORDS_NEEDED, "overlapping_sums")
    u = buffer.uniforms(0, WORDS_NEEDED).reshape(N_ROUNDS, WORDS_PER_ROUND)
    rounds = [ks_uniform_p(ndtr(decorrelate(row))) for row in u]
    return TestResult("overlapping_sums", [PValue("ks", ks_uniform_p(rounds))],
                      {"round p-values": rounds})

"""Distribution functions, goodness-of-fit helpers and GF(2) rank."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import kstwo


class DomainError(ValueError):
    """An argument lies outside the function's domain."""


@dataclass(frozen=True)
class PValue:
    label: str
    value: float

    def __post_init__(self):
        v = float(self.value)
        if math.isnan(v):
            raise DomainError(f"p-value {self.label!r} is NaN")
        # absorb round-off just outside [0, 1]
        if -1e-12 <= v < 0.0:
            v = 0.0
        elif 1.0 < v <= 1.0 + 1e-12:
            v = 1.0
        if not 0.0 <= v <= 1.0:
            raise DomainError(f"p-value {self.label!r} = {v} outside [0, 1]")
        object.__setattr__(self, "value", v)


# ---------------------------------------------------------------------------
# GF(2)


@dataclass(frozen=True)
class BinaryMatrix:
    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=np.uint8)
        if b.ndim != 2 or b.shape[0] < 1 or b.shape[1] < 1:
            raise DomainError("a binary matrix needs at least one row and one column")
        if np.any(b > 1):
            raise DomainError("entries must be 0 or 1")
        object.__setattr__(self, "bits", b)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    def row_words(self) -> np.ndarray:
        """Rows as integers, first column in the most significant bit."""
        weights = np.uint64(1) << np.arange(self.cols - 1, -1, -1, dtype=np.uint64)
        return (self.bits.astype(np.uint64) * weights).sum(axis=1, dtype=np.uint64)


def gf2_rank(matrix) -> int:
    """Rank over GF(2) of a BinaryMatrix or 0/1 array."""
    if not isinstance(matrix, BinaryMatrix):
        matrix = BinaryMatrix(matrix)
    rows = matrix.row_words()[None, :]
    return int(gf2_ranks(rows, matrix.cols)[0])


def _row_dtype(ncols: int):
    for dtype, width in ((np.uint8, 8), (np.uint16, 16), (np.uint32, 32), (np.uint64, 64)):
        if ncols <= width:
            return dtype
    raise DomainError("matrices wider than 64 columns are not supported")


def gf2_ranks(rows: np.ndarray, ncols: int) -> np.ndarray:
    """Ranks of a stack of matrices given as row integers, shape (N, R).

    Bit ``ncols - 1`` of each row integer is the first column.  Rows are
    inserted one by one into an XOR basis indexed by leading bit.
    """
    dtype = _row_dtype(ncols)
    rows = np.asarray(rows).astype(dtype)
    n, r = rows.shape
    basis = np.zeros((ncols, n), dtype=dtype)
    rank = np.zeros(n, dtype=dtype)
    one, zero = dtype(1), dtype(0)
    for i in range(r):
        x = rows[:, i].copy()
        for b in range(ncols - 1, -1, -1):
            shift = dtype(b)
            # an empty slot xors in nothing, leaving the bit set for insertion
            x ^= basis[b] & (zero - ((x >> shift) & one))
            ins = (x >> shift) & one
            mask = zero - ins
            basis[b] |= x & mask
            x &= ~mask
            rank += ins
    return rank.astype(np.int64)


def gf2_rank_distribution(nrows: int, ncols: int) -> np.ndarray:
    """P(rank = r), r = 0..min(nrows, ncols), for a uniform random binary matrix."""
    probs = []
    for r in range(min(nrows, ncols) + 1):
        logp = (r * (nrows + ncols - r) - nrows * ncols) * math.log(2.0)
        for i in range(r):
            logp += (math.log1p(-2.0 ** (i - nrows)) + math.log1p(-2.0 ** (i - ncols))
                     - math.log1p(-2.0 ** (i - r)))
        probs.append(math.exp(logp))
    return np.array(probs)


# ---------------------------------------------------------------------------
# distributions


def normal_cdf(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def _gamma_series(a: float, x: float) -> float:
    term = total = 1.0 / a
    ap = a
    for _ in range(100_000):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * 1e-16:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gamma_cont_frac(a: float, x: float) -> float:
    # modified Lentz evaluation of the upper incomplete gamma fraction
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 100_000):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            break
    return math.exp(-x + a * math.log(x) - math.lgamma(a)) * h


def gamma_p(a: float, x: float) -> float:
    """Regularised lower incomplete gamma P(a, x)."""
    if x <= 0.0:
        return 0.0
    if math.isinf(x):
        return 1.0
    if x < a + 1.0:
        return min(1.0, _gamma_series(a, x))
    return max(0.0, 1.0 - _gamma_cont_frac(a, x))


def chisq_pvalue(statistic: float, dof: int) -> float:
    """Left-tail chi-square CDF P(X <= statistic)."""
    if dof < 1:
        raise DomainError(f"degrees of freedom must be positive, got {dof}")
    if math.isnan(statistic):
        raise DomainError("chi-square statistic is NaN")
    return gamma_p(dof / 2.0, max(statistic, 0.0) / 2.0)


def poisson_pmf(k: int, lam: float) -> float:
    if lam <= 0:
        raise DomainError("lambda must be positive")
    return math.exp(-lam + k * math.log(lam) - math.lgamma(k + 1))


def chisq_counts(observed, expected) -> float:
    """Pearson statistic sum((o - e)^2 / e)."""
    o = np.asarray(observed, dtype=np.float64)
    e = np.asarray(expected, dtype=np.float64)
    return float(np.sum((o - e) ** 2 / e))


# ---------------------------------------------------------------------------
# Kolmogorov-Smirnov against U(0, 1)


def ks_statistic(samples) -> float:
    u = np.sort(np.asarray(samples, dtype=np.float64))
    if u.size == 0:
        raise DomainError("KS needs at least one sample")
    if np.isnan(u).any() or u[0] < 0.0 or u[-1] > 1.0:
        raise DomainError("KS samples must lie in [0, 1]")
    n = u.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - u), np.max(u - (i - 1) / n)))


def _ks_lambda(samples) -> float:
    n = len(samples)
    sn = math.sqrt(n)
    return (sn + 0.12 + 0.11 / sn) * ks_statistic(samples)


def _kolmogorov_sf(lam: float) -> float:
    if lam < 1.18:
        return 1.0 - _kolmogorov_cdf(lam)
    total = 0.0
    for k in range(1, 101):
        term = math.exp(-2.0 * k * k * lam * lam)
        total += term if k % 2 else -term
        if term < 1e-300:
            break
    return max(0.0, 2.0 * total)


def _kolmogorov_cdf(lam: float) -> float:
    if lam <= 0.0:
        return 0.0
    if lam >= 1.18:
        return 1.0 - _kolmogorov_sf(lam)
    f = -math.pi ** 2 / (8.0 * lam * lam)
    total = sum(math.exp((2 * k - 1) ** 2 * f) for k in range(1, 20))
    return min(1.0, math.sqrt(2.0 * math.pi) / lam * total)


def kolmogorov_asymptotic_sf(samples) -> float:
    """Stephens' small-n corrected asymptotic approximation of P(D >= d)."""
    return _kolmogorov_sf(_ks_lambda(samples))


def ks_pvalue(samples) -> float:
    """Two-sided KS p-value P(D >= observed) against the uniform law.

    Uses the exact finite-n distribution; the asymptotic series badly
    overstates tail probabilities for the handful of p-values some tests
    summarise.
    """
    return float(kstwo.sf(ks_statistic(samples), len(samples)))


def ks_cdf(samples) -> float:
    """Left-tail counterpart of :func:`ks_pvalue`, P(D <= observed)."""
    return float(kstwo.cdf(ks_statistic(samples), len(samples)))

"""Birthday spacings."""

from __future__ import annotations

import numpy as np

from ..stats import PValue, chisq_counts, chisq_pvalue, poisson_pmf
from .base import TestResult, bits_label, ks_uniform_p, require_words

N_BIRTHDAYS = 512
DAY_BITS = 24
N_SAMPLES = 500
N_OFFSETS = 9
LAMBDA = N_BIRTHDAYS ** 3 / (4 * 2 ** DAY_BITS)
# duplicate-count cells 0..5 and a lumped ">= 6"
MAX_CELL = 6
WORDS_NEEDED = N_OFFSETS * N_SAMPLES * N_BIRTHDAYS


def poisson_cells(lam: float = LAMBDA, top: int = MAX_CELL) -> np.ndarray:
    probs = [poisson_pmf(k, lam) for k in range(top)]
    probs.append(1.0 - sum(probs))
    return np.array(probs)


def duplicate_spacings(birthdays: np.ndarray) -> np.ndarray:
    """Per row: number of spacing values that repeat an earlier one."""
    b = np.sort(birthdays, axis=1).astype(np.int64)
    spacings = np.diff(b, axis=1, prepend=0)
    spacings.sort(axis=1)
    return (spacings[:, 1:] == spacings[:, :-1]).sum(axis=1)


def birthday_spacings(buffer) -> TestResult:
    words = require_words(buffer, WORDS_NEEDED, "birthday_spacings")
    expected = N_SAMPLES * poisson_cells()
    pvalues, counts = [], {}
    block = N_SAMPLES * N_BIRTHDAYS
    for k in range(N_OFFSETS):
        shift = 32 - DAY_BITS - k
        chunk = words[k * block:(k + 1) * block].reshape(N_SAMPLES, N_BIRTHDAYS)
        days = (chunk >> np.uint32(shift)) & np.uint32((1 << DAY_BITS) - 1)
        dups = duplicate_spacings(days)
        observed = np.bincount(np.minimum(dups, MAX_CELL), minlength=MAX_CELL + 1)
        stat = chisq_counts(observed, expected)
        label = bits_label(k + 1, DAY_BITS)
        pvalues.append(PValue(label, chisq_pvalue(stat, MAX_CELL)))
        counts[label] = observed.tolist()
    pvalues.append(PValue("ks", ks_uniform_p([p.value for p in pvalues])))
    return TestResult("birthday_spacings", pvalues, {"lambda": LAMBDA, "observed": counts})

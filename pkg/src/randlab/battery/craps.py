"""Craps: wins and throws per game over 200,000 games."""

from __future__ import annotations

from fractions import Fraction
from math import sqrt

import numpy as np

from ..stats import PValue, chisq_counts, chisq_pvalue, normal_cdf
from .base import TestResult, require_words

N_GAMES = 200_000
MAX_THROWS = 21  # cells 1..20 and >= 21
POINTS = (4, 5, 6, 8, 9, 10)
# the null uses ~1.35M words; longer demands wrap around
WORDS_NEEDED = 1_500_000

_WAYS = {t: 6 - abs(t - 7) for t in range(2, 13)}


def win_probability() -> Fraction:
    win = Fraction(_WAYS[7] + _WAYS[11], 36)
    for v in POINTS:
        p = Fraction(_WAYS[v], 36)
        win += p * p / (p + Fraction(6, 36))
    return win


def length_probs(max_throws: int = MAX_THROWS) -> np.ndarray:
    """P(game lasts k throws) for k = 1..max_throws-1, then P(>= max_throws)."""
    probs = [12 / 36]
    for k in range(2, max_throws):
        total = 0.0
        for v in POINTS:
            p = _WAYS[v] / 36
            end = p + 6 / 36
            total += p * (1 - end) ** (k - 2) * end
        probs.append(total)
    probs.append(1.0 - sum(probs))
    return np.array(probs)


def throw_totals(u: np.ndarray) -> np.ndarray:
    dice = 1 + np.floor(6.0 * u).astype(np.int64)
    n = dice.size // 2
    return dice[0:2 * n:2] + dice[1:2 * n:2]


def game_outcomes(totals: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Length and win flag of a game started at every throw (read cyclically)."""
    n = totals.size
    start = np.arange(n)
    length = np.ones(n, dtype=np.int64)
    win = np.isin(totals, (7, 11))
    for v in POINTS:
        at = np.flatnonzero(totals == v)
        if at.size == 0:
            continue
        hits = np.flatnonzero((totals == v) | (totals == 7))
        pos = np.searchsorted(hits, at, side="right")
        wrapped = pos == hits.size
        end = np.where(wrapped, hits[0] + n, hits[np.minimum(pos, hits.size - 1)])
        length[at] = end - start[at] + 1
        win[at] = totals[end % n] == v
    return length, win


def craps(buffer) -> TestResult:
    require_words(buffer, WORDS_NEEDED, "craps")
    totals = throw_totals(buffer.uniforms())
    length, win = game_outcomes(totals)
    length, win = length.tolist(), win.tolist()
    n = len(length)
    counts = [0] * MAX_THROWS
    wins = 0
    pos = 0
    for _ in range(N_GAMES):
        k = length[pos]
        counts[min(k, MAX_THROWS) - 1] += 1
        wins += win[pos]
        pos = (pos + k) % n
    pw = float(win_probability())
    z = (wins - N_GAMES * pw) / sqrt(N_GAMES * pw * (1 - pw))
    stat = chisq_counts(counts, N_GAMES * length_probs())
    return TestResult("craps", [
        PValue("wins", normal_cdf(z)),
        PValue("throws", chisq_pvalue(stat, MAX_THROWS - 1)),
    ], {"wins": wins, "throw counts": counts})

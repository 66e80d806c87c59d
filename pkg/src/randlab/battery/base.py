from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..bitstream import ByteBuffer, StreamSizeError
from ..stats import PValue, ks_cdf


class InsufficientData(StreamSizeError):
    """The buffer is too short for the requested test."""


@dataclass
class TestResult:
    """Named p-values produced by one battery test.

    Every p-value is a left-tail probability of the test statistic under
    the null, so both "too bad" and "too good" streams end up near 0 or 1.
    ``details`` holds JSON-friendly summary numbers.
    """

    __test__ = False  # not a pytest class

    test_name: str
    pvalues: list[PValue]
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.pvalues:
            raise ValueError(f"{self.test_name}: a result needs at least one p-value")

    @property
    def values(self) -> list[float]:
        return [p.value for p in self.pvalues]

    def get(self, label: str) -> float:
        for p in self.pvalues:
            if p.label == label:
                return p.value
        raise KeyError(label)


def require_words(buffer: ByteBuffer, nwords: int, test: str) -> np.ndarray:
    if buffer.nwords < nwords:
        raise InsufficientData(
            f"{test} needs {4 * nwords} bytes, buffer has {len(buffer)}"
        )
    return buffer.words


def bits_label(first: int, width: int) -> str:
    """Label for bits ``first..first+width-1`` counted from the left, 1-based."""
    return f"bits {first}-{first + width - 1}"


def ks_uniform_p(values) -> float:
    """Left-tail KS probability that ``values`` came from U(0, 1)."""
    return ks_cdf(np.clip(np.asarray(values, dtype=np.float64), 0.0, 1.0))


def cyclic_take(words: np.ndarray, start: int, count: int) -> np.ndarray:
    """``count`` words from ``start``, wrapping to the beginning if needed."""
    n = words.size
    idx = (start + np.arange(count)) % n
    return words[idx]

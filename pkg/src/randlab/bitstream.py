"""Test-input buffers: bit packing, stream files and word views.

Bits are packed MSB-first within a byte and 32-bit words are read
big-endian, so the first bit of a file is the top bit of its first word.
"""

from __future__ import annotations

import hashlib
import os
from functools import cached_property

import numpy as np

from .generators import GeneratorSpec

DEFAULT_NBYTES = 12_000_000


class StreamSizeError(ValueError):
    """Raised when a bit sequence or buffer has the wrong length."""


class EndOfStream(StreamSizeError):
    """Raised when a cursor runs past the end of its buffer."""


class StreamFileError(OSError):
    """I/O failure while reading or writing a stream file."""


class ByteBuffer:
    """Immutable byte sequence with cached numeric views."""

    def __init__(self, data: bytes):
        data = bytes(data)
        if len(data) < 1:
            raise StreamSizeError("a buffer needs at least one byte")
        self._data = data

    @classmethod
    def from_file(cls, path) -> "ByteBuffer":
        try:
            with open(path, "rb") as fh:
                return cls(fh.read())
        except OSError as exc:
            raise StreamFileError(f"cannot read {path}: {exc.strerror or exc}") from exc

    @property
    def data(self) -> bytes:
        return self._data

    def __len__(self) -> int:
        return len(self._data)

    def __eq__(self, other) -> bool:
        return isinstance(other, ByteBuffer) and other._data == self._data

    def __hash__(self) -> int:
        return hash(self._data)

    def __reduce__(self):
        return (ByteBuffer, (self._data,))

    @cached_property
    def sha256(self) -> str:
        return hashlib.sha256(self._data).hexdigest()

    @cached_property
    def u8(self) -> np.ndarray:
        a = np.frombuffer(self._data, dtype=np.uint8)
        a.flags.writeable = False
        return a

    @cached_property
    def words(self) -> np.ndarray:
        """All complete big-endian 32-bit words, as native uint32."""
        n = len(self._data) // 4
        a = np.frombuffer(self._data, dtype=">u4", count=n).astype(np.uint32)
        a.flags.writeable = False
        return a

    @property
    def nwords(self) -> int:
        return len(self._data) // 4

    def uniforms(self, start: int = 0, count: int | None = None) -> np.ndarray:
        """Words mapped to [0, 1) as ``w / 2**32``."""
        w = self.words[start:None if count is None else start + count]
        return w.astype(np.float64) * (1.0 / 4294967296.0)

    def cursor(self) -> "BitCursor":
        return BitCursor(self)


class BitCursor:
    """Sequential reader over a ByteBuffer at bit granularity."""

    def __init__(self, buffer: ByteBuffer, bit_position: int = 0):
        if not 0 <= bit_position <= 8 * len(buffer):
            raise EndOfStream(f"bit position {bit_position} outside buffer")
        self.buffer = buffer
        self.bit_position = bit_position

    @property
    def remaining(self) -> int:
        return 8 * len(self.buffer) - self.bit_position

    def _need(self, nbits: int) -> None:
        if nbits > self.remaining:
            raise EndOfStream(
                f"need {nbits} bits at bit {self.bit_position}, only {self.remaining} remain"
            )

    def read_bits(self, nbits: int) -> np.ndarray:
        self._need(nbits)
        start = self.bit_position
        lo, hi = start // 8, -(-(start + nbits) // 8)
        bits = np.unpackbits(self.buffer.u8[lo:hi])[start - 8 * lo:start - 8 * lo + nbits]
        self.bit_position += nbits
        return bits

    def next_word32(self) -> int:
        self._need(32)
        if self.bit_position % 8 == 0:
            i = self.bit_position // 8
            value = int.from_bytes(self.buffer.data[i:i + 4], "big")
        else:
            value = int("".join(map(str, self.read_bits(32).tolist())), 2)
            self.bit_position -= 32
        self.bit_position += 32
        return value

    def overlapping_words(self, width: int, count: int) -> np.ndarray:
        """``count`` words of ``width`` bits, sliding one bit at a time.

        The cursor advances by ``count`` bits, so the next call continues
        with the word that would have followed.
        """
        if not 1 <= width <= 32:
            raise ValueError("width must be between 1 and 32")
        self._need(width + count - 1)
        bits = self.read_bits(width + count - 1)
        self.bit_position -= width - 1
        return sliding_bit_words(bits, width)


def sliding_bit_words(bits: np.ndarray, width: int) -> np.ndarray:
    """Overlapping ``width``-bit words from a 0/1 array, MSB first."""
    n = len(bits) - width + 1
    out = np.zeros(n, dtype=np.uint32)
    for t in range(width):
        out = (out << np.uint32(1)) | bits[t:t + n].astype(np.uint32)
    return out


def pack_bits(bits) -> ByteBuffer:
    """Pack 0/1 values MSB-first; the count must be a positive multiple of 8."""
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.ndim != 1 or arr.size == 0 or arr.size % 8:
        raise StreamSizeError(f"bit count must be a positive multiple of 8, got {arr.size}")
    if np.any(arr > 1):
        raise ValueError("bits must be 0 or 1")
    return ByteBuffer(np.packbits(arr).tobytes())


def write_stream_file(path, spec: GeneratorSpec, nbytes: int = DEFAULT_NBYTES) -> ByteBuffer:
    """Write exactly ``nbytes`` raw bytes of ``spec``'s stream to ``path``."""
    data = ByteBuffer(spec.stream_bytes(nbytes))
    tmp = f"{os.fspath(path)}.part"
    try:
        with open(tmp, "wb") as fh:
            fh.write(data.data)
        os.replace(tmp, path)
    except OSError as exc:
        raise StreamFileError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return data

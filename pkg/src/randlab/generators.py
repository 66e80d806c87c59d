"""Pseudo-random sources: the modified D-sequence, KISS and MT19937.

Each generator has a scalar, iterator-style interface (one value per
``next()`` call) plus a vectorised bulk path used to produce test files.
The bulk paths use jump-ahead arithmetic so that a 12 MB stream takes
about a second; they are checked against the scalar recurrences in the
test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, NamedTuple

import numpy as np

MASK32 = 0xFFFFFFFF
MAX_MODULUS = 1 << 62

__all__ = [
    "DSequence",
    "DSequenceParams",
    "GeneratorSpec",
    "Kiss",
    "MT19937",
    "Modulus",
    "ParameterError",
    "choose_multiplier",
    "ds_bits",
    "ds_bytes",
    "find_modulus",
    "is_prime",
    "multiplicative_order",
]


class ParameterError(ValueError):
    """Invalid generator parameters."""


# ---------------------------------------------------------------------------
# number theory helpers

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, exact for n < 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _factorize(n: int) -> dict[int, int]:
    factors: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            factors[d] = factors.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        factors[n] = factors.get(n, 0) + 1
    return factors


def multiplicative_order(l: int, p: int, q: int) -> int:
    """Order of ``l`` modulo ``p*q`` for distinct primes p, q."""
    m = p * q
    if math.gcd(l, m) != 1:
        raise ParameterError(f"{l} is not a unit modulo {m}")
    # The order divides the Carmichael function lcm(p-1, q-1).
    order = math.lcm(p - 1, q - 1)
    factors = _factorize(p - 1)
    for f, e in _factorize(q - 1).items():
        factors[f] = max(factors.get(f, 0), e)
    for f in factors:
        while order % f == 0 and pow(l, order // f, m) == 1:
            order //= f
    return order


# ---------------------------------------------------------------------------
# D-sequence


class Modulus(NamedTuple):
    p: int
    q: int
    m: int


def find_modulus(max_range: int) -> Modulus:
    """Return the two largest primes ``q < p <= max_range`` and ``m = p*q``."""
    if max_range < 3:
        raise ParameterError(
            f"insufficient primes: range must be >= 3 to hold two primes, got {max_range}"
        )
    if max_range * (max_range - 1) >= MAX_MODULUS:
        raise ParameterError(f"range {max_range} would push the modulus past 2^62")
    found: list[int] = []
    n = max_range
    while len(found) < 2:
        if is_prime(n):
            found.append(n)
        n -= 1
    p, q = found
    return Modulus(p, q, p * q)


def choose_multiplier(m: int) -> int:
    """Smallest ``l >= max(2, m // 4)`` that is coprime to ``m``."""
    if m < 6:
        raise ParameterError(f"modulus must be >= 6, got {m}")
    l = max(2, m // 4)
    while math.gcd(l, m) != 1:
        l += 1
    return l


@dataclass(frozen=True)
class DSequenceParams:
    max_range: int
    p: int
    q: int
    m: int
    l: int

    def __post_init__(self):
        if self.p * self.q != self.m:
            raise ParameterError("m must equal p*q")
        if not (2 <= self.l < self.m) or math.gcd(self.l, self.m) != 1:
            raise ParameterError(f"multiplier {self.l} must be a unit in [2, {self.m})")

    @classmethod
    def from_range(cls, max_range: int) -> "DSequenceParams":
        p, q, m = find_modulus(max_range)
        return cls(max_range, p, q, m, choose_multiplier(m))

    @property
    def period(self) -> int:
        return multiplicative_order(self.l, self.p, self.q)


class DSequence:
    """Iterator over ``a(i) = l**i mod m`` for i = 1, 2, ...

    ``period`` is filled in once the residue returns to ``a(1)``.
    """

    def __init__(self, params: DSequenceParams):
        self.params = params
        self.a = 1
        self.i = 0
        self.period: int | None = None

    def __iter__(self) -> Iterator[int]:
        return self

    def __next__(self) -> int:
        l, m = self.params.l, self.params.m
        self.a = self.a * l % m
        self.i += 1
        if self.period is None and self.i > 1 and self.a == l % m:
            self.period = self.i - 1
        return self.a


def ds_next(state: DSequence) -> int:
    return next(state)


def _ds_residue_chunks(params: DSequenceParams, n: int, chunk: int = 1 << 22):
    """Yield arrays holding a(1..n) in order, ``chunk`` values at a time."""
    m, l = params.m, params.l
    if m < (1 << 32):
        dtype = np.uint64
        cast = np.uint64
    else:
        # products no longer fit in 64 bits; fall back to exact Python ints
        dtype = object
        cast = int
    first = min(n, chunk)
    block = np.empty(first, dtype=dtype)
    block[0] = cast(l % m)
    k = 1
    while k < first:
        s = min(k, first - k)
        block[k:k + s] = block[:s] * cast(pow(l, k, m)) % cast(m)
        k += s
    yield block
    done = first
    step = cast(pow(l, chunk, m))
    while done < n:
        block = block * step % cast(m)
        take = min(chunk, n - done)
        yield block[:take]
        done += take


def ds_residues(params: DSequenceParams, n: int) -> np.ndarray:
    """a(1..n) via the bulk jump-ahead path (object dtype when m >= 2**32)."""
    if n < 1:
        raise ParameterError("n must be >= 1")
    return np.concatenate(list(_ds_residue_chunks(params, n)))


def ds_bits(params: DSequenceParams, nbits: int) -> np.ndarray:
    """LSBs b(i) = a(i) mod 2 for i = 1..nbits, as a uint8 array."""
    if nbits < 1:
        raise ParameterError("nbits must be >= 1")
    parts = [
        (np.asarray(c % 2 if c.dtype == object else c & np.uint64(1))).astype(np.uint8)
        for c in _ds_residue_chunks(params, nbits)
    ]
    return np.concatenate(parts)


def ds_bytes(params: DSequenceParams, nbytes: int) -> bytes:
    """Pack ``8 * nbytes`` D-sequence bits MSB-first into bytes."""
    if nbytes < 1:
        raise ParameterError("nbytes must be >= 1")
    out = []
    for c in _ds_residue_chunks(params, 8 * nbytes):
        bits = (c % 2 if c.dtype == object else c & np.uint64(1)).astype(np.uint8)
        out.append(np.packbits(bits).tobytes())
    return b"".join(out)


# ---------------------------------------------------------------------------
# jump-ahead helpers for the bulk paths


def _doubling(first, n: int, dtype, jump, square):
    """Fill ``x[0..n)`` from ``x[0] = first`` given a jump-by-k operator.

    ``jump(params, arr)`` advances every element of ``arr`` by k steps;
    ``square(params)`` turns k-step parameters into 2k-step ones.
    """
    out = np.empty(n, dtype=dtype)
    out[0] = first
    k, params = 1, None
    while k < n:
        params = square(params)
        s = min(k, n - k)
        out[k:k + s] = jump(params, out[:s])
        k *= 2
    return out


def _xorshift_columns() -> list[int]:
    cols = []
    for i in range(32):
        x = 1 << i
        x ^= (x << 17) & MASK32
        x ^= x >> 13
        x ^= (x << 5) & MASK32
        cols.append(x)
    return cols


def _apply_columns(cols: list[int], x: int) -> int:
    r = 0
    i = 0
    while x:
        if x & 1:
            r ^= cols[i]
        x >>= 1
        i += 1
    return r


def _byte_tables(cols: list[int]) -> np.ndarray:
    tables = np.zeros((4, 256), dtype=np.uint32)
    for b in range(4):
        for v in range(256):
            tables[b, v] = _apply_columns(cols, v << (8 * b))
    return tables


# ---------------------------------------------------------------------------
# KISS

KISS_DEFAULT_SEED = (362436069, 521288629, 123456789, 380116160)
_Z_MULT, _W_MULT = 36969, 18000


def _mwc16(x: int, a: int) -> int:
    return a * (x & 0xFFFF) + (x >> 16)


def _shr3(x: int) -> int:
    x ^= (x << 17) & MASK32
    x ^= x >> 13
    x ^= (x << 5) & MASK32
    return x


class Kiss:
    """Marsaglia's 1999 KISS: two 16-bit MWCs, SHR3 and a congruential."""

    def __init__(self, z: int = KISS_DEFAULT_SEED[0], w: int = KISS_DEFAULT_SEED[1],
                 jsr: int = KISS_DEFAULT_SEED[2], jcong: int = KISS_DEFAULT_SEED[3]):
        self.z, self.w, self.jsr, self.jcong = (v & MASK32 for v in (z, w, jsr, jcong))

    @classmethod
    def from_seed(cls, seed: int | None) -> "Kiss":
        if seed is None:
            return cls()
        # Spread a single 32-bit seed over the four words with MT19937,
        # avoiding the all-zero fixed points.
        mt = MT19937(seed)
        z, w, jsr, jcong = (next(mt) for _ in range(4))
        return cls(z or 1, w or 1, jsr or 1, jcong)

    @property
    def state(self) -> tuple[int, int, int, int]:
        return (self.z, self.w, self.jsr, self.jcong)

    def __iter__(self):
        return self

    def __next__(self) -> int:
        self.z = _mwc16(self.z, _Z_MULT)
        self.w = _mwc16(self.w, _W_MULT)
        mwc = ((self.z << 16) + self.w) & MASK32
        self.jcong = (69069 * self.jcong + 1234567) & MASK32
        self.jsr = _shr3(self.jsr)
        return ((mwc ^ self.jcong) + self.jsr) & MASK32

    def words(self, n: int) -> np.ndarray:
        """Next ``n`` outputs as uint32, advancing the state."""
        warm = min(n, 4)
        head = np.array([next(self) for _ in range(warm)], dtype=np.uint32)
        n -= warm
        if n == 0:
            return head
        z = self._lehmer(self.z, _Z_MULT, n)
        w = self._lehmer(self.w, _W_MULT, n)
        jcong = self._lcg(n)
        jsr = self._shr3_stream(n)
        self.z, self.w = int(z[-1]), int(w[-1])
        self.jcong, self.jsr = int(jcong[-1]), int(jsr[-1])
        mwc = ((z << np.uint64(16)) + w) & np.uint64(MASK32)
        out = (((mwc ^ jcong) + jsr) & np.uint64(MASK32)).astype(np.uint32)
        return np.concatenate([head, out])

    @staticmethod
    def _lehmer(x0: int, a: int, n: int) -> np.ndarray:
        # After warm-up a 16-bit MWC state z satisfies z' = a*z mod (a*2^16 - 1);
        # both 0 and the modulus itself are fixed points.
        mod = a * 65536 - 1
        if x0 % mod == 0:
            return np.full(n, x0, dtype=np.uint64)
        first = _mwc16(x0, a)
        mod64 = np.uint64(mod)

        def square(k):
            return np.uint64(a) if k is None else np.uint64(int(k) * int(k) % mod)

        return _doubling(first, n, np.uint64, lambda k, arr: arr * k % mod64, square)

    def _lcg(self, n: int) -> np.ndarray:
        first = (69069 * self.jcong + 1234567) & MASK32
        mask = np.uint64(MASK32)

        def square(ac):
            if ac is None:
                return (69069, 1234567)
            a, c = ac
            return (a * a & MASK32, (a * c + c) & MASK32)

        def jump(ac, arr):
            return (arr * np.uint64(ac[0]) + np.uint64(ac[1])) & mask

        return _doubling(first, n, np.uint64, jump, square)

    def _shr3_stream(self, n: int) -> np.ndarray:
        first = _shr3(self.jsr)

        def square(state):
            if state is None:
                cols = _xorshift_columns()
            else:
                cols = [_apply_columns(state[0], c) for c in state[0]]
            return cols, _byte_tables(cols)

        def jump(state, arr):
            t = state[1]
            a = arr.astype(np.uint32)
            r = t[0][a & 0xFF] ^ t[1][(a >> 8) & 0xFF] ^ t[2][(a >> 16) & 0xFF] ^ t[3][a >> 24]
            return r.astype(np.uint64)

        return _doubling(first, n, np.uint64, jump, square)


# ---------------------------------------------------------------------------
# MT19937

_N, _M = 624, 397
_MATRIX_A = np.uint32(0x9908B0DF)
_UPPER = np.uint32(0x80000000)
_LOWER = np.uint32(0x7FFFFFFF)


def _mix(cur, nxt, far):
    y = (cur & _UPPER) | (nxt & _LOWER)
    return far ^ (y >> np.uint32(1)) ^ ((y & np.uint32(1)) * _MATRIX_A)


class MT19937:
    """Standard 32-bit Mersenne Twister seeded with ``init_genrand``."""

    def __init__(self, seed: int = 5489):
        mt = [seed & MASK32]
        for i in range(1, _N):
            prev = mt[-1]
            mt.append((1812433253 * (prev ^ (prev >> 30)) + i) & MASK32)
        self.v = np.array(mt, dtype=np.uint32)
        self.idx = _N
        self._out = np.empty(0, dtype=np.uint32)

    def _twist(self) -> None:
        mt = self.v
        new = np.empty_like(mt)
        new[:227] = _mix(mt[:227], mt[1:228], mt[397:])
        for start in range(227, 623, 227):
            end = min(start + 227, 623)
            new[start:end] = _mix(mt[start:end], mt[start + 1:end + 1],
                                  new[start - 227:end - 227])
        new[623] = _mix(mt[623:624], new[0:1], new[396:397])[0]
        self.v = new
        self.idx = 0

    @staticmethod
    def _temper(y: np.ndarray) -> np.ndarray:
        y = y ^ (y >> np.uint32(11))
        y = y ^ ((y << np.uint32(7)) & np.uint32(0x9D2C5680))
        y = y ^ ((y << np.uint32(15)) & np.uint32(0xEFC60000))
        return y ^ (y >> np.uint32(18))

    def words(self, n: int) -> np.ndarray:
        parts = []
        while n > 0:
            if self.idx >= _N:
                self._twist()
            take = min(n, _N - self.idx)
            parts.append(self.v[self.idx:self.idx + take])
            self.idx += take
            n -= take
        if not parts:
            return np.empty(0, dtype=np.uint32)
        return self._temper(np.concatenate(parts))

    def __iter__(self):
        return self

    def __next__(self) -> int:
        return int(self.words(1)[0])


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class GeneratorSpec:
    """Which generator to run and how to parameterise it.

    ``kind`` is ``"dseq"`` (needs ``max_range``), ``"kiss"`` or ``"mt"``
    (optional ``seed``).
    """

    kind: str
    max_range: int | None = None
    seed: int | None = None

    KINDS = ("dseq", "kiss", "mt")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ParameterError(f"unknown generator {self.kind!r}; choose from {', '.join(self.KINDS)}")
        if self.kind == "dseq" and self.max_range is None:
            raise ParameterError("the D-sequence generator needs a range")

    @property
    def label(self) -> str:
        if self.kind == "dseq":
            return f"dseq(range={self.max_range})"
        return f"{self.kind}(seed={self.seed if self.seed is not None else 'default'})"

    def stream_bytes(self, nbytes: int) -> bytes:
        """First ``nbytes`` bytes of this generator's test stream."""
        if nbytes < 1:
            raise ParameterError("nbytes must be >= 1")
        if self.kind == "dseq":
            return ds_bytes(DSequenceParams.from_range(self.max_range), nbytes)
        if self.kind == "kiss":
            gen = Kiss.from_seed(self.seed)
        else:
            gen = MT19937(5489 if self.seed is None else self.seed)
        words = gen.words(-(-nbytes // 4))
        return words.astype(">u4").tobytes()[:nbytes]

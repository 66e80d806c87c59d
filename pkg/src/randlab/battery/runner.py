"""The 15-test battery in canonical order, optionally run in parallel."""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, NamedTuple

from ..bitstream import ByteBuffer
from ..generators import ParameterError
from . import birthday, count1s, geometry, monkey, osums, rank
from .craps import WORDS_NEEDED as CRAPS_WORDS, craps
from .operm5 import WORDS_NEEDED as OPERM5_WORDS, operm5
from .runs import WORDS_NEEDED as RUNS_WORDS, runs
from .squeeze import WORDS_NEEDED as SQUEEZE_WORDS, squeeze
from .base import InsufficientData, TestResult


class BatteryTest(NamedTuple):
    name: str
    run: Callable[[ByteBuffer], TestResult]
    words_needed: int

    @property
    def bytes_needed(self) -> int:
        return 4 * self.words_needed


TESTS: tuple[BatteryTest, ...] = (
    BatteryTest("birthday_spacings", birthday.birthday_spacings, birthday.WORDS_NEEDED),
    BatteryTest("operm5", operm5, OPERM5_WORDS),
    BatteryTest("binary_rank", rank.binary_rank, rank.WORDS_NEEDED),
    BatteryTest("bitstream", monkey.bitstream, monkey.BITSTREAM.words_needed),
    BatteryTest("opso", monkey.opso, monkey.OPSO.words_needed),
    BatteryTest("oqso", monkey.oqso, monkey.OQSO.words_needed),
    BatteryTest("dna", monkey.dna, monkey.DNA.words_needed),
    BatteryTest("count_the_1s", count1s.count_the_1s_both, count1s.WORDS_NEEDED),
    BatteryTest("parking_lot", geometry.parking_lot, geometry.PARKING_WORDS),
    BatteryTest("minimum_distance", geometry.minimum_distance, geometry.MINDIST_WORDS),
    BatteryTest("spheres_3d", geometry.spheres_3d, geometry.SPHERES_WORDS),
    BatteryTest("squeeze", squeeze, SQUEEZE_WORDS),
    BatteryTest("overlapping_sums", osums.overlapping_sums, osums.WORDS_NEEDED),
    BatteryTest("runs", runs, RUNS_WORDS),
    BatteryTest("craps", craps, CRAPS_WORDS),
)
REGISTRY = {t.name: t for t in TESTS}
TEST_NAMES = tuple(REGISTRY)


def resolve_selection(selection: Iterable[str] | None = None) -> list[BatteryTest]:
    """Selected tests in canonical order; ``None`` means all of them."""
    if selection is None:
        return list(TESTS)
    wanted = set(selection)
    unknown = sorted(wanted - set(REGISTRY))
    if unknown:
        raise ParameterError(
            f"unknown test(s) {', '.join(unknown)}; valid names: {', '.join(TEST_NAMES)}"
        )
    if not wanted:
        raise ParameterError("empty test selection")
    return [t for t in TESTS if t.name in wanted]


def bytes_needed(selection: Iterable[str] | None = None) -> int:
    return max(t.bytes_needed for t in resolve_selection(selection))


def default_jobs() -> int:
    env = os.environ.get("RANDLAB_JOBS")
    if env:
        try:
            jobs = int(env)
        except ValueError:
            raise ParameterError(f"RANDLAB_JOBS must be an integer, got {env!r}") from None
        if jobs < 1:
            raise ParameterError("RANDLAB_JOBS must be >= 1")
        return jobs
    return os.cpu_count() or 1


_worker_buffer: ByteBuffer | None = None


def _init_worker(buffer: ByteBuffer) -> None:
    global _worker_buffer
    _worker_buffer = buffer


def _run_in_worker(name: str) -> TestResult:
    return REGISTRY[name].run(_worker_buffer)


def run_battery(buffer: ByteBuffer, selection: Iterable[str] | None = None,
                jobs: int = 1) -> list[TestResult]:
    """Run the selected tests on ``buffer``; results come back in canonical order.

    Every test reads the buffer from its start. With ``jobs > 1`` the tests
    are spread over worker processes; the output does not depend on ``jobs``.
    """
    tests = resolve_selection(selection)
    need = max(t.bytes_needed for t in tests)
    if len(buffer) < need:
        names = ", ".join(t.name for t in tests if t.bytes_needed > len(buffer))
        raise InsufficientData(
            f"selected tests need at least {need} bytes, buffer has {len(buffer)} "
            f"(too short for: {names})"
        )
    if jobs < 1:
        raise ParameterError("jobs must be >= 1")
    jobs = min(jobs, len(tests))
    if jobs == 1:
        return [t.run(buffer) for t in tests]
    with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                             initargs=(buffer,)) as pool:
        return list(pool.map(_run_in_worker, [t.name for t in tests]))

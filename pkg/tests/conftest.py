from pathlib import Path

import numpy as np
import pytest

from randlab.bitstream import DEFAULT_NBYTES, ByteBuffer
from randlab.generators import GeneratorSpec

DATA = Path(__file__).parent / "data"
FIXTURE_1MIB = DATA / "mt_seed7_1mib.bin"
# tests that fit in the committed 1 MiB fixture
FIXTURE_TESTS = ("count_the_1s", "parking_lot", "spheres_3d", "overlapping_sums", "runs")


@pytest.fixture(scope="session")
def mt_buffer():
    return ByteBuffer(GeneratorSpec("mt", seed=1).stream_bytes(DEFAULT_NBYTES))


@pytest.fixture(scope="session")
def zero_buffer():
    return ByteBuffer(bytes(DEFAULT_NBYTES))


@pytest.fixture(scope="session")
def fixture_buffer():
    return ByteBuffer.from_file(FIXTURE_1MIB)


def buffer_from_words(words) -> ByteBuffer:
    return ByteBuffer(np.asarray(words, dtype=">u4").tobytes())


def buffer_from_uniforms(u) -> ByteBuffer:
    w = np.minimum(np.floor(np.asarray(u) * 2.0 ** 32), 2.0 ** 32 - 1)
    return buffer_from_words(w.astype(np.uint64))


_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def verdict(request):
    """Record and print one PASS/FAIL line, then assert on it."""
    def record(number: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        request.config.stash[_VERDICTS].append(line)
        print(line)
        assert ok, line
    return record

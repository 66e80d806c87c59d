"""The Diehard battery: 15 tests mapping a ByteBuffer to p-values."""

from .base import InsufficientData, TestResult
from .birthday import birthday_spacings
from .count1s import count_the_1s
from .craps import craps
from .geometry import minimum_distance, parking_lot, spheres_3d
from .monkey import BITSTREAM, DNA, OPSO, OQSO, MonkeyConfig, monkey_test
from .operm5 import operm5
from .osums import overlapping_sums
from .rank import binary_rank, binary_rank_6x8, binary_rank_large
from .runner import REGISTRY, TEST_NAMES, bytes_needed, resolve_selection, run_battery
from .runs import runs
from .squeeze import squeeze

__all__ = [
    "BITSTREAM", "DNA", "OPSO", "OQSO", "REGISTRY", "TEST_NAMES",
    "InsufficientData", "MonkeyConfig", "TestResult",
    "binary_rank", "binary_rank_6x8", "binary_rank_large", "birthday_spacings",
    "bytes_needed", "count_the_1s", "craps", "minimum_distance", "monkey_test",
    "operm5", "overlapping_sums", "parking_lot", "resolve_selection", "run_battery",
    "runs", "spheres_3d", "squeeze",
]

"""Null-distribution constants for the battery.

Values come from ``scripts/calibrate.py`` (Monte Carlo with MT19937);
the run that produced them is recorded in ``calibration.json`` next to
this file.
"""

# standard deviation of the missing-word count
MONKEY_SIGMA = {
    "bitstream": 428.0,
    "opso": 290.0,
    "oqso": 295.0,
    "dna": 339.0,
}

# successful parkings out of 12,000 attempts
PARKING_MEAN = 3523.0
PARKING_SIGMA = 21.9

# exponential means of d^2 (2-D) and r^3 (3-D) nearest-pair distances
MINDIST_MEAN = 0.995
SPHERES_MEAN = 30.0

# P(iterations <= 6), P(7), ..., P(47), P(>= 48)
SQUEEZE_PROBS: tuple[float, ...] = (
    0.0000198, 0.0000621, 0.0001736, 0.0004841,
    0.0011163, 0.0023521, 0.0046241, 0.0082207,
    0.0135892, 0.0209815, 0.0301043, 0.0408334,
    0.0519237, 0.0628844, 0.0720701, 0.0786872,
    0.0821623, 0.0820640, 0.0783943, 0.0721884,
    0.0640870, 0.0546817, 0.0452092, 0.0361966,
    0.0279439, 0.0209938, 0.0153366, 0.0109441,
    0.0075597, 0.0051162, 0.0033844, 0.0021705,
    0.0013637, 0.0008399, 0.0005110, 0.0003071,
    0.0001814, 0.0001042, 0.0000590, 0.0000333,
    0.0000186, 0.0000113, 0.0000112,
)

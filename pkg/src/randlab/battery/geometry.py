"""Parking lot, minimum distance and 3-D spheres."""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from ..stats import PValue, normal_cdf
from . import constants
from .base import TestResult, ks_uniform_p, require_words

PARK_SIDE = 100.0
PARK_ATTEMPTS = 12_000
PARK_TRIALS = 10

MINDIST_SIDE = 10_000.0
MINDIST_POINTS = 8_000
MINDIST_ROUNDS = 100

SPHERES_SIDE = 1_000.0
SPHERES_POINTS = 4_000
SPHERES_ROUNDS = 20

_NEIGHBOURS = np.array([(dx, dy) for dx in (-1, 0, 1) for dy in (-1, 0, 1)])


def park(xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Successful parkings for each row of attempt coordinates in [0, 100).

    A unit car crashes when it is within 1 of a parked car in both x and y.
    Two parked cars can never share a unit grid cell, so each cell stores
    at most one car and only the 3x3 surrounding cells need checking.
    """
    xs = np.atleast_2d(xs)
    ys = np.atleast_2d(ys)
    ntrials, nattempts = xs.shape
    size = int(PARK_SIDE) + 2
    px = np.full((ntrials, size, size), np.nan)
    py = np.full((ntrials, size, size), np.nan)
    cells_x = np.floor(xs).astype(np.int64) + 1
    cells_y = np.floor(ys).astype(np.int64) + 1
    trial = np.arange(ntrials)
    trial9 = np.repeat(trial, 9).reshape(ntrials, 9)
    parked = np.zeros(ntrials, dtype=np.int64)
    with np.errstate(invalid="ignore"):
        for i in range(nattempts):
            x, y = xs[:, i], ys[:, i]
            cx, cy = cells_x[:, i], cells_y[:, i]
            gx = cx[:, None] + _NEIGHBOURS[:, 0]
            gy = cy[:, None] + _NEIGHBOURS[:, 1]
            crash = ((np.abs(px[trial9, gx, gy] - x[:, None]) < 1.0)
                     & (np.abs(py[trial9, gx, gy] - y[:, None]) < 1.0)).any(axis=1)
            ok = ~crash
            px[trial[ok], cx[ok], cy[ok]] = x[ok]
            py[trial[ok], cx[ok], cy[ok]] = y[ok]
            parked += ok
    return parked


def parking_lot(buffer) -> TestResult:
    per_trial = 2 * PARK_ATTEMPTS
    require_words(buffer, PARK_TRIALS * per_trial, "parking_lot")
    u = buffer.uniforms(0, PARK_TRIALS * per_trial).reshape(PARK_TRIALS, PARK_ATTEMPTS, 2)
    parked = park(PARK_SIDE * u[:, :, 0], PARK_SIDE * u[:, :, 1])
    pvalues = [
        PValue(f"trial {t + 1}",
               normal_cdf((k - constants.PARKING_MEAN) / constants.PARKING_SIGMA))
        for t, k in enumerate(parked)
    ]
    pvalues.append(PValue("ks", ks_uniform_p([p.value for p in pvalues])))
    return TestResult("parking_lot", pvalues, {"parked": parked.tolist()})


def min_pair_distance(points: np.ndarray) -> float:
    d, _ = cKDTree(points).query(points, k=2)
    return float(d[:, 1].min())


def _nearest_pair_test(buffer, name, side, npoints, rounds, dim, power, mean) -> TestResult:
    per_round = dim * npoints
    require_words(buffer, rounds * per_round, name)
    u = buffer.uniforms(0, rounds * per_round).reshape(rounds, npoints, dim) * side
    dist = np.array([min_pair_distance(pts) for pts in u])
    transformed = 1.0 - np.exp(-dist ** power / mean)
    p = ks_uniform_p(transformed)
    return TestResult(name, [PValue("ks", p)], {
        "mean distance^%d" % power: float(np.mean(dist ** power)),
        "expected": mean,
    })


def minimum_distance(buffer) -> TestResult:
    return _nearest_pair_test(buffer, "minimum_distance", MINDIST_SIDE, MINDIST_POINTS,
                              MINDIST_ROUNDS, 2, 2, constants.MINDIST_MEAN)


def spheres_3d(buffer) -> TestResult:
    return _nearest_pair_test(buffer, "spheres_3d", SPHERES_SIDE, SPHERES_POINTS,
                              SPHERES_ROUNDS, 3, 3, constants.SPHERES_MEAN)


PARKING_WORDS = PARK_TRIALS * 2 * PARK_ATTEMPTS
MINDIST_WORDS = MINDIST_ROUNDS * 2 * MINDIST_POINTS
SPHERES_WORDS = SPHERES_ROUNDS * 3 * SPHERES_POINTS

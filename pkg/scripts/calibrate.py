"""Monte Carlo calibration of the battery's null constants.

Draws everything from MT19937 and writes a JSON record of the estimates
(with standard errors) that ``randlab/battery/constants.py`` is built from.

    python3 scripts/calibrate.py --out src/randlab/battery/calibration.json
"""

from __future__ import annotations

import argparse
import json
import math
import time

import numpy as np

from randlab.battery import geometry, monkey, squeeze
from randlab.generators import MT19937

SEED_BASE = 20_000  # kept away from the seeds used by the test-suite


def uniforms(mt: MT19937, n: int) -> np.ndarray:
    return mt.words(n) / 2.0 ** 32


def mean_se(x) -> tuple[float, float]:
    x = np.asarray(x, dtype=float)
    return float(x.mean()), float(x.std(ddof=1) / math.sqrt(x.size))


def sigma_se(x) -> tuple[float, float]:
    # normal-theory standard error of the sample standard deviation
    x = np.asarray(x, dtype=float)
    s = float(x.std(ddof=1))
    return s, s / math.sqrt(2 * (x.size - 1))


def calibrate_squeeze(reps: int, chunk: int = 1_000_000) -> dict:
    mt = MT19937(SEED_BASE + 1)
    counts = np.zeros(squeeze.N_CELLS, dtype=np.int64)
    done_reps = 0
    while done_reps < reps:
        n = min(chunk, reps - done_reps)
        k = np.full(n, squeeze.START)
        steps = np.full(n, squeeze.MAX_CELL)
        active = np.arange(n)
        for t in range(squeeze.MAX_CELL):
            k = np.ceil(k * uniforms(mt, active.size))
            fin = k == 1.0
            steps[active[fin]] = t + 1
            active, k = active[~fin], k[~fin]
        cells = np.clip(steps, squeeze.MIN_CELL, squeeze.MAX_CELL) - squeeze.MIN_CELL
        counts += np.bincount(cells, minlength=squeeze.N_CELLS)
        done_reps += n
    return {"reps": reps, "counts": counts.tolist(),
            "probs": (counts / reps).tolist()}


def _monkey_samples(config: monkey.MonkeyConfig, target: int) -> list[int]:
    """Independent missing counts: disjoint letter positions of fresh streams."""
    out: list[int] = []
    seed = SEED_BASE + 100
    if config.name == "bitstream":
        mt = MT19937(seed)
        step = config.n_words // 32
        while len(out) < target:
            words = mt.words(step + 1)
            out.append(monkey.count_missing(monkey.bitstream_words(words, 0)))
        return out
    lb = config.letter_bits
    shifts = range(0, 32 - lb + 1, lb)
    n = config.n_words + config.letters_per_word - 1
    while len(out) < target:
        words = MT19937(seed).words(n)
        seed += 1
        for s in shifts:
            out.append(monkey.count_missing(monkey.letter_words(words, s, config)))
    return out[:target]


def calibrate_monkey(target: int) -> dict:
    res = {}
    for name, config in monkey.CONFIGS.items():
        x = _monkey_samples(config, target)
        m, m_se = mean_se(x)
        s, s_se = sigma_se(x)
        res[name] = {"samples": len(x), "mean": m, "mean_se": m_se,
                     "sigma": s, "sigma_se": s_se, "sigma_default": config.sigma}
        print(f"  {name}: mean {m:.2f} +- {m_se:.2f}, sigma {s:.2f} +- {s_se:.2f}", flush=True)
    return res


def calibrate_parking(trials: int, chunk: int = 500) -> dict:
    mt = MT19937(SEED_BASE + 2)
    parked = []
    for start in range(0, trials, chunk):
        n = min(chunk, trials - start)
        u = uniforms(mt, n * 2 * geometry.PARK_ATTEMPTS).reshape(n, geometry.PARK_ATTEMPTS, 2)
        parked.extend(geometry.park(geometry.PARK_SIDE * u[:, :, 0],
                                    geometry.PARK_SIDE * u[:, :, 1]).tolist())
    m, m_se = mean_se(parked)
    s, s_se = sigma_se(parked)
    return {"trials": trials, "mean": m, "mean_se": m_se, "sigma": s, "sigma_se": s_se}


def calibrate_nearest(rounds: int, side: float, npoints: int, dim: int, seed: int) -> dict:
    mt = MT19937(seed)
    vals = []
    for _ in range(rounds):
        pts = uniforms(mt, npoints * dim).reshape(npoints, dim) * side
        vals.append(geometry.min_pair_distance(pts) ** dim)
    m, m_se = mean_se(vals)
    return {"rounds": rounds, "mean": m, "mean_se": m_se}


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="calibration.json")
    ap.add_argument("--squeeze-reps", type=int, default=10_000_000)
    ap.add_argument("--monkey-samples", type=int, default=2_500)
    ap.add_argument("--parking-trials", type=int, default=10_000)
    ap.add_argument("--nearest-rounds", type=int, default=10_000)
    args = ap.parse_args(argv)

    record = {"generator": "mt19937", "seed_base": SEED_BASE}
    steps = [
        ("squeeze", lambda: calibrate_squeeze(args.squeeze_reps)),
        ("parking", lambda: calibrate_parking(args.parking_trials)),
        ("mindist", lambda: calibrate_nearest(args.nearest_rounds, geometry.MINDIST_SIDE,
                                              geometry.MINDIST_POINTS, 2, SEED_BASE + 3)),
        ("spheres", lambda: calibrate_nearest(args.nearest_rounds, geometry.SPHERES_SIDE,
                                              geometry.SPHERES_POINTS, 3, SEED_BASE + 4)),
        ("monkey", lambda: calibrate_monkey(args.monkey_samples)),
    ]
    for name, run in steps:
        t0 = time.perf_counter()
        print(f"{name} ...", flush=True)
        record[name] = run()
        record[name]["seconds"] = round(time.perf_counter() - t0, 1)
        with open(args.out, "w") as fh:
            json.dump(record, fh, indent=1)
        summary = {k: v for k, v in record[name].items() if not isinstance(v, (list, dict))}
        print(f"{name}: {summary}", flush=True)


if __name__ == "__main__":
    main()

"""Verdicts, JSON/CSV reports, generator comparisons and p-value plots."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .battery.base import TestResult, ks_uniform_p
from .bitstream import ByteBuffer
from .generators import ParameterError
from .stats import PValue

PASS, SUSPECT, FAIL = "Pass", "Suspect", "Fail"
LEVELS = (PASS, SUSPECT, FAIL)
EDGE_TOL = 1e-6
SUSPECT_LOW, SUSPECT_HIGH = 0.025, 0.975


@dataclass(frozen=True)
class Verdict:
    level: str
    reason: str = ""

    def __post_init__(self):
        if self.level not in LEVELS:
            raise ValueError(f"unknown verdict level {self.level!r}")


def at_edge(p: float, tol: float = EDGE_TOL) -> bool:
    return p <= tol or p >= 1.0 - tol


def classify(result: TestResult | float | Sequence[float]) -> Verdict:
    """Pass / Suspect / Fail for one test's p-values.

    Fail: a single-p test at an edge, or at least min(2, ceil(n/2)) of n
    p-values within EDGE_TOL of 0 or 1. Suspect: any p outside
    [0.025, 0.975]. Pass otherwise.
    """
    if isinstance(result, TestResult):
        values = result.values
    elif isinstance(result, (int, float)):
        values = [float(result)]
    else:
        values = [float(v) for v in result]
    if not values:
        raise ParameterError("classify needs at least one p-value")
    n = len(values)
    edges = sum(at_edge(v) for v in values)
    need = min(2, math.ceil(n / 2))
    if edges >= need:
        return Verdict(FAIL, f"{edges} of {n} p-values within {EDGE_TOL:g} of an edge")
    outside = [v for v in values if v < SUSPECT_LOW or v > SUSPECT_HIGH]
    if outside:
        worst = min(outside, key=lambda v: min(v, 1.0 - v))
        return Verdict(SUSPECT, f"{len(outside)} of {n} p-values outside "
                                f"[{SUSPECT_LOW}, {SUSPECT_HIGH}], most extreme {worst:.6f}")
    return Verdict(PASS, "")


def representative_pvalue(result: TestResult) -> float:
    """One number per test: its own KS summary if it has one.

    Single-p tests report that p; other multi-p tests are summarised by a
    KS-over-p of their non-summary values.
    """
    for p in result.pvalues:
        if p.label == "ks":
            return p.value
    if len(result.pvalues) == 1:
        return result.pvalues[0].value
    values = [p.value for p in result.pvalues if not p.label.endswith("overall")]
    return ks_uniform_p(values)


def _plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-native values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


@dataclass
class BatteryReport:
    generator: str
    file_bytes: int
    sha256: str
    results: list[TestResult]
    verdicts: list[Verdict] = field(default_factory=list)

    def __post_init__(self):
        if not self.verdicts:
            self.verdicts = [classify(r) for r in self.results]
        if len(self.verdicts) != len(self.results):
            raise ValueError("one verdict per result is required")
        for r in self.results:
            r.details = _plain(r.details)

    @classmethod
    def build(cls, generator: str, buffer: ByteBuffer,
              results: list[TestResult]) -> "BatteryReport":
        return cls(generator, len(buffer), buffer.sha256, list(results))

    @property
    def test_names(self) -> list[str]:
        return [r.test_name for r in self.results]

    @property
    def summary(self) -> dict[str, int]:
        counts = {level.lower(): 0 for level in LEVELS}
        for v in self.verdicts:
            counts[v.level.lower()] += 1
        return counts

    @property
    def any_fail(self) -> bool:
        return any(v.level == FAIL for v in self.verdicts)

    def result(self, test: str) -> TestResult:
        for r in self.results:
            if r.test_name == test:
                return r
        raise ParameterError(f"test {test!r} not in report; it has: {', '.join(self.test_names)}")

    def to_dict(self) -> dict:
        return {
            "generator": self.generator,
            "file": {"bytes": self.file_bytes, "sha256": self.sha256},
            "results": [
                {
                    "test": r.test_name,
                    "pvalues": [{"label": p.label, "value": p.value} for p in r.pvalues],
                    "verdict": v.level,
                    "reason": v.reason,
                    "details": r.details,
                }
                for r, v in zip(self.results, self.verdicts)
            ],
            "summary": self.summary,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BatteryReport":
        try:
            results, verdicts = [], []
            for item in data["results"]:
                pvalues = [PValue(p["label"], float(p["value"])) for p in item["pvalues"]]
                results.append(TestResult(item["test"], pvalues, item.get("details", {})))
                verdicts.append(Verdict(item["verdict"], item.get("reason", "")))
            return cls(data["generator"], int(data["file"]["bytes"]),
                       data["file"]["sha256"], results, verdicts)
        except (KeyError, TypeError, ValueError) as exc:
            raise ParameterError(f"malformed report: {exc}") from exc


def render_json(report: BatteryReport) -> str:
    return json.dumps(report.to_dict(), indent=2) + "\n"


def parse_json(text: str) -> BatteryReport:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParameterError(f"report is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ParameterError("report must be a JSON object")
    return BatteryReport.from_dict(data)


def render_csv(report: BatteryReport) -> str:
    """One row per (test, p-value label)."""
    out = io.StringIO()
    w = csv.writer(out, lineterminator="\n")
    w.writerow(["test", "label", "pvalue", "verdict"])
    for r, v in zip(report.results, report.verdicts):
        for p in r.pvalues:
            w.writerow([r.test_name, p.label, f"{p.value:.6f}", v.level])
    return out.getvalue()


def render_summary(report: BatteryReport) -> str:
    lines = [f"generator: {report.generator}  ({report.file_bytes} bytes)"]
    width = max(len(n) for n in report.test_names)
    for r, v in zip(report.results, report.verdicts):
        lines.append(f"  {r.test_name:<{width}}  {representative_pvalue(r):.6f}  {v.level}")
    s = report.summary
    lines.append(f"pass {s['pass']}  suspect {s['suspect']}  fail {s['fail']}")
    return "\n".join(lines) + "\n"


@dataclass
class Comparison:
    """Representative p-value and verdict per (test, generator)."""

    tests: list[str]
    generators: list[str]
    pvalues: list[list[float]]
    verdicts: list[list[str]]

    def cell(self, i: int, j: int) -> str:
        text = f"{self.pvalues[i][j]:.6f}"
        level = self.verdicts[i][j]
        return text if level == PASS else f"{text} [{level}]"

    def to_csv(self) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["test", *self.generators])
        for i, test in enumerate(self.tests):
            w.writerow([test, *(self.cell(i, j) for j in range(len(self.generators)))])
        return out.getvalue()

    def to_text(self) -> str:
        rows = [["test", *self.generators]]
        for i, test in enumerate(self.tests):
            rows.append([test, *(self.cell(i, j) for j in range(len(self.generators)))])
        widths = [max(len(r[c]) for r in rows) for c in range(len(rows[0]))]
        return "\n".join(
            "  ".join(s.ljust(w) for s, w in zip(r, widths)).rstrip() for r in rows
        ) + "\n"


def compare_reports(reports: Sequence[BatteryReport]) -> Comparison:
    if len(reports) < 2:
        raise ParameterError("comparison needs at least two reports")
    base = reports[0].test_names
    for rep in reports[1:]:
        if rep.test_names != base:
            missing = sorted(set(base) - set(rep.test_names))
            extra = sorted(set(rep.test_names) - set(base))
            raise ParameterError(
                f"report {rep.generator!r} covers different tests than {reports[0].generator!r}: "
                f"missing {missing or 'none'}, extra {extra or 'none'}"
            )
    pvals = [[representative_pvalue(rep.results[i]) for rep in reports] for i in range(len(base))]
    verdicts = [[rep.verdicts[i].level for rep in reports] for i in range(len(base))]
    return Comparison(list(base), [r.generator for r in reports], pvals, verdicts)


# test aliases for plotting: alias -> (test name, label prefix)
PLOT_ALIASES = {
    "rank6x8": ("binary_rank", "6x8 bits"),
    "rank31x31": ("binary_rank", "31x31"),
    "rank32x32": ("binary_rank", "32x32"),
}


def select_pvalues(report: BatteryReport, test: str) -> list[float]:
    """p-values of ``test`` (or a plotting alias such as ``rank6x8``)."""
    name, prefix = PLOT_ALIASES.get(test, (test, ""))
    result = report.result(name)
    return [p.value for p in result.pvalues if p.label.startswith(prefix)]


def _check_pvalues(pvalues: Iterable[float]) -> np.ndarray:
    arr = np.asarray(list(pvalues), dtype=np.float64)
    if arr.size == 0:
        raise ParameterError("no p-values given")
    if np.isnan(arr).any() or (arr < 0).any() or (arr > 1).any():
        raise ParameterError("p-values must lie in [0, 1]")
    return arr


def pvalue_histogram(pvalues: Iterable[float], bins: int = 10) -> list[tuple[float, float, int]]:
    """Equal-width bins over [0, 1] as (low, high, count); the last bin includes 1."""
    if bins < 2:
        raise ParameterError("histogram needs at least 2 bins")
    arr = _check_pvalues(pvalues)
    idx = np.minimum((arr * bins).astype(np.int64), bins - 1)
    counts = np.bincount(idx, minlength=bins)
    return [(k / bins, (k + 1) / bins, int(c)) for k, c in enumerate(counts)]


def pvalue_ecdf(pvalues: Iterable[float]) -> list[tuple[float, float]]:
    """Steps (value, fraction of p-values <= value) at each distinct value."""
    arr = np.sort(_check_pvalues(pvalues))
    values = np.unique(arr)
    fractions = np.searchsorted(arr, values, side="right") / arr.size
    return [(float(v), float(f)) for v, f in zip(values, fractions)]


def histogram_csv(hist) -> str:
    lines = ["bin_low,bin_high,count"]
    lines += [f"{lo:.6f},{hi:.6f},{c}" for lo, hi, c in hist]
    return "\n".join(lines) + "\n"


def ecdf_csv(ecdf) -> str:
    lines = ["pvalue,fraction"]
    lines += [f"{v:.6f},{f:.6f}" for v, f in ecdf]
    return "\n".join(lines) + "\n"


def render_svg(pvalues: Iterable[float], title: str = "", bins: int = 10) -> str:
    """Self-contained SVG: histogram on the left, ECDF on the right."""
    arr = _check_pvalues(pvalues)
    hist = pvalue_histogram(arr, bins)
    ecdf = pvalue_ecdf(arr)
    w, h, pad = 300, 200, 30
    top = max(c for _, _, c in hist)

    def panel(x0: int, body: list[str], label: str) -> list[str]:
        return [
            f'<g transform="translate({x0},{pad})">',
            f'<rect x="0" y="0" width="{w}" height="{h}" fill="none" stroke="#888"/>',
            *body,
            f'<text x="{w / 2}" y="{h + 20}" text-anchor="middle" font-size="12">{label}</text>',
            "</g>",
        ]

    bar_w = w / bins
    bars = [
        f'<rect x="{k * bar_w:.2f}" y="{h - h * c / top:.2f}" width="{bar_w:.2f}" '
        f'height="{h * c / top:.2f}" fill="#4a7ab5" stroke="white"/>'
        for k, (_, _, c) in enumerate(hist) if c
    ]
    pts, prev = [f"0,{h}"], 0.0
    for v, f in ecdf:
        pts.append(f"{v * w:.2f},{h - prev * h:.2f}")
        pts.append(f"{v * w:.2f},{h - f * h:.2f}")
        prev = f
    pts.append(f"{w},{h - prev * h:.2f}")
    steps = [
        f'<line x1="0" y1="{h}" x2="{w}" y2="0" stroke="#bbb" stroke-dasharray="4 3"/>',
        f'<polyline points="{" ".join(pts)}" fill="none" stroke="#b54a4a" stroke-width="1.5"/>',
    ]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{2 * w + 3 * pad}" '
        f'height="{h + 2 * pad + 10}" font-family="sans-serif">',
        f'<text x="{pad}" y="18" font-size="13">{_escape(title)} (n={arr.size})</text>',
        *panel(pad, bars, "p-value histogram"),
        *panel(2 * pad + w, steps, "p-value ECDF"),
        "</svg>",
    ]
    return "\n".join(parts) + "\n"


def _escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")

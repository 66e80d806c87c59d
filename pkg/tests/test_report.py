import csv
import io
import json
import xml.etree.ElementTree as ET

import pytest
from hypothesis import given, strategies as st

from randlab.battery import TestResult, run_battery
from randlab.bitstream import ByteBuffer
from randlab.generators import ParameterError
from randlab.report import (
    FAIL, PASS, SUSPECT, BatteryReport, Verdict, classify, compare_reports, ecdf_csv,
    histogram_csv, parse_json, pvalue_ecdf, pvalue_histogram, render_csv, render_json,
    render_summary, render_svg, representative_pvalue, select_pvalues,
)
from randlab.stats import PValue


def result(name, *values, labels=None):
    labels = labels or [f"p{i}" for i in range(len(values))]
    return TestResult(name, [PValue(l, v) for l, v in zip(labels, values)])


def report(label, results):
    return BatteryReport(label, 1234, "ab" * 32, results)


# --- classify ------------------------------------------------------------

@pytest.mark.parametrize("p, level", [
    (0.5, PASS), (0.99, SUSPECT), (1 - 1e-7, FAIL), (0.01, SUSPECT), (0.975, PASS),
    (0.025, PASS), (1.0, FAIL), (0.0, FAIL), (5e-7, FAIL), (2e-6, SUSPECT),
])
def test_classify_single(p, level):
    assert classify(p).level == level
    assert classify(result("t", p)).level == level


def test_classify_multi():
    assert classify([0.5, 0.4, 1.0, 0.3]).level == SUSPECT  # one edge out of four
    assert classify([0.5, 1.0, 1.0, 0.3]).level == FAIL
    assert classify([1.0, 0.4]).level == FAIL  # half of a two-p test
    assert classify([0.3] * 10).level == PASS


@given(st.floats(0, 1), st.floats(0, 1))
def test_classify_monotone_in_edge_proximity(p, q):
    if classify(p).level == FAIL:
        if p >= 0.5 and q > p:
            assert classify(q).level == FAIL
        if p < 0.5 and q < p:
            assert classify(q).level == FAIL


def test_classify_reason_and_validation():
    assert "within" in classify(1.0).reason
    with pytest.raises(ParameterError):
        classify([])
    with pytest.raises(ValueError):
        Verdict("Maybe")


def test_representative_pvalue():
    assert representative_pvalue(result("a", 0.3)) == 0.3
    assert representative_pvalue(result("b", 0.1, 0.9, 0.42, labels=["x", "y", "ks"])) == 0.42
    multi = result("c", 0.2, 0.6, 0.7, labels=["x", "y", "6x8 overall"])
    from randlab.battery.base import ks_uniform_p
    assert representative_pvalue(multi) == ks_uniform_p([0.2, 0.6])


# --- report serialisation ------------------------------------------------

def test_report_summary_counts():
    rep = report("g", [result("a", 0.5), result("b", 0.99), result("c", 1.0)])
    assert rep.summary == {"pass": 1, "suspect": 1, "fail": 1}
    assert sum(rep.summary.values()) == len(rep.results)
    assert rep.any_fail


def test_json_schema_and_round_trip(fixture_buffer):
    results = run_battery(fixture_buffer, ["runs", "overlapping_sums"])
    rep = BatteryReport.build("mt(seed=7)", fixture_buffer, results)
    text = render_json(rep)
    data = json.loads(text)
    assert set(data) == {"generator", "file", "results", "summary"}
    assert data["file"] == {"bytes": 1 << 20, "sha256": fixture_buffer.sha256}
    assert set(data["results"][0]) >= {"test", "pvalues", "verdict", "reason"}
    assert data["results"][0]["pvalues"][0].keys() == {"label", "value"}
    back = parse_json(text)
    assert back == rep
    assert render_json(back) == text


label_text = st.text(st.characters(blacklist_categories=("Cs",)), min_size=1, max_size=12)


@given(st.lists(st.tuples(label_text, st.lists(st.floats(0, 1), min_size=1, max_size=5)),
                min_size=1, max_size=6))
def test_json_round_trip_property(items):
    rep = report("gen", [TestResult(name, [PValue(f"v{i}", v) for i, v in enumerate(vals)],
                                    {"n": len(vals), "stats": vals})
                         for name, vals in items])
    assert parse_json(render_json(rep)) == rep


def test_details_numpy_values_become_plain():
    import numpy as np
    r = TestResult("t", [PValue("x", 0.5)], {"a": np.arange(3), "b": np.float64(2.5), "c": (1, 2)})
    rep = report("g", [r])
    assert parse_json(render_json(rep)) == rep
    assert rep.results[0].details == {"a": [0, 1, 2], "b": 2.5, "c": [1, 2]}


@pytest.mark.parametrize("text", ["not json", "[]", '{"generator": "x"}'])
def test_parse_rejects_malformed(text):
    with pytest.raises(ParameterError):
        parse_json(text)


def test_csv_rows():
    rep = report("g", [result("a", 0.5), result("b", 0.1, 0.123456789)])
    rows = list(csv.reader(io.StringIO(render_csv(rep))))
    assert rows[0] == ["test", "label", "pvalue", "verdict"]
    assert rows[1:] == [["a", "p0", "0.500000", "Pass"], ["b", "p0", "0.100000", "Pass"],
                        ["b", "p1", "0.123457", "Pass"]]


def test_summary_text():
    text = render_summary(report("g", [result("squeeze", 1.0)]))
    assert "squeeze" in text and "1.000000" in text and "Fail" in text


# --- comparison ----------------------------------------------------------

def three_reports():
    def rep(label, sq):
        return report(label, [result("operm5", 0.3, 0.6), result("squeeze", sq)])
    return [rep("kiss", 0.564635), rep("dseq", 1.0), rep("mt", 0.933079)]


def test_compare_text_and_flags():
    table = compare_reports(three_reports())
    assert table.tests == ["operm5", "squeeze"] and table.generators == ["kiss", "dseq", "mt"]
    text = table.to_text()
    assert "1.000000 [Fail]" in text and "0.564635" in text
    rows = list(csv.reader(io.StringIO(table.to_csv())))
    assert rows[0] == ["test", "kiss", "dseq", "mt"]
    assert rows[2] == ["squeeze", "0.564635", "1.000000 [Fail]", "0.933079"]


def test_compare_identical_reports():
    rep = three_reports()[0]
    table = compare_reports([rep, rep])
    assert all(row[0] == row[1] for row in table.pvalues)


def test_compare_errors():
    reps = three_reports()
    with pytest.raises(ParameterError, match="at least two"):
        compare_reports(reps[:1])
    other = report("x", [result("operm5", 0.3)])
    with pytest.raises(ParameterError, match="missing \\['squeeze'\\]"):
        compare_reports([reps[0], other])


# --- histogram / ECDF ----------------------------------------------------

def test_histogram_examples():
    assert [c for *_, c in pvalue_histogram([0.1, 0.9], 2)] == [1, 1]
    assert [c for *_, c in pvalue_histogram([1.0] * 7, 10)] == [0] * 9 + [7]
    assert [c for *_, c in pvalue_histogram([0.0, 0.5], 2)] == [1, 1]


@given(st.lists(st.floats(0, 1), min_size=1, max_size=100), st.integers(2, 40))
def test_histogram_conserves_count(values, bins):
    hist = pvalue_histogram(values, bins)
    assert sum(c for *_, c in hist) == len(values) and len(hist) == bins
    assert hist[0][0] == 0.0 and hist[-1][1] == 1.0


def test_histogram_errors():
    with pytest.raises(ParameterError):
        pvalue_histogram([], 10)
    with pytest.raises(ParameterError):
        pvalue_histogram([0.5], 1)
    with pytest.raises(ParameterError):
        pvalue_histogram([1.5], 10)


def test_ecdf_examples():
    assert pvalue_ecdf([0.5]) == [(0.5, 1.0)]
    steps = pvalue_ecdf([0.2, 0.4, 0.4])
    assert [v for v, _ in steps] == [0.2, 0.4]
    assert steps[0][1] == pytest.approx(1 / 3) and steps[1][1] == 1.0
    with pytest.raises(ParameterError):
        pvalue_ecdf([])


@given(st.lists(st.floats(0, 1), min_size=1, max_size=100))
def test_ecdf_monotone_ends_at_one(values):
    steps = pvalue_ecdf(values)
    fr = [f for _, f in steps]
    assert all(a < b for a, b in zip(fr, fr[1:])) and fr[-1] == 1.0


def test_plot_csv_and_svg():
    values = [0.05 * k for k in range(21)]
    hist_text = histogram_csv(pvalue_histogram(values, 5))
    assert hist_text.splitlines()[0] == "bin_low,bin_high,count"
    assert sum(int(line.split(",")[2]) for line in hist_text.splitlines()[1:]) == 21
    assert ecdf_csv(pvalue_ecdf(values)).splitlines()[-1] == "1.000000,1.000000"
    svg = render_svg(values, "rank <6x8>")
    root = ET.fromstring(svg)
    assert root.tag.endswith("svg")


def test_select_pvalues_alias():
    labels = ["31x31", "32x32"] + [f"6x8 bits {k}-{k + 7}" for k in range(1, 26)] + ["6x8 overall"]
    r = TestResult("binary_rank", [PValue(l, 0.5) for l in labels])
    rep = report("g", [r])
    assert len(select_pvalues(rep, "rank6x8")) == 25
    assert len(select_pvalues(rep, "binary_rank")) == 28
    with pytest.raises(ParameterError):
        select_pvalues(rep, "squeeze")

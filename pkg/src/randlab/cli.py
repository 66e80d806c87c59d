"""randlab command line: generate stream files, run the battery, compare and plot.

Exit status: 0 success (no Fail), 1 some test failed, 2 usage or parameter
error, 3 I/O error.
"""

from __future__ import annotations

import argparse
import os
import sys
import time

from .battery.runner import TEST_NAMES, bytes_needed, default_jobs, run_battery
from .bitstream import DEFAULT_NBYTES, ByteBuffer, StreamFileError, write_stream_file
from .generators import GeneratorSpec, ParameterError
from .report import (
    BatteryReport, compare_reports, ecdf_csv, histogram_csv, parse_json, pvalue_ecdf,
    pvalue_histogram, render_csv, render_json, render_summary, render_svg, select_pvalues,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_IO = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)


def _read_text(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_generate(args) -> int:
    if args.bytes < 4:
        raise UsageError("--bytes must be at least 4")
    spec = GeneratorSpec(args.gen, max_range=args.range, seed=args.seed)
    t0 = time.perf_counter()
    write_stream_file(args.out, spec, args.bytes)
    elapsed = time.perf_counter() - t0
    print(f"wrote {args.bytes} bytes of {spec.label} to {args.out} in {elapsed:.6f} s")
    return EXIT_OK


def _parse_selection(text: str | None) -> list[str] | None:
    if text is None or text == "all":
        return None
    names = [t.strip() for t in text.split(",") if t.strip()]
    if not names:
        raise UsageError("--tests is empty")
    return names


def cmd_test(args) -> int:
    selection = _parse_selection(args.tests)
    need = bytes_needed(selection)
    buffer = ByteBuffer.from_file(args.input)
    if len(buffer) < need:
        raise UsageError(f"{args.input} has {len(buffer)} bytes; the selected tests need "
                         f"at least {need} bytes")
    jobs = args.jobs if args.jobs is not None else default_jobs()
    results = run_battery(buffer, selection, jobs=jobs)
    label = args.label or os.path.basename(args.input)
    report = BatteryReport.build(label, buffer, results)
    text = render_json(report) if args.format == "json" else render_csv(report)
    if args.out:
        _write_text(args.out, text)
    sys.stdout.write(render_summary(report))
    return EXIT_FAIL if report.any_fail else EXIT_OK


def cmd_compare(args) -> int:
    if len(args.reports) < 2:
        raise UsageError("compare needs at least two report files")
    reports = [parse_json(_read_text(p)) for p in args.reports]
    table = compare_reports(reports)
    _write_text(args.out, table.to_csv() if args.format == "csv" else table.to_text())
    return EXIT_OK


def cmd_plot(args) -> int:
    report = parse_json(_read_text(args.report))
    values = select_pvalues(report, args.test)
    if not values:
        raise UsageError(f"no p-values for {args.test!r} in {args.report}")
    prefix = args.out_prefix or os.path.splitext(args.report)[0] + f"_{args.test}"
    hist = pvalue_histogram(values, args.bins)
    _write_text(prefix + "_hist.csv", histogram_csv(hist))
    _write_text(prefix + "_ecdf.csv", ecdf_csv(pvalue_ecdf(values)))
    written = [prefix + "_hist.csv", prefix + "_ecdf.csv"]
    if args.svg:
        _write_text(prefix + ".svg", render_svg(values, f"{report.generator}: {args.test}", args.bins))
        written.append(prefix + ".svg")
    print(f"{len(values)} p-values from {args.test}; wrote {', '.join(written)}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="randlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="write a raw stream file")
    gen.add_argument("--gen", required=True, choices=GeneratorSpec.KINDS)
    gen.add_argument("--range", type=int, help="maximum range for the D-sequence")
    gen.add_argument("--seed", type=int, help="seed for kiss / mt")
    gen.add_argument("--bytes", type=int, default=DEFAULT_NBYTES)
    gen.add_argument("--out", required=True)
    gen.set_defaults(func=cmd_generate)

    test = sub.add_parser("test", help="run the battery on a stream file")
    test.add_argument("--in", dest="input", required=True)
    test.add_argument("--tests", help=f"comma-separated subset of: {', '.join(TEST_NAMES)}")
    test.add_argument("--format", choices=("json", "csv"), default="json")
    test.add_argument("--out", help="report file (default: not written)")
    test.add_argument("--label", help="generator label stored in the report")
    test.add_argument("--jobs", type=_positive_int,
                      help="worker processes (default: $RANDLAB_JOBS or the core count)")
    test.set_defaults(func=cmd_test)

    cmp_ = sub.add_parser("compare", help="tabulate several JSON reports side by side")
    cmp_.add_argument("reports", nargs="+")
    cmp_.add_argument("--format", choices=("text", "csv"), default="text")
    cmp_.add_argument("--out", help="output file (default: stdout)")
    cmp_.set_defaults(func=cmd_compare)

    plot = sub.add_parser("plot", help="histogram and ECDF of one test's p-values")
    plot.add_argument("--report", required=True)
    plot.add_argument("--test", required=True, help="test name, or rank6x8 / rank31x31 / rank32x32")
    plot.add_argument("--bins", type=int, default=10)
    plot.add_argument("--out-prefix", help="output path prefix (default: next to the report)")
    plot.add_argument("--svg", action="store_true", help="also write an SVG figure")
    plot.set_defaults(func=cmd_plot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ParameterError, ValueError) as exc:
        print(f"randlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (StreamFileError, OSError) as exc:
        print(f"randlab: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

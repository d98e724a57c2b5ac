"""Command-line harness: ``qha run`` executes verification suites and
``qha verify-finite`` runs the exhaustive finite-group check."""

from __future__ import annotations

import argparse
import os
import platform
import sys
import time
import traceback
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path

import numpy as np
import scipy

from .finite import exhaustive_verify
from .report import NormReport, emit_report
from .suites import SUITE_FUNCS, SUITES, SuiteConfig

REPORT_STEM = "qha_report"


@contextmanager
def worker_pool(workers: int):
    """Order-preserving map; the builtin ``map`` when single-threaded."""
    if workers <= 1:
        yield map
        return
    with ThreadPoolExecutor(max_workers=workers) as ex:
        yield ex.map


def _versions() -> dict:
    from . import __version__
    return {"qha": __version__, "numpy": np.__version__, "scipy": scipy.__version__,
            "python": platform.python_version()}


def run_suite(config: SuiteConfig, pmap=None) -> NormReport:
    """Run the selected suites in declared order; a crashing suite adds a failing entry."""
    report = NormReport(metadata={"config": config.echo(), "versions": _versions(), "timing": {}})
    order = [s for s in SUITES if s in config.suites]
    with worker_pool(config.workers) as default_map:
        mapper = pmap or default_map
        for name in order:
            start = time.perf_counter()
            try:
                sub = SUITE_FUNCS[name](config, mapper)
            except Exception as exc:  # partial report, nonzero exit
                report.add(f"{name}.crashed", None, 0.0, "plumbing")
                report.metadata.setdefault("errors", {})[name] = "".join(
                    traceback.format_exception_only(type(exc), exc)).strip()
                report.metadata["timing"][name] = time.perf_counter() - start
                break
            named = NormReport().extend(sub, prefix=f"{name}.")
            report.extend(named.with_tolerances(config.tolerances))
            report.metadata["timing"][name] = time.perf_counter() - start
    return report


def _int_list(text: str) -> tuple:
    try:
        return tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _tolerance(text: str):
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected NAME=VALUE, got {text!r}")
    try:
        return name.strip(), float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"tolerance must be a number, got {value!r}")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="qha", description="Quantum harmonic analysis verification harness")
    sub = p.add_subparsers(dest="command", required=True)

    def output_args(sp):
        sp.add_argument("--out", type=Path, default=None,
                        help="output directory (falls back to $QHA_OUT, else stdout)")
        sp.add_argument("--format", choices=("json", "csv"), default="json")

    run = sub.add_parser("run", help="run verification suites")
    run.add_argument("--suite", action="append", default=None,
                     help=f"suite to run, repeatable or comma-separated ({', '.join(SUITES)})")
    run.add_argument("--d", type=int, default=1)
    run.add_argument("--n", type=int, default=64)
    run.add_argument("--L", type=float, default=16.0)
    run.add_argument("--N", type=_int_list, default=(3, 5, 7), help="odd moduli, e.g. 3,5,7")
    run.add_argument("--workers", type=int, default=1)
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--tol", type=_tolerance, action="append", default=[],
                     help="override a tolerance: SUITE.ENTRY=VALUE")
    output_args(run)

    fin = sub.add_parser("verify-finite", help="exhaustive finite-group verification")
    fin.add_argument("--N", type=_int_list, default=(3, 5, 7))
    fin.add_argument("--seed", type=int, default=0)
    output_args(fin)
    return p


def _output(report: NormReport, out: Path | None, fmt: str) -> None:
    out = out or (Path(os.environ["QHA_OUT"]) if os.environ.get("QHA_OUT") else None)
    if out is None:
        sys.stdout.write(report.to_json() + "\n" if fmt == "json" else report.to_csv())
        return
    path = emit_report(report, out / f"{REPORT_STEM}.{fmt}", fmt)
    print(f"report written to {path}", file=sys.stderr)


def _summary(report: NormReport) -> None:
    for e in report.entries:
        print(f"{'PASS' if e.passed else 'FAIL'} {e.name} = {e.value}", file=sys.stderr)
    print(f"{len(report.entries) - len(report.failures())}/{len(report.entries)} checks passed",
          file=sys.stderr)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            names = tuple(s.strip() for item in (args.suite or [",".join(SUITES)])
                          for s in item.split(",") if s.strip())
            config = SuiteConfig(d=args.d, n=args.n, L=args.L, N=args.N, seed=args.seed,
                                 workers=args.workers, suites=names,
                                 tolerances={k: v for k, v in args.tol})
            report = run_suite(config)
        else:
            report = NormReport(metadata={"config": {"N": list(args.N), "seed": args.seed},
                                          "versions": _versions()})
            for N in args.N:
                report.extend(exhaustive_verify(N, seed=args.seed), prefix=f"N{N}.")
    except ValueError as exc:
        parser.error(str(exc))
    _summary(report)
    try:
        _output(report, args.out, args.format)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())

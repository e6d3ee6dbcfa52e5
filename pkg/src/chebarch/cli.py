"""Command-line experiment runner.

Subcommands: ``nodes``, ``compare``, ``systolic``, ``power`` and ``repro``.
Exit codes are 0 on success, 1 when a check fails, 2 for invalid input.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict
from pathlib import Path

from . import acceptance, adc, bench, core, systolic
from .config import ConfigError, ExperimentConfig, build_config, read_config_file, resolve_output
from .signals import signal_name

EXIT_OK, EXIT_FAIL, EXIT_INVALID = 0, 1, 2

# Equispaced point counts and error targets reported for the two named signals;
# used as the power baseline unless one is given or measured.
REFERENCE_BASELINES = {"harmonic": (10, 1.1), "damped": (11, 4.1)}


def _emit(text: str, path: Path | None):
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def _dumps(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _merge(args: argparse.Namespace, keys) -> ExperimentConfig:
    raw = read_config_file(args.config) if getattr(args, "config", None) else {}
    for key in keys:
        value = getattr(args, key, None)
        if value is not None:
            raw[key] = value
    return build_config(raw)


# nodes ---------------------------------------------------------------------

def cmd_nodes(args) -> int:
    if args.degree < 0:
        raise ConfigError("degree", f"must be >= 0, got {args.degree}")
    lo, hi = args.interval
    if lo >= hi:
        raise ConfigError("interval", f"lo must be < hi, got [{lo}, {hi}]")
    window = core.cheb_nodes(args.degree, core.Interval(lo, hi))
    _emit(_dumps(window.to_dict()), resolve_output(args.output))
    return EXIT_OK


# compare -------------------------------------------------------------------

def _measure(job):
    signal, scheme, n, interval, grid = job
    return bench.measure_error(signal, scheme, n, interval, grid)


def _map(fn, jobs, workers):
    if workers <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs))


def compare_rows(cfg: ExperimentConfig) -> list[bench.ErrorReport]:
    jobs = [
        (cfg.signal, scheme, n, cfg.interval, cfg.grid_density)
        for n in range(cfg.n_min, cfg.n_max + 1)
        for scheme in cfg.schemes
    ]
    return _map(_measure, jobs, cfg.jobs)


def compare_csv(name: str, reports) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["signal", "scheme", "n_points", "max_abs_error", "relative_error_percent"])
    for r in reports:
        w.writerow([name, r.scheme, r.n_points, repr(r.max_abs_error), repr(r.relative_error_percent)])
    return buf.getvalue()


def series_csv(reports, scheme: str) -> str:
    """Plot-ready two-column series: point count against percent error."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n_points", f"{scheme}_error_percent"])
    for r in reports:
        if r.scheme == scheme:
            w.writerow([r.n_points, repr(r.relative_error_percent)])
    return buf.getvalue()


def cmd_compare(args) -> int:
    cfg = _merge(args, ["signal", "interval", "n", "n_min", "n_max", "schemes", "target", "grid",
                        "format", "output", "jobs"])
    name = signal_name(cfg.signal)
    reports = compare_rows(cfg)
    summary = {"signal": name, "n_points": cfg.n_points}
    if set(bench.SCHEMES) <= set(cfg.schemes):
        summary["error_ratio"] = bench.error_ratio(cfg.signal, cfg.n_points, cfg.interval, cfg.grid_density)
    if cfg.error_target_percent is not None:
        reached = {}
        for scheme in cfg.schemes:
            found = bench.min_points_for_error(cfg.signal, scheme, cfg.error_target_percent,
                                               cfg.interval, cfg.n_max, cfg.grid_density)
            reached[scheme] = found.n_points if found.reached else "not reached"
        summary["target_percent"] = cfg.error_target_percent
        summary["min_points"] = reached

    if cfg.output_format == "json":
        body = _dumps({"summary": summary,
                       "reports": [dict(signal=name, **asdict(r)) for r in reports]})
    else:
        body = compare_csv(name, reports)
    _emit(body, cfg.output)
    if cfg.output is not None and cfg.output_format != "json":
        for scheme in cfg.schemes:
            series = cfg.output.with_name(f"{cfg.output.stem}_{scheme}.csv")
            series.write_text(series_csv(reports, scheme))
    print(json.dumps(summary), file=sys.stderr)
    return EXIT_OK


# systolic ------------------------------------------------------------------

def cmd_systolic(args) -> int:
    cfg = _merge(args, ["signal", "interval", "window", "windows", "arch", "output"])
    if cfg.arch != "proposed":
        metrics = systolic.analytic_metrics(cfg.arch, cfg.window_size)
        _emit(_dumps(metrics.to_dict()), cfg.output)
        return EXIT_OK
    trace, metrics = systolic.run_proposed(cfg.signal, cfg.window_size, cfg.n_windows, cfg.interval)
    if args.trace_out:
        _emit(trace.to_csv(), resolve_output(args.trace_out))
    out = metrics.to_dict()
    out["outputs"] = [
        {"window": e.window, "query_x": e.query_x, "value": e.value, "cycle": e.cycle}
        for e in trace.output_events
    ]
    _emit(_dumps(out), cfg.output)
    return EXIT_OK


# power ---------------------------------------------------------------------

def power_baseline(cfg: ExperimentConfig, measured: bool) -> tuple[int, str]:
    if cfg.baseline_points is not None:
        return cfg.baseline_points, "given"
    name = signal_name(cfg.signal)
    ref = REFERENCE_BASELINES.get(name)
    target = cfg.error_target_percent if cfg.error_target_percent is not None else (ref[1] if ref else None)
    if measured or ref is None:
        if target is None:
            raise ConfigError("error_target_percent", "needed to measure a baseline for a custom signal")
        found = bench.min_points_for_error(cfg.signal, "equispaced", target, cfg.interval,
                                           max(cfg.n_max, 40), cfg.grid_density)
        if not found.reached:
            raise ConfigError("error_target_percent", f"equispaced error never below {target}%")
        return found.n_points, "measured"
    return ref[0], "reference"


def cmd_power(args) -> int:
    cfg = _merge(args, ["signal", "interval", "bits", "t_sar", "policy", "target", "baseline_points",
                        "window", "format", "output", "n_max", "grid"])
    if cfg.window_size < 2:
        raise ConfigError("window_size", "the hybrid split needs at least two samples")
    split = adc.split_samples(adc.build_timeline(cfg.window_size - 1), cfg.t_sar, cfg.policy)
    baseline, source = power_baseline(cfg, args.measured_baseline)
    report = adc.power_report(split, cfg.bits, baseline)
    out = adc.report_json(split, report)
    out["baseline_source"] = source
    out["signal"] = signal_name(cfg.signal)
    if math.isinf(out["t_sar"]):
        out["t_sar"] = "inf"
    if cfg.output_format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        keys = [k for k in out if k != "assignments"]
        w.writerow(keys)
        w.writerow([out[k] for k in keys])
        _emit(buf.getvalue(), cfg.output)
    else:
        _emit(_dumps(out), cfg.output)
    return EXIT_OK


# repro ---------------------------------------------------------------------

def _parse_tol(items) -> dict:
    tol = {}
    for item in items or []:
        key, sep, value = item.partition("=")
        if not sep or key not in acceptance.TOLERANCES:
            raise ConfigError("tol", f"expected NAME=VALUE with NAME in {sorted(acceptance.TOLERANCES)}, got {item!r}")
        try:
            tol[key] = float(value)
        except ValueError:
            raise ConfigError("tol", f"not a number: {value!r}") from None
    return tol


def cmd_repro(args) -> int:
    results = acceptance.run_all(_parse_tol(args.tol))
    ok = all(r.passed for r in results)
    if args.json:
        _emit(_dumps({"passed": ok, "criteria": [r.to_dict() for r in results]}), None)
    else:
        lines = []
        for r in results:
            lines.append(r.line())
            if not r.passed or args.verbose:
                lines.extend("    " + d for d in r.details)
        lines.append(f"{sum(r.passed for r in results)}/{len(results)} criteria passed")
        _emit("\n".join(lines) + "\n", None)
    return EXIT_OK if ok else EXIT_FAIL


# parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="chebarch", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, signal=True):
        p.add_argument("--config", help="flat key = value file; flags override it")
        p.add_argument("--output", "-o", help="output file (default: stdout)")
        if signal:
            p.add_argument("--signal", help="harmonic, damped, const:V, poly:c0,c1,..., "
                                            "damped:a,w or harmonic:a1,w1,...")
            p.add_argument("--interval", nargs=2, type=float, metavar=("LO", "HI"))

    p = sub.add_parser("nodes", help="Chebyshev nodes of one window as JSON")
    p.add_argument("--degree", type=int, required=True)
    p.add_argument("--interval", nargs=2, type=float, default=(-1.0, 1.0), metavar=("LO", "HI"))
    p.add_argument("--output", "-o")
    p.set_defaults(func=cmd_nodes)

    p = sub.add_parser("compare", help="Chebyshev vs equispaced error sweep")
    common(p)
    p.add_argument("--n", type=int, help="point count for the reported error ratio (default 8)")
    p.add_argument("--n-min", dest="n_min", type=int)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--schemes", help="comma separated subset of chebyshev,equispaced")
    p.add_argument("--target", type=float, help="also report the points needed to get below this percent")
    p.add_argument("--grid", type=int, help="evaluation grid size (default 2001)")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("systolic", help="simulate the word-serial datapath or report a reference array")
    common(p)
    p.add_argument("--window", type=int, help="samples per window (default 8)")
    p.add_argument("--windows", type=int, help="back-to-back windows to stream (default 4)")
    p.add_argument("--arch", choices=systolic.ARCHITECTURES)
    p.add_argument("--trace-out", help="write the per-cycle trace CSV here")
    p.set_defaults(func=cmd_systolic)

    p = sub.add_parser("power", help="flash/SAR split and comparator power")
    common(p)
    p.add_argument("--bits", type=int)
    p.add_argument("--t-sar", dest="t_sar", type=float, help="SAR conversion time in flash periods (inf allowed)")
    p.add_argument("--policy", choices=adc.POLICIES)
    p.add_argument("--window", type=int, help="samples per window (default 8)")
    p.add_argument("--baseline-points", dest="baseline_points", type=int)
    p.add_argument("--measured-baseline", action="store_true",
                   help="derive the equispaced baseline from the error target instead of the reference count")
    p.add_argument("--target", type=float)
    p.add_argument("--n-max", dest="n_max", type=int)
    p.add_argument("--grid", type=int)
    p.add_argument("--format", choices=("csv", "json"))
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("repro", help="run every reproduction check and print a pass/fail table")
    p.add_argument("--json", action="store_true")
    p.add_argument("--verbose", "-v", action="store_true")
    p.add_argument("--tol", action="append", metavar="NAME=VALUE", help="override a tolerance")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INVALID if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

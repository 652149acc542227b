"""Command-line interface: simulate, analyze, compare, sweep."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import calibrate, metrics
from .calibrate import FEATURE_NAMES, curve_distance, thumb_rule_features
from .metrics import MetricError
from .scenario import ScenarioError, cambridge_default, load_scenario
from .simulate import simulate
from .traceio import ContactLog, TraceError, parse_contact_trace, write_contact_trace


class CliError(Exception):
    pass


def _load_config(path):
    if path is None:
        return cambridge_default()
    return load_scenario(Path(path).read_text())


def _read_trace(path, t0: float = 0.0) -> ContactLog:
    log = parse_contact_trace(Path(path).read_text())
    if t0:
        log = log.shifted(t0)
    if len(log) == 0:
        raise MetricError(f"{path}: no contacts in trace")
    return log


def _write(path: Path, text: str) -> None:
    try:
        path.write_text(text)
    except OSError as exc:
        raise CliError(f"cannot write {path}: {exc.strerror}") from None


def _csv(path: Path, header: str, rows) -> None:
    lines = [header] + [",".join(repr(float(v)) if not isinstance(v, (int, np.integer)) else str(int(v))
                                 for v in row) for row in rows]
    _write(path, "\n".join(lines) + "\n")


def cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    run = simulate(cfg, seed=args.seed)
    log = run.ground_truth if args.ground_truth else run.observed
    text = write_contact_trace(log)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    if args.movement:
        _write(Path(args.movement), run.timeline.to_csv())
    print(f"nodes={log.num_nodes} records={len(log)} span={log.span[0]:.3f},{log.span[1]:.3f}",
          file=sys.stderr if not args.out else sys.stdout)
    return 0


def cmd_analyze(args) -> int:
    log = _read_trace(args.trace, args.t0)
    paths = metrics.write_metric_csvs(log, args.outdir, args.hour_offset)
    print(f"nodes={log.num_nodes} records={len(log)} wrote {len(paths)} files to {args.outdir}")
    return 0


def _ccdf_join(samples_a, samples_b):
    xs = np.union1d(samples_a, samples_b)
    return zip(xs, metrics.ccdf_at(samples_a, xs), metrics.ccdf_at(samples_b, xs))


def cmd_compare(args) -> int:
    log_a, log_b = _read_trace(args.trace_a), _read_trace(args.trace_b)
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    curve_a, curve_b = metrics.pair_curve(log_a), metrics.pair_curve(log_b)
    q = np.arange(calibrate.RESAMPLE_POINTS) / (calibrate.RESAMPLE_POINTS - 1)
    _csv(out / "pair_curve.csv", "quantile,value_a,value_b",
         zip(q, calibrate.resample(curve_a), calibrate.resample(curve_b)))
    _csv(out / "contact_duration_ccdf.csv", "seconds,value_a,value_b",
         _ccdf_join(log_a.durations, log_b.durations))
    gaps = []
    for log in (log_a, log_b):
        try:
            gaps.append(metrics.intercontact_times(log))
        except MetricError:
            gaps.append(None)
    rows = _ccdf_join(*gaps) if all(g is not None for g in gaps) else []
    _csv(out / "intercontact_ccdf.csv", "seconds,value_a,value_b", rows)
    hist_a, hist_b = metrics.contacts_per_hour_per_node(log_a), metrics.contacts_per_hour_per_node(log_b)
    keys = sorted(set(hist_a) | set(hist_b))
    _csv(out / "contacts_per_hour_per_node.csv", "contacts,value_a,value_b",
         [(k, hist_a.get(k, 0), hist_b.get(k, 0)) for k in keys])
    _csv(out / "hour_of_day.csv", "hour,value_a,value_b",
         [(h, int(x), int(y)) for h, (x, y) in enumerate(zip(metrics.contacts_by_hour_of_day(log_a),
                                                               metrics.contacts_by_hour_of_day(log_b)))])
    fa, fb = thumb_rule_features(curve_a), thumb_rule_features(curve_b)
    summary = [("curve_distance", 0.0, 0.0, curve_distance(curve_a, curve_b))]
    for name, va, vb in zip(FEATURE_NAMES, fa.as_tuple(), fb.as_tuple()):
        delta = abs(va - vb) if va != vb else 0.0
        summary.append((name, va, vb, delta))
    lines = ["metric,value_a,value_b,abs_delta"] + [f"{m},{va!r},{vb!r},{d!r}" for m, va, vb, d in summary]
    _write(out / "summary.csv", "\n".join(lines) + "\n")
    print(f"curve_distance={summary[0][3]!r}")
    return 0


def _parse_alphas(text: str) -> list[float]:
    try:
        return [float(a) for a in text.split(",") if a.strip()]
    except ValueError:
        raise CliError(f"cannot parse --alphas {text!r}") from None


def cmd_sweep(args) -> int:
    cfg = _load_config(args.config)
    target = metrics.pair_curve(_read_trace(args.target))
    alphas = _parse_alphas(args.alphas) if args.alphas else calibrate.DEFAULT_ALPHAS
    result = calibrate.alpha_sweep(cfg, target, alphas, args.reps)
    calibrate.write_sweep_report(result, args.outdir)
    print(f"recommended_alpha={result.recommended_alpha:g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="swimtrace", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="run SWIM and write a contact trace")
    s.add_argument("--config", help="key=value scenario file (default: Cambridge scenario)")
    s.add_argument("--seed", type=int, help="override the config's rng_seed")
    s.add_argument("--out", help="trace file (default: stdout)")
    s.add_argument("--ground-truth", action="store_true", help="skip beacon sampling")
    s.add_argument("--movement", help="also dump presence intervals as CSV")
    s.set_defaults(func=cmd_simulate)

    a = sub.add_parser("analyze", help="write the metric CSVs for one trace")
    a.add_argument("--trace", required=True)
    a.add_argument("--t0", type=float, default=0.0, help="epoch subtracted from every timestamp")
    a.add_argument("--hour-offset", type=float, default=0.0, help="wall-clock hour at t=0")
    a.add_argument("--outdir", default=".")
    a.set_defaults(func=cmd_analyze)

    c = sub.add_parser("compare", help="side-by-side metric CSVs for two traces")
    c.add_argument("--trace-a", required=True)
    c.add_argument("--trace-b", required=True)
    c.add_argument("--outdir", required=True)
    c.set_defaults(func=cmd_compare)

    w = sub.add_parser("sweep", help="recommend alpha for a target trace")
    w.add_argument("--config")
    w.add_argument("--target", required=True)
    w.add_argument("--alphas", help="comma-separated list (default 0,0.1,...,1)")
    w.add_argument("--reps", type=int, default=10)
    w.add_argument("--outdir", default=".")
    w.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ScenarioError, TraceError, MetricError, CliError, ValueError) as exc:
        print(f"swimtrace {args.command}: error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"swimtrace {args.command}: error: {exc.filename or ''}: {exc.strerror}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

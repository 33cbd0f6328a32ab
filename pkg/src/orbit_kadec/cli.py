"""Command-line front end: ``orbit-kadec {bounds,verify,sweep}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys

import numpy as np

from . import __version__, bounds, frames, verify
from .errors import DomainError

_PI_RE = re.compile(r"^\s*(?:(?P<mul>[-+]?[\d.eE+-]+)\s*\*?\s*)?pi\s*(?:/\s*(?P<div>[\d.eE+-]+))?\s*$")


def real(text: str) -> float:
    """Float parser that also accepts ``pi``, ``2pi``, ``2*pi`` and ``pi/2``."""
    m = _PI_RE.match(text.lower())
    if m:
        mul = float(m.group("mul")) if m.group("mul") else 1.0
        div = float(m.group("div")) if m.group("div") else 1.0
        return mul * math.pi / div
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")


def real_list(text: str) -> list[float]:
    return [real(tok) for tok in text.split(",") if tok.strip()]


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else str(v)


def _jsonable(v):
    if isinstance(v, float) and not math.isfinite(v):
        return None
    if isinstance(v, (np.floating,)):
        return _jsonable(float(v))
    if isinstance(v, (np.integer,)):
        return int(v)
    if isinstance(v, (np.bool_,)):
        return bool(v)
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return v


def render_csv(config: dict, columns: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    for k, v in config.items():
        buf.write(f"# {k}={fmt(v)}\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([fmt(v) for v in r])
    return buf.getvalue()


def render_json(config: dict, results, violations: int, worst_margins: dict, seed) -> str:
    doc = {
        "config": config,
        "results": results,
        "violations": violations,
        "worst_margins": worst_margins,
        "version": __version__,
        "seed": seed,
    }
    return json.dumps(_jsonable(doc), indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _config(args, keys) -> dict:
    cfg = {"subcommand": args.command}
    cfg.update({k: getattr(args, k) for k in keys})
    return cfg


def cmd_bounds(args) -> int:
    fb = bounds.FrameBounds(args.A, args.B)
    spec = bounds.SpectrumInterval(args.gamma)
    cfg = _config(args, ["A", "B", "gamma", "delta", "kappa", "format"])
    rows = [["delta_max", None, bounds.kadec_delta_max(fb, spec).delta],
            ["baskakov_meaningful_limit", None, bounds.baskakov_meaningful_limit(spec)]]
    if args.delta is not None:
        pb = bounds.perturbed_frame_bounds(fb, spec, args.delta)
        rows += [["perturbed_lower", None, pb.lower], ["perturbed_upper", None, pb.upper]]
    if args.kappa is not None:
        rows.append(["separation_satisfied", None, bounds.separation_satisfied(args.kappa, fb, spec)])
    for t in np.linspace(0.0, math.pi / (2 * spec.gamma), 11):
        rows.append(["isometry_deviation_bound", t, bounds.isometry_deviation_bound(spec, t)])
        rows.append(["baskakov_bound", t, bounds.baskakov_bound(spec, t)])
    if args.format == "csv":
        emit(render_csv(cfg, ["quantity", "t", "value"], rows), args.out)
    else:
        results = [{"quantity": q, "t": t, "value": v} for q, t, v in rows]
        emit(render_json(cfg, results, 0, {}, None), args.out)
    return 0


def cmd_verify(args) -> int:
    names = list(verify.SUITES) if args.suite in (None, "all") else [args.suite]
    cfg = verify.SuiteConfig(seed=args.seed, M=args.M, N=args.N, trials=args.trials,
                             d=args.d, delta=args.delta, p=args.p)
    checks = verify.run_suites(names, cfg)
    config = _config(args, ["suite", "seed", "M", "N", "trials", "d", "delta", "p", "format"])
    failed = [c for c in checks if not c.passed]
    if args.format == "csv":
        cols = ["suite", "check", "passed", "value", "limit", "margin", "detail"]
        rows = [[c.suite, c.name, c.passed, c.value, c.limit, c.margin, c.detail] for c in checks]
        emit(render_csv(config, cols, rows), args.out)
    else:
        results = [{"suite": c.suite, "check": c.name, "passed": c.passed, "value": c.value,
                    "limit": c.limit, "margin": c.margin, "detail": c.detail} for c in checks]
        margins = {f"{c.suite}/{c.name}": c.margin for c in checks}
        emit(render_json(config, results, len(failed), margins, args.seed), args.out)
    for c in failed:
        print(f"FAILED {c.suite}/{c.name}: value={fmt(c.value)} limit={fmt(c.limit)}", file=sys.stderr)
    return 1 if failed else 0


SWEEP_COLUMNS = ["seed", "delta", "trial", "delta_hat", "min_eig", "max_eig",
                 "pred_lower", "pred_upper", "violation"]


def cmd_sweep(args) -> int:
    grid = args.delta if args.delta is not None else [0.0, 0.05, 0.1, 0.15, 0.2]
    if not grid:
        raise DomainError("empty delta grid")
    fb = bounds.FrameBounds(args.A, args.B)
    spec = bounds.SpectrumInterval(args.gamma)
    dmax = bounds.kadec_delta_max(fb, spec).delta
    if not args.force:
        for dl in grid:
            if not 0 <= dl < dmax:
                raise DomainError(f"delta={dl} outside [0, {dmax}); pass --force to run anyway")
    workers = int(os.environ.get("ORBIT_KADEC_THREADS", "0") or 0)
    base = frames.integer_samples(args.N)
    reports = [frames.perturbation_experiment(base, dl, args.trials, args.seed, fb, spec,
                                              force=args.force, workers=workers) for dl in grid]
    config = _config(args, ["A", "B", "gamma", "N", "trials", "seed", "force", "format"])
    config["delta"] = list(grid)
    if args.format == "csv":
        rows = [[args.seed, r.delta, t.trial, t.delta_hat, t.min_eig, t.max_eig,
                 t.pred_lower, t.pred_upper, t.violation] for r in reports for t in r.rows]
        emit(render_csv(config, SWEEP_COLUMNS, rows), args.out)
    else:
        results, margins = [], {}
        for r in reports:
            lo, hi = r.margins()
            results.append({"delta": r.delta, "trials": len(r.rows), "min_eig": r.min_eig,
                            "max_eig": r.max_eig, "excursions": r.excursions, "forced": r.forced})
            margins[fmt(r.delta)] = {"lower": lo, "upper": hi}
        total = sum(r.excursions for r in reports)
        emit(render_json(config, results, total, margins, args.seed), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orbit-kadec", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def output(p):
        p.add_argument("--format", choices=["csv", "json"], default="csv")
        p.add_argument("--out", default=None, help="output file (default: stdout)")

    p = sub.add_parser("bounds", help="evaluate thresholds and perturbed bounds")
    p.add_argument("--A", type=real, required=True)
    p.add_argument("--B", type=real, required=True)
    p.add_argument("--gamma", type=real, required=True)
    p.add_argument("--delta", type=real)
    p.add_argument("--kappa", type=real)
    output(p)
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("--suite", choices=["all", *verify.SUITES], default="all")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--M", type=int, default=verify.SuiteConfig.M)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--d", type=int, default=8)
    p.add_argument("--delta", type=real, default=0.2)
    p.add_argument("--p", type=int, choices=[1, 2], default=None)
    output(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="Monte-Carlo perturbation sweep over a delta grid")
    p.add_argument("--delta", type=real_list, default=None, help="comma-separated grid")
    p.add_argument("--A", type=real, default=2 * math.pi)
    p.add_argument("--B", type=real, default=2 * math.pi)
    p.add_argument("--gamma", type=real, default=math.pi)
    p.add_argument("--N", type=int, default=64)
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--force", action="store_true")
    output(p)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

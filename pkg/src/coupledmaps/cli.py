"""Command-line entry point: render, sweep, cycle, stability, serve.

The CLI is a thin client of the same run pipeline the HTTP service uses;
`serve` starts that service.  Every invocation logs the fully resolved
parameter set (defaults included) to stderr as one `run-config:` line, so
any artifact can be reproduced from its log.  Structured reports (cycle,
stability) go to stdout as JSON.  Exit status is 0 exactly when the
requested artifact was fully produced.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import io_export, sweep as sweep_mod
from .io_export import RunConfig, canonical_json, merge_run_config, read_config
from .maps import ConfigError
from .orbit import DEFAULT_EPSILON, DEFAULT_MAX_PERIOD
from .raster import (
    DEFAULT_DILATION,
    DEFAULT_EXPLORER_SIZE,
    DEFAULT_THRESHOLD,
    stability_check,
)
from .runs import execute_run
from .sweep import DEFAULT_GALLERY_GRID, ParameterCurve, ParamVector, SweepSpec

_RUN_FLAGS = [
    # (flag, dest, type, help)
    ("--scheme", "scheme", str, "coupling scheme: simultaneous or sequential"),
    ("--fx", "fx", str, "family driving x: logistic or tent"),
    ("--gy", "gy", str, "family driving y: logistic or tent"),
    ("--b", "b", float, "base of coupler c"),
    ("--r", "r", float, "rate of coupler c"),
    ("--bp", "bp", float, "base of coupler d"),
    ("--rp", "rp", float, "rate of coupler d"),
    ("--burn", "burn", int, "burn-in steps N before plotting"),
    ("--plot", "plot", int, "orbit points M to accumulate"),
    ("--seed", "seed", int, "seed for the random initial point"),
    ("--x0", "x0", float, "explicit initial x (use with --y0 instead of --seed)"),
    ("--y0", "y0", float, "explicit initial y (use with --x0 instead of --seed)"),
    ("--width", "width", int, "raster width in pixels"),
    ("--height", "height", int, "raster height in pixels"),
    ("--eps", "eps", float, "cycle detection tolerance (max-norm)"),
    ("--max-period", "max_period", int, "largest period searched for"),
]


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, metavar="PATH",
                        help="JSON config file; flags override its values")
    for flag, dest, typ, help_text in _RUN_FLAGS:
        parser.add_argument(flag, dest=dest, type=typ, default=None, help=help_text)


def _resolve_doc(args: argparse.Namespace, base: RunConfig | None = None) -> RunConfig:
    if args.config:
        base = read_config(args.config)
    elif base is None:
        base = RunConfig()
    overrides = {
        dest: getattr(args, dest)
        for _, dest, _, _ in _RUN_FLAGS
        if getattr(args, dest) is not None
    }
    return merge_run_config(base, overrides).validated()


def _log(message: str) -> None:
    print(message, file=sys.stderr)


def _log_resolved(doc: RunConfig) -> None:
    _log("run-config: " + json.dumps(doc.to_mapping(), sort_keys=True))


def _progress_printer(label: str):
    last = [0]

    def report(done: int, total: int) -> None:
        pct = 100 * done // total if total else 100
        if pct // 10 > last[0] // 10 or done == total:
            _log(f"{label}: {pct}% ({done}/{total})")
            last[0] = pct

    return report


def cmd_render(args: argparse.Namespace) -> int:
    doc = _resolve_doc(args)
    _log_resolved(doc)
    result = execute_run(doc, progress=_progress_printer("burn-in") if doc.burn >= 10 else None)
    out = Path(args.out)
    io_export.write_pgm(result.image, out)
    if args.png:
        io_export.write_png(result.image, out.with_suffix(".png"))
    record_path = out.with_suffix(".run.json")
    io_export.write_config(doc, record_path)
    _log(f"wrote {out} and {record_path}")
    if result.cycle is not None:
        _log(f"cycle: period {result.cycle.period} at tolerance {result.cycle.epsilon}")
    return 0


def cmd_cycle(args: argparse.Namespace) -> int:
    doc = _resolve_doc(args)
    _log_resolved(doc)
    result = execute_run(doc)
    report = {
        "found": result.cycle is not None,
        "params": doc.to_mapping(),
    }
    if result.cycle is not None:
        report["cycle"] = {
            "period": result.cycle.period,
            "epsilon": result.cycle.epsilon,
            "confirmed_loops": result.cycle.confirmed_loops,
            "points": [[p.x, p.y] for p in result.cycle.points],
        }
    print(canonical_json(report), end="")
    return 0


def cmd_stability(args: argparse.Namespace) -> int:
    doc = _resolve_doc(args)
    _log_resolved(doc)
    base_seed = doc.seed if doc.seed is not None else 0
    seeds = [base_seed + t for t in range(args.trials)]
    report = stability_check(
        doc.to_system_config(),
        doc.burn,
        doc.plot,
        doc.width,
        doc.height,
        args.trials,
        seeds,
        args.dilation,
        args.threshold,
        jobs=args.jobs,
    )
    payload = {
        "verdict": report.verdict,
        "threshold": report.threshold,
        "dilation": report.dilation,
        "params": doc.to_mapping(),
        "runs": [
            {
                "seed": run.seed,
                "n_burn": run.n_burn,
                "m_collect": run.m_collect,
                "initial": [run.initial.x, run.initial.y],
                "population": run.population,
            }
            for run in report.runs
        ],
        "pairs": [
            {
                "first": pair.first,
                "second": pair.second,
                "jaccard": pair.report.jaccard,
                "dilated_jaccard": pair.report.dilated_jaccard,
                "pixel_hausdorff": pair.report.pixel_hausdorff,
            }
            for pair in report.pairs
        ],
    }
    print(canonical_json(payload), end="")
    return 0


def cmd_sweep(args: argparse.Namespace) -> int:
    # sweep frames default to the explorer resolution, not the still size
    doc = _resolve_doc(
        args, base=RunConfig(width=DEFAULT_EXPLORER_SIZE, height=DEFAULT_EXPLORER_SIZE)
    )
    if args.p0 is not None or args.p1 is not None:
        if args.p0 is None or args.p1 is None:
            _log("sweep: --p0 and --p1 must be given together")
            return 2
        curve = ParameterCurve.segment(ParamVector(*args.p0), ParamVector(*args.p1))
    else:
        curve = ParameterCurve.canonical(doc.bp, doc.rp)
    spec = SweepSpec(
        curve=curve,
        grid_count=args.grid,
        scheme=doc.scheme,
        fx=doc.fx,
        gy=doc.gy,
        n_burn=doc.burn,
        m_collect=doc.plot,
        seed=doc.seed if doc.seed is not None else 0,
        width=doc.width,
        height=doc.height,
        eps=doc.eps,
        max_period=doc.max_period,
        confirmations=doc.confirmations,
        png=args.png,
    )
    _log("sweep-spec: " + json.dumps(spec.to_jsonable(), sort_keys=True))
    try:
        manifest = sweep_mod.run_sweep(spec, args.out, jobs=args.jobs)
    except OSError as exc:
        _log(f"sweep failed: {exc}")
        return 1
    failures = [fr for fr in manifest.frames if fr.error is not None]
    for fr in failures:
        _log(f"frame {fr.index} failed: {fr.error}")
    _log(f"wrote {len(manifest.frames) - len(failures)}/{len(manifest.frames)} frames to {args.out}")
    return 1 if failures else 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(frames_dir=args.frames_dir)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except OSError as exc:
        _log(f"serve: cannot bind {args.host}:{args.port}: {exc}")
        return 1
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coupledmaps",
        description="Limit sets of coupled logistic/tent maps on the unit square.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_render = sub.add_parser("render", help="render one limit-set image")
    _add_run_flags(p_render)
    p_render.add_argument("--out", required=True, type=Path, help="output PGM path")
    p_render.add_argument("--png", action="store_true", help="also write a PNG twin")
    p_render.set_defaults(func=cmd_render)

    p_sweep = sub.add_parser("sweep", help="render frames along a parameter curve")
    _add_run_flags(p_sweep)
    p_sweep.add_argument("--out", required=True, type=Path, help="output directory")
    p_sweep.add_argument("--grid", type=int, default=DEFAULT_GALLERY_GRID,
                         help="number of samples along the curve")
    p_sweep.add_argument("--jobs", type=int, default=1, help="parallel frame workers")
    p_sweep.add_argument("--png", action="store_true", help="also write PNG twins")
    p_sweep.add_argument("--p0", type=float, nargs=4, metavar=("B", "R", "BP", "RP"),
                         default=None, help="segment start (default: canonical curve)")
    p_sweep.add_argument("--p1", type=float, nargs=4, metavar=("B", "R", "BP", "RP"),
                         default=None, help="segment end")
    p_sweep.set_defaults(func=cmd_sweep)

    p_cycle = sub.add_parser("cycle", help="detect a periodic cycle")
    _add_run_flags(p_cycle)
    p_cycle.set_defaults(func=cmd_cycle)

    p_stab = sub.add_parser("stability", help="limit-set stability evidence check")
    _add_run_flags(p_stab)
    p_stab.add_argument("--trials", type=int, default=5, help="number of seeded trials")
    p_stab.add_argument("--threshold", type=float, default=DEFAULT_THRESHOLD,
                        help="dilated-jaccard acceptance threshold")
    p_stab.add_argument("--dilation", type=int, default=DEFAULT_DILATION,
                        help="dilation radius in pixels")
    p_stab.add_argument("--jobs", type=int, default=1, help="parallel trial workers")
    p_stab.set_defaults(func=cmd_stability)

    p_serve = sub.add_parser("serve", help="start the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8787)
    p_serve.add_argument("--frames-dir", type=Path, default=None,
                         help="directory of sweep frames to expose at /frames")
    p_serve.set_defaults(func=cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        for violation in exc.violations:
            _log(f"invalid configuration: {violation}")
        return 1
    except OSError as exc:
        _log(f"I/O error: {exc}")
        return 1


if __name__ == "__main__":
    sys.exit(main())

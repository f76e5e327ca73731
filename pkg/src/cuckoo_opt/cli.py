"""Command-line front end: JSON experiment configs in, CSV/SVG artifacts out.

Exit codes: 0 for a fully successful run, 1 when any trial failed, 2 for
usage or configuration problems.  Output files are written with fixed
formatting (17-significant-digit floats, LF line endings, seed order), so
byte-identical inputs give byte-identical artifacts regardless of --jobs.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import __version__
from .benchsuite import (
    ExperimentSpec,
    TrialRecord,
    UnknownBenchmarkError,
    list_benchmarks,
    run_experiment,
    summarize,
)
from .core import ContractError
from .cuckoo import CsParams
from .levy import LAM_MAX, LAM_MIN
from .variants import AdaptiveSchedule, VariantConfig


class ConfigError(ValueError):
    """Raised for malformed or out-of-range experiment configs."""


@dataclass(frozen=True)
class CliConfig:
    """A fully validated experiment description (the config file contents)."""

    benchmark: str
    dimension: int
    iterations: int
    seeds: tuple[int, ...]
    n: int = 25
    pa: float = 0.25
    alpha: float = 0.01
    beta: float = 1.0
    lam: float = 1.5
    capacity: int = 50
    variant: VariantConfig = field(default_factory=VariantConfig)


_TOP_KEYS = {
    "benchmark", "dimension", "iterations", "seeds",
    "n", "pa", "alpha", "beta", "lambda", "capacity", "variant",
}
_VARIANT_KEYS = {"kind", "chaotic_map", "chaotic_state", "schedule"}
_SCHEDULE_KEYS = {"pa_max", "pa_min", "alpha_max", "alpha_min"}


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_num(v) -> bool:
    return (isinstance(v, (int, float)) and not isinstance(v, bool)) and math.isfinite(v)


def parse_config(text: str) -> CliConfig:
    """Parse and validate a JSON experiment config.

    Unknown fields are rejected (typos should fail loudly, not silently
    fall back to defaults) and every error message names the offending
    field and its constraint.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as err:
        raise ConfigError(
            f"invalid JSON at line {err.lineno} column {err.colno}: {err.msg}"
        ) from None
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    for key in sorted(set(data) - _TOP_KEYS):
        raise ConfigError(f"unknown config field {key!r}")
    for key in ("benchmark", "dimension", "iterations", "seeds"):
        if key not in data:
            raise ConfigError(f"missing required config field {key!r}")

    benchmark = data["benchmark"]
    if not isinstance(benchmark, str) or not benchmark:
        raise ConfigError("benchmark must be a non-empty string")
    dimension = data["dimension"]
    if not _is_int(dimension) or dimension < 1:
        raise ConfigError("dimension must be an integer >= 1")
    iterations = data["iterations"]
    if not _is_int(iterations) or iterations < 0:
        raise ConfigError("iterations must be an integer >= 0")
    seeds = data["seeds"]
    if not isinstance(seeds, list) or not seeds or not all(_is_int(s) for s in seeds):
        raise ConfigError("seeds must be a non-empty list of integers")
    if any(s < 0 for s in seeds):
        raise ConfigError("seeds must be non-negative")
    if len(set(seeds)) != len(seeds):
        raise ConfigError("seeds must be distinct")

    n = data.get("n", 25)
    if not _is_int(n) or n < 2:
        raise ConfigError("n must be an integer >= 2")
    pa = data.get("pa", 0.25)
    if not _is_num(pa) or not (0.0 <= pa <= 1.0):
        raise ConfigError("pa must be a number within [0, 1]")
    alpha = data.get("alpha", 0.01)
    if not _is_num(alpha) or alpha <= 0.0:
        raise ConfigError("alpha must be a number > 0")
    beta = data.get("beta", 1.0)
    if not _is_num(beta) or beta <= 0.0:
        raise ConfigError("beta must be a number > 0")
    lam = data.get("lambda", 1.5)
    if not _is_num(lam) or not (LAM_MIN <= lam <= LAM_MAX):
        raise ConfigError(f"lambda must be a number within [{LAM_MIN}, {LAM_MAX}]")
    capacity = data.get("capacity", 50)
    if not _is_int(capacity) or capacity < 10:
        raise ConfigError("capacity must be an integer >= 10")

    variant = _parse_variant(data.get("variant"))
    return CliConfig(
        benchmark=benchmark,
        dimension=dimension,
        iterations=iterations,
        seeds=tuple(seeds),
        n=n,
        pa=float(pa),
        alpha=float(alpha),
        beta=float(beta),
        lam=float(lam),
        capacity=capacity,
        variant=variant,
    )


def _parse_variant(raw) -> VariantConfig:
    if raw is None:
        return VariantConfig()
    if not isinstance(raw, dict):
        raise ConfigError("variant must be a JSON object")
    for key in sorted(set(raw) - _VARIANT_KEYS):
        raise ConfigError(f"unknown variant field {key!r}")
    kind = raw.get("kind", "standard")
    if not isinstance(kind, str):
        raise ConfigError("variant.kind must be a string")
    schedule = None
    if "schedule" in raw:
        sched_raw = raw["schedule"]
        if not isinstance(sched_raw, dict):
            raise ConfigError("variant.schedule must be a JSON object")
        for key in sorted(set(sched_raw) - _SCHEDULE_KEYS):
            raise ConfigError(f"unknown schedule field {key!r}")
        for key, value in sched_raw.items():
            if not _is_num(value):
                raise ConfigError(f"schedule field {key!r} must be a number")
        try:
            schedule = AdaptiveSchedule(**{k: float(v) for k, v in sched_raw.items()})
        except ContractError as err:
            raise ConfigError(str(err)) from None
    state = raw.get("chaotic_state")
    if state is not None and not _is_num(state):
        raise ConfigError("variant.chaotic_state must be a number")
    chaotic_map = raw.get("chaotic_map")
    if chaotic_map is not None and not isinstance(chaotic_map, str):
        raise ConfigError("variant.chaotic_map must be a string")
    try:
        return VariantConfig(
            kind=kind,
            chaotic_map=chaotic_map,
            chaotic_state=None if state is None else float(state),
            schedule=schedule,
        )
    except ContractError as err:
        raise ConfigError(str(err)) from None


def config_to_json(cfg: CliConfig) -> str:
    """Serialize a config so that parse_config round-trips it exactly."""
    variant: dict = {"kind": cfg.variant.kind}
    if cfg.variant.kind == "chaotic":
        variant["chaotic_map"] = cfg.variant.chaotic_map
        variant["chaotic_state"] = cfg.variant.chaotic_state
    elif cfg.variant.kind == "self_adaptive":
        s = cfg.variant.schedule
        variant["schedule"] = {
            "pa_max": s.pa_max, "pa_min": s.pa_min,
            "alpha_max": s.alpha_max, "alpha_min": s.alpha_min,
        }
    data = {
        "benchmark": cfg.benchmark,
        "dimension": cfg.dimension,
        "iterations": cfg.iterations,
        "seeds": list(cfg.seeds),
        "n": cfg.n,
        "pa": cfg.pa,
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "lambda": cfg.lam,
        "capacity": cfg.capacity,
        "variant": variant,
    }
    return json.dumps(data, indent=2, sort_keys=True)


def config_to_spec(cfg: CliConfig, output_dir: str | None = None) -> ExperimentSpec:
    """Translate a parsed config into a runnable experiment."""
    params = CsParams(
        n=cfg.n,
        pa=cfg.pa,
        alpha=cfg.alpha,
        beta=cfg.beta,
        lam=cfg.lam,
        max_iterations=cfg.iterations,
        seed=cfg.seeds[0],
        variant=cfg.variant,
    )
    return ExperimentSpec(
        benchmark=cfg.benchmark,
        dimension=cfg.dimension,
        params=params,
        seeds=cfg.seeds,
        capacity=cfg.capacity,
        output_dir=output_dir,
    )


# -- artifact writers --------------------------------------------------------


def _g17(value: float) -> str:
    return format(value, ".17g")


def _write_results_csv(path: Path, records: list[TrialRecord]) -> None:
    lines = ["seed,benchmark,variant,final_best,evaluations,iterations,status"]
    for r in records:
        best = _g17(r.final_best) if r.status == "ok" else ""
        lines.append(
            f"{r.seed},{r.benchmark},{r.variant},{best},{r.evaluations},{r.iterations},{r.status}"
        )
    path.write_text("\n".join(lines) + "\n")


def _write_trace_csv(path: Path, record: TrialRecord) -> None:
    lines = ["iteration,best"]
    lines.extend(f"{t},{_g17(best)}" for t, best in record.trace)
    path.write_text("\n".join(lines) + "\n")


def _write_archive_csv(path: Path, record: TrialRecord) -> None:
    pos = record.archive_positions
    obj = record.archive_objectives
    header = [f"x{i}" for i in range(pos.shape[1])] + [f"f{i}" for i in range(obj.shape[1])]
    lines = [",".join(header)]
    for i in range(pos.shape[0]):
        row = [_g17(v) for v in pos[i]] + [_g17(v) for v in obj[i]]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n")


def _write_convergence_svg(path: Path, records: list[TrialRecord]) -> None:
    """Hand-rolled SVG: one polyline of log10(best) per seed."""
    width, height = 800, 500
    mleft, mright, mtop, mbottom = 75, 20, 35, 50
    plot_w = width - mleft - mright
    plot_h = height - mtop - mbottom
    traces = [(r.seed, r.trace) for r in records if r.status == "ok" and r.trace]

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.2f}" y="20" text-anchor="middle" font-size="14" '
        f'font-family="sans-serif">best fitness by iteration (log scale)</text>',
    ]
    if traces:
        floor = 1e-300
        t_max = max(t for _, trace in traces for t, _ in trace) or 1
        ys = [math.log10(max(best, floor)) for _, trace in traces for _, best in trace]
        y_lo, y_hi = min(ys), max(ys)
        if y_hi - y_lo < 1e-9:
            y_lo, y_hi = y_lo - 1.0, y_hi + 1.0

        def sx(t: float) -> float:
            return mleft + plot_w * t / t_max

        def sy(y: float) -> float:
            return mtop + plot_h * (y_hi - y) / (y_hi - y_lo)

        for idx, (seed, trace) in enumerate(traces):
            hue = int(360 * idx / len(traces))
            pts = " ".join(
                f"{sx(t):.2f},{sy(math.log10(max(best, floor))):.2f}" for t, best in trace
            )
            parts.append(
                f'<polyline fill="none" stroke="hsl({hue},60%,40%)" stroke-width="1.2" '
                f'points="{pts}"><title>seed {seed}</title></polyline>'
            )
        for i in range(5):
            t = round(t_max * i / 4)
            y = y_lo + (y_hi - y_lo) * i / 4
            parts.append(
                f'<text x="{sx(t):.2f}" y="{height - mbottom + 18}" text-anchor="middle" '
                f'font-size="11" font-family="sans-serif">{t}</text>'
            )
            parts.append(
                f'<text x="{mleft - 8}" y="{sy(y) + 4:.2f}" text-anchor="end" '
                f'font-size="11" font-family="sans-serif">{y:.1f}</text>'
            )
    parts.append(
        f'<line x1="{mleft}" y1="{height - mbottom}" x2="{width - mright}" '
        f'y2="{height - mbottom}" stroke="black"/>'
    )
    parts.append(
        f'<line x1="{mleft}" y1="{mtop}" x2="{mleft}" y2="{height - mbottom}" stroke="black"/>'
    )
    parts.append(
        f'<text x="{width / 2:.2f}" y="{height - 12}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif">iteration</text>'
    )
    parts.append(
        f'<text x="18" y="{height / 2:.2f}" text-anchor="middle" font-size="12" '
        f'font-family="sans-serif" transform="rotate(-90 18 {height / 2:.2f})">log10(best)</text>'
    )
    parts.append("</svg>")
    path.write_text("\n".join(parts) + "\n")


# -- entry points ------------------------------------------------------------


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cuckoo-opt",
        description="Reproducible multi-seed cuckoo-search experiments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run every seed of a JSON experiment config")
    run.add_argument("--config", required=True, help="path to the experiment config (JSON)")
    run.add_argument("--out", default="results", help="output directory (default: results)")
    run.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="worker processes (default: $CUCKOO_OPT_JOBS or 1)",
    )
    run.add_argument("--plot", action="store_true", help="also write convergence.svg")

    sub.add_parser("list-benchmarks", help="list available benchmark functions")
    sub.add_parser("version", help="print the package version")
    return parser


def _resolve_jobs(arg_jobs: int | None) -> int:
    if arg_jobs is not None:
        jobs = arg_jobs
    else:
        raw = os.environ.get("CUCKOO_OPT_JOBS", "1")
        try:
            jobs = int(raw)
        except ValueError:
            raise ConfigError(f"CUCKOO_OPT_JOBS must be an integer, got {raw!r}") from None
    if jobs < 1:
        raise ConfigError(f"jobs must be >= 1, got {jobs}")
    return jobs


def _cmd_run(args: argparse.Namespace) -> int:
    config_path = Path(args.config)
    try:
        text = config_path.read_text()
    except OSError as err:
        print(f"cannot read config file {config_path}: {err}", file=sys.stderr)
        return 2
    try:
        jobs = _resolve_jobs(args.jobs)
        cfg = parse_config(text)
        spec = config_to_spec(cfg, output_dir=args.out)
    except (ConfigError, ContractError, UnknownBenchmarkError) as err:
        print(f"config error: {err}", file=sys.stderr)
        return 2

    records = run_experiment(spec, jobs=jobs)

    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    _write_results_csv(out_dir / "results.csv", records)
    for record in records:
        if record.status == "ok" and record.trace:
            _write_trace_csv(out_dir / f"trace_{record.seed}.csv", record)
        if record.status == "ok" and record.archive_objectives is not None:
            _write_archive_csv(out_dir / f"archive_{record.seed}.csv", record)
    if args.plot:
        _write_convergence_svg(out_dir / "convergence.svg", records)

    failed = 0
    for record in records:
        if record.status == "ok":
            print(
                f"seed {record.seed}: best={_g17(record.final_best)} "
                f"evals={record.evaluations} time={record.wall_time:.2f}s"
            )
        else:
            failed += 1
            print(f"seed {record.seed}: ERROR {record.error}")
    if failed < len(records):
        stats = summarize(records)
        print(
            f"summary: ok={stats.count}/{len(records)} median={_g17(stats.median)} "
            f"mean={_g17(stats.mean)} iqr={_g17(stats.iqr)}"
        )
    print(f"artifacts written to {out_dir}")
    return 1 if failed else 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "version":
        print(__version__)
        return 0
    if args.command == "list-benchmarks":
        for name, kind in list_benchmarks():
            print(f"{name}\t{kind}")
        return 0
    return _cmd_run(args)


def cli_entry() -> None:
    sys.exit(main())

"""Command line entry point.

Subcommands ``bs``, ``mzi``, ``scaling``, ``visibility`` run a protocol and
write CSV (to stdout unless ``--output`` is given); ``selfcheck`` runs the
invariant suites.  Exit status: 0 success, 1 runtime failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import io
import os
import sys
from dataclasses import dataclass, field
from typing import Sequence, TextIO

from .core import ConfigError
from .experiments import (
    ScalingResult,
    SweepResult,
    VisibilityPoint,
    phi_grid,
    run_bs_sweep,
    run_error_scaling,
    run_mzi_sweep,
    run_visibility_study,
)

CSV_HEADER = "phi_deg,n0,n1,n2,n3,sim_intensity,theory_intensity,abs_error"


@dataclass
class RunConfig:
    subcommand: str
    alpha: float = 0.98
    p0: float = 0.5
    phi1_deg: float = 0.0
    events_per_point: int = 10_000
    seed: int = 1
    grid_step_deg: float = 10.0
    output_path: str = "-"
    trace: bool = False
    paper_literal_select: bool = False
    warmup: int = 0
    channel: int = 2
    event_counts: list[int] = field(default_factory=lambda: [1_000, 10_000, 100_000])
    repetitions: int = 5
    alphas: list[float] = field(default_factory=lambda: [0.98, 0.75, 0.5, 0.25])


def _num(v: float) -> str:
    return format(v, "#.12g")


def _config_line(config: dict) -> str:
    return "# config=" + ";".join(f"{k}={v}" for k, v in config.items()) + "\n"


def format_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for p in result.points:
        n = list(p.counts) + [""] * (4 - len(p.counts))
        buf.write(
            f"{_num(p.phi_deg)},{n[0]},{n[1]},{n[2]},{n[3]},"
            f"{_num(p.sim_intensity)},{_num(p.theory_intensity)},{_num(p.abs_error)}\n"
        )
    buf.write(f"# rms_error={_num(result.rms_error())} max_error={_num(result.max_error())}\n")
    buf.write(_config_line({**result.config, "channel": result.channel}))
    return buf.getvalue()


def format_scaling_csv(result: ScalingResult) -> str:
    lines = ["n_events,mean_abs_error"]
    lines += [f"{n},{_num(e)}" for n, e in result.rows]
    lines.append(f"# slope={_num(result.slope)} intercept={_num(result.intercept)}")
    return "\n".join(lines) + "\n" + _config_line(result.config)


def format_visibility_csv(points: Sequence[VisibilityPoint], config: dict) -> str:
    lines = ["alpha,visibility,i_max,i_min"]
    lines += [f"{_num(v.alpha)},{_num(v.visibility)},{_num(v.i_max)},{_num(v.i_min)}" for v in points]
    return "\n".join(lines) + "\n" + _config_line(config)


def _emit(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def write_csv(result: SweepResult, path: str) -> None:
    _emit(format_csv(result), path)


def _float_list(text: str) -> list[float]:
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="slmsim", description="Event-by-event single-photon interference simulator.")
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="stream seed (falls back to $SLM_SEED, then 1)")

    out = argparse.ArgumentParser(add_help=False)
    out.add_argument("--output", "-o", dest="output_path", default="-", help="CSV path, '-' for stdout")

    sweep = argparse.ArgumentParser(add_help=False)
    sweep.add_argument("--alpha", type=float, default=0.98)
    sweep.add_argument("--events", dest="events_per_point", type=int, default=10_000, help="events per data point")
    sweep.add_argument("--grid-step", dest="grid_step_deg", type=float, default=10.0, help="phase step in degrees")
    sweep.add_argument("--warmup", type=int, default=0, help="uncounted events run before each point")
    sweep.add_argument("--trace", action="store_true", help="print every hop to stderr")
    sweep.add_argument("--paper-literal-select", action="store_true",
                       help="use the reversed back-end inequality (channel 0 iff |w|^2 < r)")

    bs = sub.add_parser("bs", parents=[common, out, sweep], help="beam-splitter phase sweep")
    bs.add_argument("--p0", type=float, default=0.5)

    mzi = sub.add_parser("mzi", parents=[common, out, sweep], help="Mach-Zehnder phase sweep")
    mzi.add_argument("--phi1", dest="phi1_deg", type=float, default=0.0, help="fixed arm-1 phase in degrees")
    mzi.add_argument("--channel", type=int, choices=(0, 1, 2, 3), default=2, help="detector reported in the CSV")

    sc = sub.add_parser("scaling", parents=[common, out], help="error versus events per point")
    sc.add_argument("--alpha", type=float, default=0.98)
    sc.add_argument("--event-counts", type=_int_list, default=[1_000, 10_000, 100_000])
    sc.add_argument("--repetitions", type=int, default=5)
    sc.add_argument("--grid-step", dest="grid_step_deg", type=float, default=30.0)

    vis = sub.add_parser("visibility", parents=[common, out], help="fringe visibility versus alpha")
    vis.add_argument("--alphas", type=_float_list, default=[0.98, 0.75, 0.5, 0.25])
    vis.add_argument("--events", dest="events_per_point", type=int, default=10_000)
    vis.add_argument("--grid-step", dest="grid_step_deg", type=float, default=10.0)

    chk = sub.add_parser("selfcheck", parents=[common], help="run the invariant suites")
    chk.add_argument("--paper-literal-select", action="store_true")
    return parser


def _validate(cfg: RunConfig) -> None:
    alphas = cfg.alphas if cfg.subcommand == "visibility" else [cfg.alpha]
    for a in alphas:
        if not (0.0 < a < 1.0):
            raise ConfigError("alpha", "alpha must be in (0,1)")
    if not (0.0 <= cfg.p0 <= 1.0):
        raise ConfigError("p0", "p0 must be in [0,1]")
    if cfg.events_per_point < 1:
        raise ConfigError("events", "events must be >= 1")
    if cfg.warmup < 0:
        raise ConfigError("warmup", "warmup must be >= 0")
    if cfg.repetitions < 1:
        raise ConfigError("repetitions", "repetitions must be >= 1")
    if cfg.seed < 0:
        raise ConfigError("seed", "seed must be a non-negative integer")
    if cfg.subcommand == "scaling":
        ns = cfg.event_counts
        if len(ns) < 2 or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 100:
            raise ConfigError("event-counts", "event-counts must be strictly increasing, each >= 100")
    phi_grid(cfg.grid_step_deg)


def parse_args(argv: Sequence[str] | None = None) -> RunConfig:
    parser = build_parser()
    ns = parser.parse_args(argv)
    values = {k: v for k, v in vars(ns).items() if v is not None}
    if ns.seed is None:
        env = os.environ.get("SLM_SEED")
        try:
            values["seed"] = int(env) if env is not None else 1
        except ValueError:
            parser.error(f"SLM_SEED must be an integer, got {env!r}")
    cfg = RunConfig(**values)
    try:
        _validate(cfg)
    except ConfigError as exc:
        parser.error(str(exc))
    return cfg


def run(cfg: RunConfig, stdout: TextIO | None = None) -> int:
    trace = sys.stderr if cfg.trace else None
    if cfg.subcommand == "bs":
        result = run_bs_sweep(
            cfg.alpha, cfg.p0, cfg.events_per_point, phi_grid(cfg.grid_step_deg), cfg.seed,
            warmup=cfg.warmup, literal_select=cfg.paper_literal_select, trace=trace,
        )
        text = format_csv(result)
    elif cfg.subcommand == "mzi":
        result = run_mzi_sweep(
            cfg.alpha, cfg.phi1_deg, cfg.events_per_point, cfg.seed,
            grid_step_deg=cfg.grid_step_deg, channel=cfg.channel, warmup=cfg.warmup,
            literal_select=cfg.paper_literal_select, trace=trace,
        )
        text = format_csv(result)
    elif cfg.subcommand == "scaling":
        text = format_scaling_csv(
            run_error_scaling(cfg.alpha, cfg.event_counts, cfg.repetitions, cfg.seed, grid_step_deg=cfg.grid_step_deg)
        )
    elif cfg.subcommand == "visibility":
        points = run_visibility_study(cfg.alphas, cfg.events_per_point, cfg.seed, grid_step_deg=cfg.grid_step_deg)
        text = format_visibility_csv(
            points,
            dict(protocol="visibility", events_per_point=cfg.events_per_point, seed=cfg.seed,
                 grid_step_deg=cfg.grid_step_deg),
        )
    else:
        from .selfcheck import self_check

        return self_check(seed=cfg.seed, literal_select=cfg.paper_literal_select, out=stdout or sys.stdout)
    _emit(text, cfg.output_path)
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    cfg = parse_args(argv)
    try:
        return run(cfg)
    except OSError as exc:
        print(f"slmsim: cannot write output: {exc}", file=sys.stderr)
        return 1
    except ConfigError as exc:
        print(f"slmsim: invalid {exc.key}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Measurement protocols: beam-splitter and Mach-Zehnder phase sweeps,
visibility versus learning rate, and statistical-error scaling.

Every protocol runs on one network whose machines keep their learned state
from one sweep point to the next.  Stream draw order for a sweep is: machine
initialization at build time, then per point any angle draws, then the
events of that point.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence, TextIO

import numpy as np

from . import oracle
from .core import ConfigError, RandomStream, check_alpha, check_probability
from .devices import SourceConfig
from .network import Network, NetworkConfig, build_beam_splitter_network, build_mzi_network


@dataclass
class SweepPoint:
    phi_deg: float
    counts: tuple[int, ...]
    sim: dict[int, float]
    theory: dict[int, float]
    channel: int

    @property
    def sim_intensity(self) -> float:
        return self.sim[self.channel]

    @property
    def theory_intensity(self) -> float:
        return self.theory[self.channel]

    @property
    def abs_error(self) -> float:
        return abs(self.sim[self.channel] - self.theory[self.channel])


@dataclass
class SweepResult:
    kind: str
    points: list[SweepPoint]
    config: dict = field(default_factory=dict)
    channel: int = 0

    def errors(self, channel: int | None = None) -> np.ndarray:
        ch = self.channel if channel is None else channel
        return np.array([abs(p.sim[ch] - p.theory[ch]) for p in self.points])

    def rms_error(self, channel: int | None = None) -> float:
        e = self.errors(channel)
        return float(np.sqrt(np.mean(e**2))) if e.size else 0.0

    def max_error(self, channel: int | None = None) -> float:
        e = self.errors(channel)
        return float(e.max()) if e.size else 0.0

    def intensities(self, channel: int | None = None) -> np.ndarray:
        ch = self.channel if channel is None else channel
        return np.array([p.sim[ch] for p in self.points])

    def phis(self) -> np.ndarray:
        return np.array([p.phi_deg for p in self.points])


def phi_grid(step_deg: float = 10.0) -> list[float]:
    """Grid ``0, step, ...`` strictly below 360 degrees."""
    if not (step_deg > 0 and math.isfinite(step_deg)):
        raise ConfigError("grid_step_deg", "grid_step_deg must be positive")
    n = math.ceil(360.0 / step_deg - 1e-9)
    return [i * step_deg for i in range(n)]


def _check_events(events_per_point: int, warmup: int) -> None:
    if int(events_per_point) != events_per_point or events_per_point < 1:
        raise ConfigError("events_per_point", "events_per_point must be an integer >= 1")
    if int(warmup) != warmup or warmup < 0:
        raise ConfigError("warmup", "warmup must be a non-negative integer")


def _measure(net: Network, events: int, warmup: int) -> dict[int, int]:
    net.run(warmup)
    before = net.counts()
    net.run(events)
    after = net.counts()
    return {k: after[k] - before[k] for k in after}


def run_bs_sweep(
    alpha: float = 0.98,
    p0: float = 0.5,
    events_per_point: int = 10_000,
    phi_values: Sequence[float] | None = None,
    seed: int = 1,
    *,
    warmup: int = 0,
    literal_select: bool = False,
    trace: TextIO | None = None,
) -> SweepResult:
    """Channel-0 intensity of one learning beam splitter against phase difference.

    For each ``phi`` a fresh ``psi1`` is drawn uniform on [0, 360) and
    ``psi0 = psi1 + phi``.
    """
    check_alpha(alpha)
    check_probability("p0", p0)
    _check_events(events_per_point, warmup)
    phis = phi_grid() if phi_values is None else [float(p) for p in phi_values]
    stream = RandomStream(seed)
    net = build_beam_splitter_network(
        NetworkConfig(alpha=alpha, source=SourceConfig(p0=p0), literal_select=literal_select), stream
    )
    if trace is not None:
        net.enable_trace(trace)
    points = []
    for phi in phis:
        psi1 = stream.uniform_degrees()
        psi0 = psi1 + phi
        net.source.set_angles(psi0, psi1)
        c = _measure(net, events_per_point, warmup)
        n0, n1 = c[0], c[1]
        i0, i1 = oracle.bs_intensities(p0, psi0, psi1)
        total = n0 + n1
        points.append(SweepPoint(phi, (n0, n1), {0: n0 / total, 1: n1 / total}, {0: i0, 1: i1}, 0))
    config = dict(
        protocol="bs", alpha=alpha, p0=p0, events_per_point=events_per_point,
        seed=seed, warmup=warmup, literal_select=literal_select,
    )
    return SweepResult("bs", points, config, 0)


def run_mzi_sweep(
    alpha: float = 0.98,
    phi1: float = 0.0,
    events_per_point: int = 10_000,
    seed: int = 1,
    *,
    grid_step_deg: float = 10.0,
    channel: int = 2,
    warmup: int = 0,
    literal_select: bool = False,
    trace: TextIO | None = None,
) -> SweepResult:
    """Mach-Zehnder sweep: ``phi0`` stepped from 0 with ``phi1`` held fixed.

    Light enters input 0 only, with one phase ``psi0`` drawn per sweep.
    Points carry normalized intensities for detectors 0 and 1 (the arms,
    over N0+N1) and 2 and 3 (the outputs, over N2+N3); ``channel`` picks the
    one reported by ``rms_error`` and the CSV writer.
    """
    check_alpha(alpha)
    _check_events(events_per_point, warmup)
    if channel not in (0, 1, 2, 3):
        raise ConfigError("channel", "channel must be one of 0, 1, 2, 3")
    if not math.isfinite(phi1):
        raise ConfigError("phi1_deg", "phi1_deg must be finite")
    stream = RandomStream(seed)
    cfg = NetworkConfig(alpha=alpha, source=SourceConfig(p0=1.0), phi1_deg=phi1, literal_select=literal_select)
    net = build_mzi_network(cfg, stream)
    if trace is not None:
        net.enable_trace(trace)
    psi0 = stream.uniform_degrees()
    net.source.set_angles(psi0, 0.0)
    r0 = net.of_kind("rotator")[0]
    points = []
    for phi0 in phi_grid(grid_step_deg):
        r0.set_phi(phi0)
        c = _measure(net, events_per_point, warmup)
        arm = c[0] + c[1]
        out = c[2] + c[3]
        t2, t3 = oracle.mzi_intensities(phi0, phi1)
        points.append(
            SweepPoint(
                phi0 - phi1,
                (c[0], c[1], c[2], c[3]),
                {0: c[0] / arm, 1: c[1] / arm, 2: c[2] / out, 3: c[3] / out},
                {0: 0.5, 1: 0.5, 2: t2, 3: t3},
                channel,
            )
        )
    config = dict(
        protocol="mzi", alpha=alpha, phi1_deg=phi1, events_per_point=events_per_point,
        seed=seed, psi0_deg=psi0, warmup=warmup, literal_select=literal_select,
    )
    return SweepResult("mzi", points, config, channel)


@dataclass
class ScalingResult:
    event_counts: list[int]
    mean_abs_errors: list[float]
    slope: float
    intercept: float
    config: dict = field(default_factory=dict)

    @property
    def rows(self) -> list[tuple[int, float]]:
        return list(zip(self.event_counts, self.mean_abs_errors))


def loglog_slope(ns: Sequence[float], errors: Sequence[float]) -> tuple[float, float]:
    slope, intercept = np.polyfit(np.log(ns), np.log(errors), 1)
    return float(slope), float(intercept)


def run_error_scaling(
    alpha: float = 0.98,
    event_counts: Sequence[int] = (1_000, 10_000, 100_000),
    repetitions: int = 5,
    seed: int = 1,
    *,
    grid_step_deg: float = 30.0,
) -> ScalingResult:
    """Mean absolute error of beam-splitter sweeps (p0=0.5) versus events per point.

    Run ``j`` overall (counting N-major, repetition-minor) uses seed ``seed + j``.
    The returned slope is a least-squares fit of log(error) on log(N).
    """
    check_alpha(alpha)
    ns = [int(n) for n in event_counts]
    if len(ns) < 2 or any(b <= a for a, b in zip(ns, ns[1:])) or ns[0] < 100:
        raise ConfigError("event_counts", "event_counts must be strictly increasing, each >= 100")
    if repetitions < 1:
        raise ConfigError("repetitions", "repetitions must be >= 1")
    grid = phi_grid(grid_step_deg)
    means = []
    j = 0
    for n in ns:
        errs = []
        for _ in range(repetitions):
            res = run_bs_sweep(alpha, 0.5, n, grid, seed + j)
            errs.extend(res.errors())
            j += 1
        means.append(float(np.mean(errs)))
    slope, intercept = loglog_slope(ns, means)
    config = dict(protocol="scaling", alpha=alpha, repetitions=repetitions, seed=seed, grid_step_deg=grid_step_deg)
    return ScalingResult(ns, means, slope, intercept, config)


@dataclass
class VisibilityPoint:
    alpha: float
    visibility: float
    i_max: float
    i_min: float


def run_visibility_study(
    alphas: Sequence[float] = (0.98, 0.75, 0.5, 0.25),
    events_per_point: int = 10_000,
    seed: int = 1,
    *,
    grid_step_deg: float = 10.0,
) -> list[VisibilityPoint]:
    """Fringe visibility of the p0=0.5 beam-splitter sweep for each learning rate.

    Uses the sampled extremes of the channel-0 intensity.  Sweep ``i`` runs
    with seed ``seed + i``.
    """
    for a in alphas:
        check_alpha(a)
    out = []
    grid = phi_grid(grid_step_deg)
    for i, a in enumerate(alphas):
        res = run_bs_sweep(a, 0.5, events_per_point, grid, seed + i)
        inten = res.intensities()
        hi, lo = float(inten.max()), float(inten.min())
        out.append(VisibilityPoint(a, oracle.visibility(hi, lo), hi, lo))
    return out

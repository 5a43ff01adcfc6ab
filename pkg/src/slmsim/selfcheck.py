"""Reduced-scale invariant suites behind ``slmsim selfcheck``.

Each suite draws at least 10**4 random cases from a numpy generator seeded
by the run seed.  ``TOLERANCES`` is module level so tests can corrupt an
entry and watch the named property fail.
"""
from __future__ import annotations

import cmath
import math
import sys
from typing import Callable, TextIO

import numpy as np

from . import oracle
from .cli import format_csv
from .core import Event, Message, RandomStream, message_from_radians
from .devices import PhaseShifter, SourceConfig, rotate
from .experiments import phi_grid, run_bs_sweep
from .network import NetworkConfig, build_mzi_network
from .slm import FrontEndState, closed_form_x, transform, update_front_end

CASES = 10_000

TOLERANCES = {
    "simplex_preservation": 1e-12,
    "closed_form_equivalence": 1e-9,
    "norm_conservation": 1e-12,
    "message_unit_norm": 1e-12,
    "rotation_inverse": 1e-12,
    "oracle_unitarity": 1e-12,
    "oracle_consistency": 1e-12,
    "mzi_event_conservation": 0,
    "csv_determinism": 0,
    "eq6_agreement": 0.03,
}


class CheckSkipped(Exception):
    pass


def _random_state(rng: np.random.Generator, alpha: float | None = None) -> FrontEndState:
    r = float(rng.random())
    a = float(rng.uniform(0.01, 0.99)) if alpha is None else alpha
    return FrontEndState(
        r, 1.0 - r,
        message_from_radians(float(rng.uniform(0, 2 * math.pi))),
        message_from_radians(float(rng.uniform(0, 2 * math.pi))),
        a,
    )


def check_simplex(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(CASES // 100):
        st = _random_state(rng)
        for k in rng.integers(0, 2, 100):
            update_front_end(st, int(k), st.Y0)
            if st.x0 < 0 or st.x1 < 0:
                return math.inf
            worst = max(worst, abs(st.x0 + st.x1 - 1.0))
    return worst


def check_closed_form(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(CASES):
        alpha = float(rng.choice([0.25, 0.5, 0.98]))
        st = _random_state(rng, alpha)
        x_init = st.x
        ks = [int(k) for k in rng.integers(0, 2, int(rng.integers(0, 40)))]
        for k in ks:
            update_front_end(st, k, st.Y0)
        cf = closed_form_x(x_init, ks, alpha)
        worst = max(worst, abs(cf[0] - st.x0), abs(cf[1] - st.x1))
    return worst


def check_norm_conservation(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(CASES):
        t = transform(_random_state(rng))
        worst = max(worst, abs(t.w_norm2 + t.z_norm2 - 1.0))
    return worst


def check_message_norm(rng: np.random.Generator) -> float:
    net = build_mzi_network(
        NetworkConfig(alpha=0.9, source=SourceConfig(p0=0.7, psi0_deg=20.0, psi1_deg=200.0),
                      phi0_deg=37.0, phi1_deg=-11.0),
        RandomStream(int(rng.integers(0, 2**31))),
    )
    net.enable_trace()
    worst = 0.0
    for _ in range(CASES):
        net.propagate()
        for hop in net.last_trace:
            m = hop.message
            worst = max(worst, abs(m.y0 * m.y0 + m.y1 * m.y1 - 1.0))
    return worst


def check_rotation_inverse(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(CASES):
        m = message_from_radians(float(rng.uniform(0, 2 * math.pi)))
        phi = float(rng.uniform(-720, 720))
        back = rotate(rotate(m, phi), -phi)
        worst = max(worst, abs(back.y0 - m.y0), abs(back.y1 - m.y1))
    return worst


def _random_unit_pair(rng: np.random.Generator) -> tuple[complex, complex]:
    p0 = float(rng.random())
    return oracle.bs_input(p0, float(rng.uniform(0, 360)), float(rng.uniform(0, 360)))


def check_oracle_unitarity(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(CASES):
        a = _random_unit_pair(rng)
        b = oracle.bs_amplitudes(*a)
        c = oracle.mzi_amplitudes(*a, float(rng.uniform(0, 360)), float(rng.uniform(0, 360)))
        worst = max(worst, abs(sum(oracle.intensities(b)) - 1.0), abs(sum(oracle.intensities(c)) - 1.0))
    return worst


def check_oracle_consistency(rng: np.random.Generator) -> float:
    worst = 0.0
    for _ in range(CASES):
        p0 = float(rng.random())
        psi0, psi1 = float(rng.uniform(0, 360)), float(rng.uniform(0, 360))
        direct = oracle.bs_intensities(p0, psi0, psi1)
        via = oracle.intensities(oracle.bs_amplitudes(*oracle.bs_input(p0, psi0, psi1)))
        phi0, phi1 = float(rng.uniform(0, 360)), float(rng.uniform(0, 360))
        m_direct = oracle.mzi_intensities(phi0, phi1)
        m_via = oracle.intensities(oracle.mzi_amplitudes(cmath.exp(1j * math.radians(psi0)), 0j, phi0, phi1))
        worst = max(worst, *(abs(u - v) for u, v in zip(direct + m_direct, via + m_via)))
    return worst


def check_mzi_conservation(rng: np.random.Generator) -> float:
    net = build_mzi_network(
        NetworkConfig(alpha=0.98, source=SourceConfig(p0=1.0, psi0_deg=float(rng.uniform(0, 360)))),
        RandomStream(int(rng.integers(0, 2**31))),
    )
    rot = net.of_kind("rotator")[0]
    mismatch = 0
    for phi0 in phi_grid(36.0):
        rot.set_phi(phi0)
        net.run(CASES // 10)
        c = net.counts()
        mismatch = max(mismatch, abs((c[0] + c[1]) - (c[2] + c[3])), abs(c[0] + c[1] - net.sequence))
    return mismatch


def check_csv_determinism(rng: np.random.Generator) -> float:
    seed = int(rng.integers(0, 2**31))
    grid = phi_grid(36.0)
    a = format_csv(run_bs_sweep(0.9, 0.5, CASES // 10, grid, seed))
    b = format_csv(run_bs_sweep(0.9, 0.5, CASES // 10, grid, seed))
    return 0.0 if a.encode() == b.encode() else 1.0


def make_eq6_check(literal: bool) -> Callable[[np.random.Generator], float]:
    def check(rng: np.random.Generator) -> float:
        res = run_bs_sweep(0.98, 0.5, 2_000, phi_grid(30.0), int(rng.integers(0, 2**31)), literal_select=literal)
        if literal:
            mirrored = math.sqrt(float(np.mean([(p.sim_intensity - (1 - p.theory_intensity)) ** 2 for p in res.points])))
            raise CheckSkipped(
                f"literal selection mirrors the curve: rms vs theory={res.rms_error():.4f}, "
                f"rms vs 1-theory={mirrored:.4f}"
            )
        return res.rms_error()

    return check


def suites(literal: bool = False) -> list[tuple[str, Callable[[np.random.Generator], float]]]:
    return [
        ("simplex_preservation", check_simplex),
        ("closed_form_equivalence", check_closed_form),
        ("norm_conservation", check_norm_conservation),
        ("message_unit_norm", check_message_norm),
        ("rotation_inverse", check_rotation_inverse),
        ("oracle_unitarity", check_oracle_unitarity),
        ("oracle_consistency", check_oracle_consistency),
        ("mzi_event_conservation", check_mzi_conservation),
        ("csv_determinism", check_csv_determinism),
        ("eq6_agreement", make_eq6_check(literal)),
    ]


def self_check(seed: int = 1, literal_select: bool = False, out: TextIO | None = None) -> int:
    """Run every suite; print one line each; return 0 iff none failed."""
    out = out or sys.stdout
    failed = []
    for i, (name, fn) in enumerate(suites(literal_select)):
        rng = np.random.default_rng([seed, i])
        tol = TOLERANCES[name]
        try:
            value = fn(rng)
        except CheckSkipped as exc:
            out.write(f"SKIP {name}: {exc}\n")
            continue
        if value <= tol:
            out.write(f"PASS {name}: {value:.3g} <= {tol:g}\n")
        else:
            failed.append(name)
            out.write(f"FAIL {name}: {value:.3g} > {tol:g}\n")
    if failed:
        out.write("selfcheck failed: " + ", ".join(failed) + "\n")
        return 1
    return 0

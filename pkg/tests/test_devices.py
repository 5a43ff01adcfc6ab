import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from slmsim.core import ConfigError, Event, Message, RandomStream, make_message, message_from_radians
from slmsim.devices import PhaseShifter, Source, SourceConfig, Tap, TapCounters, rotate, tap_count


def test_source_degenerate_probabilities():
    s = RandomStream(1)
    assert {Source(SourceConfig(p0=1.0)).emit(s)[0] for _ in range(1000)} == {0}
    assert {Source(SourceConfig(p0=0.0)).emit(s)[0] for _ in range(1000)} == {1}


def test_source_frequency():
    src = Source(SourceConfig(p0=0.25))
    s = RandomStream(3)
    n = 100_000
    frac = sum(src.emit(s)[0] == 0 for _ in range(n)) / n
    # binomial standard error sqrt(.25*.75/1e5) = 1.4e-3
    assert abs(frac - 0.25) < 0.006


def test_source_emits_channel_message_and_one_draw_per_event():
    src = Source(SourceConfig(p0=0.5, psi0_deg=30.0, psi1_deg=200.0))
    s = RandomStream(9)
    for _ in range(100):
        ch, m = src.emit(s)
        assert m == make_message(30.0 if ch == 0 else 200.0)
    assert s.draws == 100


@pytest.mark.parametrize("p0", [-0.1, 1.1, float("nan")])
def test_source_config_rejects_bad_p0(p0):
    with pytest.raises(ConfigError):
        SourceConfig(p0=p0)


def test_rotate_examples():
    assert rotate(Message(1.0, 0.0), 90.0) == pytest.approx((0.0, 1.0), abs=1e-15)
    m = Message(0.6, 0.8)
    assert rotate(m, 0.0) == m


def test_rotate_is_angle_addition():
    rng = np.random.default_rng(0)
    for psi, phi in rng.uniform(-360, 360, size=(100, 2)):
        got = rotate(make_message(psi), phi)
        ang = math.radians(psi + phi)
        assert got == pytest.approx((math.cos(ang), math.sin(ang)), abs=1e-12)


def test_rotate_matches_complex_phase():
    m = make_message(33.0)
    z = complex(*m) * complex(math.cos(math.radians(71.0)), math.sin(math.radians(71.0)))
    assert rotate(m, 71.0) == pytest.approx((z.real, z.imag), abs=1e-15)


@given(st.floats(0, 2 * math.pi), st.floats(-1e3, 1e3))
def test_rotate_norm_and_inverse(theta, phi):
    m = message_from_radians(theta)
    r = rotate(m, phi)
    assert abs(r.y0**2 + r.y1**2 - 1) < 1e-12
    back = rotate(r, -phi)
    assert back == pytest.approx(m, abs=1e-12)


def test_phase_shifter_keeps_channel():
    ps = PhaseShifter(90.0)
    ch, m = ps.receive(1, Message(1.0, 0.0), RandomStream(0))
    assert ch == 1 and m == pytest.approx((0.0, 1.0), abs=1e-15)
    assert PhaseShifter(0.0).is_identity
    with pytest.raises(ConfigError):
        PhaseShifter(float("inf"))


def test_tap_count_passes_event_through():
    ev = Event(0, Message(0.6, 0.8), 0)
    counters, out = tap_count(TapCounters(), ev)
    assert (counters.n0, counters.n1) == (1, 0)
    assert out is ev


def test_tap_counts_every_event_without_touching_messages():
    tap = Tap()
    rng = np.random.default_rng(2)
    s = RandomStream(0)
    chans = rng.integers(0, 2, 500)
    for k in chans:
        m = make_message(float(rng.uniform(0, 360)))
        assert tap.receive(int(k), m, s) == (int(k), m)
    assert tap.counters.total == 500
    assert tap.counters.n1 == int(chans.sum())

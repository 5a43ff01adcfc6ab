import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from slmsim import oracle
from slmsim.core import Event, Message, RandomStream, message_from_radians
from slmsim.slm import (
    FrontEndState,
    StochasticBeamSplitter,
    TransformOutput,
    closed_form_x,
    init_state,
    process_event,
    select_output,
    transform,
    update_front_end,
)

angles = st.floats(0, 2 * math.pi, allow_nan=False)
probs = st.floats(0, 1, allow_nan=False)
alphas = st.floats(0.01, 0.99)


def state_of(x0, a0, a1, alpha=0.5):
    return FrontEndState(x0, 1.0 - x0, message_from_radians(a0), message_from_radians(a1), alpha)


class FixedStream:
    """Stand-in stream returning preset draws."""

    def __init__(self, *values):
        self.values = list(values)

    def next_uniform(self):
        return self.values.pop(0)


# init_state


def test_init_state_invariants_and_determinism():
    for seed in range(50):
        s = init_state(RandomStream(seed), 0.98)
        assert s.x0 + s.x1 == 1.0
        assert 0 <= s.x0 <= 1
        assert abs(s.Y0.norm() - 1) < 1e-12 and abs(s.Y1.norm() - 1) < 1e-12
        assert s.alpha == 0.98
    assert init_state(RandomStream(3), 0.5) == init_state(RandomStream(3), 0.5)


def test_init_state_consumes_three_draws():
    s = RandomStream(0)
    init_state(s, 0.5)
    assert s.draws == 3


@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.0])
def test_init_state_rejects_alpha(alpha):
    with pytest.raises(ValueError):
        init_state(RandomStream(0), alpha)


# front-end update


@pytest.mark.parametrize(
    "x, k, alpha, expected",
    [((0.5, 0.5), 0, 0.98, (0.51, 0.49)), ((1.0, 0.0), 0, 0.3, (1.0, 0.0)), ((0.0, 1.0), 0, 0.25, (0.75, 0.25))],
)
def test_update_front_end_examples(x, k, alpha, expected):
    s = FrontEndState(x[0], x[1], Message(1, 0), Message(0, 1), alpha)
    update_front_end(s, k, Message(0.6, 0.8))
    assert s.x == pytest.approx(expected, abs=1e-15)


def test_update_stores_message_only_in_its_register():
    s = FrontEndState(0.5, 0.5, Message(1, 0), Message(0, 1), 0.9)
    m = Message(0.6, 0.8)
    update_front_end(s, 1, m)
    assert s.Y1 == m and s.Y0 == Message(1, 0)


@settings(max_examples=200)
@given(probs, st.lists(st.integers(0, 1), max_size=300), alphas)
def test_simplex_preserved(x0, ks, alpha):
    s = state_of(x0, 0.0, 1.0, alpha)
    for k in ks:
        update_front_end(s, k, s.Y0)
        assert s.x0 >= 0 and s.x1 >= 0
        assert abs(s.x0 + s.x1 - 1) < 1e-12


# closed form


def test_closed_form_examples():
    assert closed_form_x((0.3, 0.7), [], 0.5) == (0.3, 0.7)
    assert closed_form_x((1.0, 0.0), [1], 0.5) == pytest.approx((0.5, 0.5))
    x = closed_form_x((0.0, 1.0), [0] * 2000, 0.98)
    assert x[0] == pytest.approx(1 - 0.98**2000, abs=1e-12)


@settings(max_examples=100)
@given(probs, st.lists(st.integers(0, 1), max_size=1000), st.sampled_from([0.25, 0.5, 0.98]))
def test_closed_form_equals_iteration(x0, ks, alpha):
    s = state_of(x0, 0.0, 1.0, alpha)
    for k in ks:
        update_front_end(s, k, s.Y0)
    assert closed_form_x((x0, 1 - x0), ks, alpha) == pytest.approx(s.x, abs=1e-9)


@pytest.mark.parametrize("p0", [0.2, 0.5, 0.9])
def test_cesaro_mean_converges_to_channel_probability(p0):
    stream = RandomStream(11)
    s = init_state(stream, 0.98)
    total = 0.0
    n = 100_000
    for _ in range(n):
        k = 0 if stream.next_uniform() < p0 else 1
        update_front_end(s, k, s.Y0)
        total += s.x0
    assert abs(total / n - p0) < 0.01


# transform


def test_transform_single_input():
    t = transform(FrontEndState(1.0, 0.0, Message(1, 0), Message(0.6, 0.8), 0.5))
    assert t.w == pytest.approx((1 / math.sqrt(2), 0), abs=1e-15)
    assert t.z == pytest.approx((0, 1 / math.sqrt(2)), abs=1e-15)


def test_transform_destructive_case():
    t = transform(FrontEndState(0.5, 0.5, Message(1, 0), Message(0, 1), 0.5))
    assert t.w == pytest.approx((0, 0), abs=1e-15)
    assert t.z == pytest.approx((0, 1), abs=1e-15)


@settings(max_examples=10_000, deadline=None)
@given(probs, angles, angles)
def test_transform_norm_conservation(x0, a0, a1):
    t = transform(state_of(x0, a0, a1))
    assert abs(t.w_norm2 + t.z_norm2 - 1) < 1e-12
    assert -1e-15 <= t.w_norm2 <= 1 + 1e-12


@settings(max_examples=500)
@given(probs, angles, angles)
def test_transform_matches_complex_beam_splitter(x0, a0, a1):
    # candidate vectors are the beam-splitter outputs under (u, v) <-> u + iv
    s = state_of(x0, a0, a1)
    t = transform(s)
    in0 = math.sqrt(s.x0) * complex(*s.Y0)
    in1 = math.sqrt(s.x1) * complex(*s.Y1)
    b0, b1 = oracle.bs_amplitudes(in0, in1)
    assert t.w == pytest.approx((b0.real, b0.imag), abs=1e-12)
    assert t.z == pytest.approx((b1.real, b1.imag), abs=1e-12)


# back-end selection

HALF = TransformOutput((1 / math.sqrt(2), 0.0), (0.0, 1 / math.sqrt(2)))


def test_select_output_examples():
    assert select_output(HALF, FixedStream(0.3)) == (0, pytest.approx((1.0, 0.0)))
    assert select_output(HALF, FixedStream(0.7)) == (1, pytest.approx((0.0, 1.0)))


@pytest.mark.parametrize("r", [0.0, 0.4, 0.999])
def test_select_output_degenerate_candidate(r):
    t = TransformOutput((0.0, 0.0), (0.0, 1.0))
    assert select_output(t, FixedStream(r)) == (1, (0.0, 1.0))
    assert select_output(t, FixedStream(r), literal=True) == (1, (0.0, 1.0))


def test_select_output_tie_goes_to_channel_one():
    t = TransformOutput((0.6, 0.0), (0.0, 0.8))
    r = t.w_norm2
    assert select_output(t, FixedStream(r))[0] == 1
    assert select_output(t, FixedStream(r), literal=True)[0] == 1


def test_literal_selection_reverses_inequality():
    t = TransformOutput((math.sqrt(0.8), 0.0), (0.0, math.sqrt(0.2)))
    assert select_output(t, FixedStream(0.5))[0] == 0
    assert select_output(t, FixedStream(0.5), literal=True)[0] == 1
    assert select_output(t, FixedStream(0.9), literal=True)[0] == 0


@pytest.mark.parametrize("p", [0.1, 0.5, 0.83])
def test_channel_selection_law(p):
    t = TransformOutput((math.sqrt(p), 0.0), (0.0, math.sqrt(1 - p)))
    stream = RandomStream(17)
    n = 100_000
    hits = sum(select_output(t, stream)[0] == 0 for _ in range(n))
    assert abs(hits / n - p) < 4 * math.sqrt(p * (1 - p) / n)


# composition


def test_process_event_learns_before_transforming():
    s = FrontEndState(0.0, 1.0, Message(1, 0), Message(0, 1), 0.5)
    # after learning x=(0.5,0.5) and Y0=(0,1): w = (0 - 1, 0 + 1)*sqrt(.5)/sqrt2 -> |w|^2 = 0.5
    _, ch, m = process_event(s, Event(0, Message(0, 1), 0), FixedStream(0.49))
    assert s.x == (0.5, 0.5)
    assert ch == 0 and m == pytest.approx((-1 / math.sqrt(2), 1 / math.sqrt(2)))


def test_process_event_deterministic():
    def once():
        s = init_state(RandomStream(4), 0.9)
        stream = RandomStream(8)
        return [process_event(s, Event(i % 2, Message(0.6, 0.8), i), stream)[1:] for i in range(100)]

    assert once() == once()


@settings(max_examples=300)
@given(probs, angles, angles, st.lists(st.tuples(st.integers(0, 1), angles), min_size=1, max_size=50),
       st.integers(0, 2**32), st.booleans())
def test_device_receive_is_bit_identical_to_staged_process(x0, a0, a1, events, seed, literal):
    staged = state_of(x0, a0, a1, 0.9)
    dev = StochasticBeamSplitter(0.9, RandomStream(0), literal)
    dev.state = staged.copy()
    s1, s2 = RandomStream(seed), RandomStream(seed)
    for i, (k, ang) in enumerate(events):
        msg = message_from_radians(ang)
        _, ch, out = process_event(staged, Event(k, msg, i), s1, literal)
        assert dev.receive(k, msg, s2) == (ch, out)
        assert dev.state == staged
        assert abs(out.norm() - 1) < 1e-12


def test_single_channel_stream_splits_evenly():
    stream = RandomStream(21)
    dev = StochasticBeamSplitter(0.98, stream)
    n = 10_000
    zeros = sum(dev.receive(0, Message(1.0, 0.0), stream)[0] == 0 for _ in range(n))
    assert abs(zeros / n - 0.5) < 0.02

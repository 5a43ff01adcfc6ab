"""Stochastic learning machine acting as a 50/50 beam splitter.

The machine has three stages that run once per incoming event:

1. front-end: an exponential moving average ``x`` of the input-channel
   indicator, plus one message register per input channel;
2. transform: a fixed linear map of ``(Y0*sqrt(x0), Y1*sqrt(x1))`` onto two
   candidate output vectors ``w`` (channel 0) and ``z`` (channel 1);
3. back-end: a uniform draw picks the output channel with probability
   ``|w|**2`` and emits the chosen candidate rescaled to unit length.

Only stage 3 is random.  The learning itself is deterministic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .core import (
    NORM_TOL,
    Event,
    Message,
    RandomStream,
    check_alpha,
    check_channel,
    message_from_radians,
)

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
# squared-norm threshold for a candidate treated as zero (norm < NORM_TOL)
_DEGENERATE = NORM_TOL * NORM_TOL


@dataclass(slots=True)
class FrontEndState:
    """Mutable learning state of one machine.

    ``Y0`` holds the last message seen on input 0, ``Y1`` the last one on
    input 1.  In component notation ``Y0 = (Y_{0,0}, Y_{1,0})`` and
    ``Y1 = (Y_{0,1}, Y_{1,1})``.
    """

    x0: float
    x1: float
    Y0: Message
    Y1: Message
    alpha: float

    @property
    def x(self) -> tuple[float, float]:
        return (self.x0, self.x1)

    def copy(self) -> "FrontEndState":
        return FrontEndState(self.x0, self.x1, self.Y0, self.Y1, self.alpha)


class TransformOutput(NamedTuple):
    w: tuple[float, float]
    z: tuple[float, float]

    @property
    def w_norm2(self) -> float:
        return self.w[0] * self.w[0] + self.w[1] * self.w[1]

    @property
    def z_norm2(self) -> float:
        return self.z[0] * self.z[0] + self.z[1] * self.z[1]


def init_state(stream: RandomStream, alpha: float) -> FrontEndState:
    """Random start: ``x = (r, 1-r)`` and two random unit registers.

    Consumes three draws, in order: ``r``, the angle of ``Y0``, the angle
    of ``Y1``.
    """
    alpha = check_alpha(alpha)
    r = stream.next_uniform()
    y0 = message_from_radians(stream.uniform_angle())
    y1 = message_from_radians(stream.uniform_angle())
    return FrontEndState(r, 1.0 - r, y0, y1, alpha)


def update_front_end(state: FrontEndState, channel: int, message: Message) -> FrontEndState:
    """Absorb one event in place: ``x_i <- a*x_i + (1-a)*[i == k]``, ``Y_k <- message``."""
    a = state.alpha
    if channel == 0:
        state.x0 = a * state.x0 + (1.0 - a)
        state.x1 = a * state.x1
        state.Y0 = message
    else:
        state.x0 = a * state.x0
        state.x1 = a * state.x1 + (1.0 - a)
        state.Y1 = message
    return state


def closed_form_x(
    x_initial: tuple[float, float], channels: Sequence[int], alpha: float
) -> tuple[float, float]:
    """Internal vector after a channel sequence, from the explicit sum.

    ``x_n = a**n * x_0 + (1-a) * sum_i a**(n-1-i) * v_{i+1}`` where ``v`` is
    the one-hot vector of each channel.
    """
    check_alpha(alpha)
    n = len(channels)
    s0 = s1 = 0.0
    for i, k in enumerate(channels):
        weight = alpha ** (n - 1 - i)
        if check_channel(k) == 0:
            s0 += weight
        else:
            s1 += weight
    an = alpha**n
    return (an * x_initial[0] + (1.0 - alpha) * s0, an * x_initial[1] + (1.0 - alpha) * s1)


def transform(state: FrontEndState) -> TransformOutput:
    r0 = math.sqrt(state.x0)
    r1 = math.sqrt(state.x1)
    y00, y10 = state.Y0
    y01, y11 = state.Y1
    w = ((y00 * r0 - y11 * r1) * _INV_SQRT2, (y01 * r1 + y10 * r0) * _INV_SQRT2)
    z = ((y01 * r1 - y10 * r0) * _INV_SQRT2, (y00 * r0 + y11 * r1) * _INV_SQRT2)
    return TransformOutput(w, z)


def choose_channel(p_channel0: float, r: float, literal: bool = False) -> int:
    """Back-end decision for a draw ``r``; ties go to channel 1.

    The default picks channel 0 iff ``r < |w|**2``.  ``literal=True`` applies
    the reversed inequality ``|w|**2 < r`` instead, which yields the mirror
    image ``1 - |w|**2`` for channel 0.
    """
    if literal:
        return 0 if p_channel0 < r else 1
    return 0 if r < p_channel0 else 1


def select_output(
    t: TransformOutput, stream: RandomStream, literal: bool = False
) -> tuple[int, Message]:
    """Draw one uniform and emit the chosen candidate, normalized."""
    r = stream.next_uniform()
    nw = t.w_norm2
    channel = choose_channel(nw, r, literal)
    if channel == 0 and nw < _DEGENERATE:
        channel = 1
    elif channel == 1 and t.z_norm2 < _DEGENERATE:
        channel = 0
    v = t.w if channel == 0 else t.z
    n = math.hypot(v[0], v[1])
    return channel, Message(v[0] / n, v[1] / n)


def process_event(
    state: FrontEndState, event: Event, stream: RandomStream, literal: bool = False
) -> tuple[FrontEndState, int, Message]:
    """Learn from the event, transform, then pick the output."""
    update_front_end(state, event.channel, event.message)
    channel, message = select_output(transform(state), stream, literal)
    return state, channel, message


class StochasticBeamSplitter:
    """Network device wrapping a :class:`FrontEndState`.

    State persists across calls; build a new device to restart learning.
    """

    kind = "slm"

    def __init__(self, alpha: float, stream: RandomStream, literal_select: bool = False):
        self.state = init_state(stream, alpha)
        self.literal_select = literal_select

    @property
    def alpha(self) -> float:
        return self.state.alpha

    def receive(self, channel: int, message: Message, stream: RandomStream) -> tuple[int, Message]:
        # Inlined process_event; must stay bit-identical to the staged functions.
        st = self.state
        a = st.alpha
        if channel == 0:
            x0 = st.x0 = a * st.x0 + (1.0 - a)
            x1 = st.x1 = a * st.x1
            st.Y0 = message
        else:
            x0 = st.x0 = a * st.x0
            x1 = st.x1 = a * st.x1 + (1.0 - a)
            st.Y1 = message
        r0 = math.sqrt(x0)
        r1 = math.sqrt(x1)
        y00, y10 = st.Y0
        y01, y11 = st.Y1
        w0 = (y00 * r0 - y11 * r1) * _INV_SQRT2
        w1 = (y01 * r1 + y10 * r0) * _INV_SQRT2
        z0 = (y01 * r1 - y10 * r0) * _INV_SQRT2
        z1 = (y00 * r0 + y11 * r1) * _INV_SQRT2
        nw = w0 * w0 + w1 * w1
        r = stream.next_uniform()
        if self.literal_select:
            out = 0 if nw < r else 1
        else:
            out = 0 if r < nw else 1
        if out == 0 and nw < _DEGENERATE:
            out = 1
        elif out == 1 and z0 * z0 + z1 * z1 < _DEGENERATE:
            out = 0
        if out == 0:
            n = math.hypot(w0, w1)
            return 0, Message(w0 / n, w1 / n)
        n = math.hypot(z0, z1)
        return 1, Message(z0 / n, z1 / n)

    def __repr__(self) -> str:
        s = self.state
        return f"StochasticBeamSplitter(alpha={s.alpha}, x=({s.x0:.4f}, {s.x1:.4f}))"

"""Passive and boundary devices: photon source, phase shifter, counting tap."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import ConfigError, Event, Message, RandomStream, check_probability, make_message


@dataclass
class SourceConfig:
    p0: float = 0.5
    psi0_deg: float = 0.0
    psi1_deg: float = 0.0
    randomize_angles: bool = True

    def __post_init__(self):
        check_probability("p0", self.p0)
        for key in ("psi0_deg", "psi1_deg"):
            if not math.isfinite(getattr(self, key)):
                raise ConfigError(key, f"{key} must be finite")


class Source:
    """Single-photon source feeding input 0 with probability ``p0``, else input 1.

    Emits one event per call and consumes exactly one draw, even when ``p0``
    is 0 or 1, so the draw count per event does not depend on the config.
    """

    kind = "source"

    def __init__(self, config: SourceConfig):
        self.config = config
        self.set_angles(config.psi0_deg, config.psi1_deg)

    def set_angles(self, psi0_deg: float, psi1_deg: float) -> None:
        self.config.psi0_deg = psi0_deg
        self.config.psi1_deg = psi1_deg
        self._messages = (make_message(psi0_deg), make_message(psi1_deg))

    def emit(self, stream: RandomStream) -> tuple[int, Message]:
        channel = 0 if stream.next_uniform() < self.config.p0 else 1
        return channel, self._messages[channel]


def rotate(message: Message, phi_deg: float) -> Message:
    """Counter-clockwise plane rotation by ``phi_deg`` degrees."""
    phi = math.radians(phi_deg)
    return _rotate(message, math.cos(phi), math.sin(phi))


def _rotate(m: Message, c: float, s: float) -> Message:
    return Message(m.y0 * c - m.y1 * s, m.y0 * s + m.y1 * c)


class PhaseShifter:
    """Passive ``R(phi)``: rotates every message, keeps the channel."""

    kind = "rotator"

    def __init__(self, phi_deg: float = 0.0):
        self.set_phi(phi_deg)

    def set_phi(self, phi_deg: float) -> None:
        if not math.isfinite(phi_deg):
            raise ConfigError("phi_deg", "phase shift must be finite")
        self.phi_deg = float(phi_deg)
        phi = math.radians(phi_deg)
        self._cs = (math.cos(phi), math.sin(phi))

    @property
    def is_identity(self) -> bool:
        return self._cs == (1.0, 0.0)

    def receive(self, channel: int, message: Message, stream: RandomStream) -> tuple[int, Message]:
        if self._cs == (1.0, 0.0):
            return channel, message
        return channel, _rotate(message, *self._cs)


@dataclass
class TapCounters:
    n0: int = 0
    n1: int = 0

    @property
    def total(self) -> int:
        return self.n0 + self.n1


def tap_count(counters: TapCounters, event: Event) -> tuple[TapCounters, Event]:
    """Count ``event`` on its channel and hand it back unchanged."""
    if event.channel == 0:
        counters.n0 += 1
    else:
        counters.n1 += 1
    return counters, event


class Tap:
    """Non-destructive counter; passes the message through untouched."""

    kind = "tap"

    def __init__(self, label: str = ""):
        self.label = label
        self.counters = TapCounters()

    def receive(self, channel: int, message: Message, stream: RandomStream) -> tuple[int, Message]:
        if channel == 0:
            self.counters.n0 += 1
        else:
            self.counters.n1 += 1
        return channel, message

    def __repr__(self) -> str:
        return f"Tap({self.label!r}, n0={self.counters.n0}, n1={self.counters.n1})"

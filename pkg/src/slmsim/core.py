"""Shared value types, angle helpers and the seeded random stream.

Messages are two-dimensional real unit vectors ``(y0, y1)``; under the
identification ``y0 + i*y1`` they are unit-modulus complex phases.  Angles are
given in degrees at every user-facing boundary and converted to radians here.
"""
from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

NORM_TOL = 1e-12


class ConfigError(ValueError):
    """Raised for an invalid simulation parameter; ``key`` names the offender."""

    def __init__(self, key: str, message: str):
        super().__init__(message)
        self.key = key


class TopologyError(RuntimeError):
    """Raised when an event reaches a port that is not wired anywhere."""

    def __init__(self, device_id: int, message: str):
        super().__init__(f"device {device_id}: {message}")
        self.device_id = device_id


class Message(NamedTuple):
    y0: float
    y1: float

    def norm(self) -> float:
        return math.hypot(self.y0, self.y1)


class Event(NamedTuple):
    channel: int
    message: Message
    sequence_number: int


def check_channel(channel: int) -> int:
    if channel not in (0, 1):
        raise ValueError(f"device channel must be 0 or 1, got {channel!r}")
    return channel


def radians(degrees: float) -> float:
    return math.radians(degrees)


def make_message(psi_deg: float) -> Message:
    """Unit message ``(cos psi, sin psi)`` for an angle in degrees."""
    psi = math.radians(math.fmod(psi_deg, 360.0))
    return Message(math.cos(psi), math.sin(psi))


def message_from_radians(theta: float) -> Message:
    return Message(math.cos(theta), math.sin(theta))


def is_unit(message: Message, tol: float = NORM_TOL) -> bool:
    return abs(message.y0 * message.y0 + message.y1 * message.y1 - 1.0) <= tol


def check_probability(key: str, value: float) -> float:
    if not (0.0 <= value <= 1.0) or math.isnan(value):
        raise ConfigError(key, f"{key} must be in [0,1], got {value}")
    return float(value)


def check_alpha(alpha: float, key: str = "alpha") -> float:
    if not (0.0 < alpha < 1.0):
        raise ConfigError(key, f"{key} must be in (0,1), got {alpha}")
    return float(alpha)


class RandomStream:
    """Seeded uniform stream backed by numpy's PCG64.

    Variates are drawn from ``Generator.random`` in blocks; block boundaries do
    not change the sequence, so a stream is fully determined by its seed.
    Not safe for concurrent use.
    """

    _BLOCK = 8192

    def __init__(self, seed: int):
        if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or seed < 0:
            raise ConfigError("seed", f"seed must be a non-negative integer, got {seed!r}")
        self.seed = int(seed)
        self._gen = np.random.Generator(np.random.PCG64(self.seed))
        self._buf: list[float] = []
        self._pos = 0
        self._blocks = 0

    def next_uniform(self) -> float:
        """Next variate in [0, 1)."""
        pos = self._pos
        if pos == len(self._buf):
            self._buf = self._gen.random(self._BLOCK).tolist()
            self._blocks += 1
            pos = 0
        self._pos = pos + 1
        return self._buf[pos]

    @property
    def draws(self) -> int:
        """Number of variates consumed so far."""
        return (self._blocks - 1) * self._BLOCK + self._pos if self._blocks else 0

    def uniform_angle(self) -> float:
        """Angle in radians, uniform on [0, 2*pi)."""
        return 2.0 * math.pi * self.next_uniform()

    def uniform_degrees(self) -> float:
        return 360.0 * self.next_uniform()

    def __repr__(self) -> str:
        return f"RandomStream(seed={self.seed}, draws={self.draws})"

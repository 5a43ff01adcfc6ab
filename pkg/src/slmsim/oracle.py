"""Closed-form single-photon amplitudes and intensities.

Amplitudes are Python complex numbers.  Angles are in degrees.
"""
from __future__ import annotations

import cmath
import math

from .core import check_probability

_S = 1.0 / math.sqrt(2.0)


def bs_amplitudes(a0: complex, a1: complex) -> tuple[complex, complex]:
    """50/50 beam splitter: ``b = (1/sqrt2) [[1, i], [i, 1]] a``."""
    return (_S * (a0 + 1j * a1), _S * (a1 + 1j * a0))


def bs_input(p0: float, psi0_deg: float, psi1_deg: float) -> tuple[complex, complex]:
    """Input amplitudes ``(sqrt(p0) e^{i psi0}, sqrt(1-p0) e^{i psi1})``."""
    check_probability("p0", p0)
    return (
        cmath.rect(math.sqrt(p0), math.radians(psi0_deg)),
        cmath.rect(math.sqrt(1.0 - p0), math.radians(psi1_deg)),
    )


def bs_intensities(p0: float, psi0_deg: float, psi1_deg: float) -> tuple[float, float]:
    check_probability("p0", p0)
    i0 = 0.5 * (1.0 + 2.0 * math.sqrt(p0 * (1.0 - p0)) * math.sin(math.radians(psi0_deg - psi1_deg)))
    return (i0, 1.0 - i0)


def mzi_amplitudes(a0: complex, a1: complex, phi0_deg: float, phi1_deg: float) -> tuple[complex, complex]:
    """Splitter, per-arm phase ``e^{i phi}``, splitter.

    The two splitter matrices carry one overall factor ``1/2``.
    """
    c0, c1 = a0 + 1j * a1, 1j * a0 + a1
    c0 *= cmath.exp(1j * math.radians(phi0_deg))
    c1 *= cmath.exp(1j * math.radians(phi1_deg))
    return (0.5 * (c0 + 1j * c1), 0.5 * (1j * c0 + c1))


def mzi_intensities(phi0_deg: float, phi1_deg: float) -> tuple[float, float]:
    """Output intensities for light entering input 0 only; independent of its phase."""
    half = 0.5 * math.radians(phi0_deg - phi1_deg)
    return (math.sin(half) ** 2, math.cos(half) ** 2)


def intensities(b: tuple[complex, complex]) -> tuple[float, float]:
    return (abs(b[0]) ** 2, abs(b[1]) ** 2)


def visibility(i_max: float, i_min: float) -> float:
    total = i_max + i_min
    return (i_max - i_min) / total if total > 0 else 0.0

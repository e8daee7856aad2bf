"""Closed-form phase model of a correlated photon pair.

Each photon picks up a local phase rotation e^{i phi}; the pair leaves the
source with a fixed phase difference ``delta``.  Detection probability is the
squared real part of a rotation, and joint detection the squared real part of
the *product* of the two rotations.  All angles are radians.

Functions taking plain angles are numpy-vectorized unless noted otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

from . import ga3

TWO_PI = 2.0 * math.pi

# settings at which the CHSH sum reaches 2*sqrt(2): phi1, phi1', phi2, phi2' (degrees)
CHSH_ANGLES_DEG = (0.0, 45.0, 22.5, 67.5)


@dataclass(frozen=True)
class PhaseRotor:
    """A unit phase e^{i*angle}; ``angle`` is the total accumulated phase."""

    angle: float

    def __post_init__(self):
        if not math.isfinite(self.angle):
            raise ValueError("rotor angle must be finite")

    @property
    def re(self) -> float:
        return math.cos(self.angle)

    @property
    def im(self) -> float:
        return math.sin(self.angle)

    @property
    def value(self) -> tuple[float, float]:
        return (self.re, self.im)

    def to_multivector(self) -> ga3.Multivector:
        # scalar + pseudoscalar, since (e1e2)e3 = e1e2e3 is the unit imaginary
        return ga3.pseudoscalar_exp(self.angle)

    def __mul__(self, other: PhaseRotor) -> PhaseRotor:
        return PhaseRotor(self.angle + other.angle)


@dataclass(frozen=True)
class PairSourceSpec:
    delta: float = 0.0
    phi0: float = 0.0

    def __post_init__(self):
        if not (math.isfinite(self.delta) and math.isfinite(self.phi0)):
            raise ValueError("source phases must be finite")


@dataclass(frozen=True)
class RotatorStation:
    """Rotator angles on the +z side (forward) and the -z side (backward).

    Stations sit at whole multiples of the wavelength, so propagation adds no
    phase; only the rotator angles count.
    """

    angles_forward: tuple[float, ...] = field(default_factory=tuple)
    angles_backward: tuple[float, ...] = field(default_factory=tuple)

    def __post_init__(self):
        object.__setattr__(self, "angles_forward", tuple(float(a) for a in self.angles_forward))
        object.__setattr__(self, "angles_backward", tuple(float(a) for a in self.angles_backward))
        if not all(map(math.isfinite, self.angles_forward + self.angles_backward)):
            raise ValueError("rotator angles must be finite")


class OutcomeDistribution(NamedTuple):
    pp: float
    mm: float
    pm: float
    mp: float


def _check_fraction(frac: float) -> float:
    if not 0.0 <= frac <= 1.0:
        raise ValueError(f"wavelength fraction must lie in [0, 1], got {frac!r}")
    return float(frac)


def rotation_forward(z1_frac: float) -> PhaseRotor:
    """Rotor after travelling ``z1_frac`` of a wavelength in +z."""
    return PhaseRotor(TWO_PI * _check_fraction(z1_frac))


def rotation_backward(z2_frac: float, source: PairSourceSpec = PairSourceSpec()) -> PhaseRotor:
    """Rotor of the -z photon, carrying the source phase difference."""
    return PhaseRotor(-(TWO_PI * _check_fraction(z2_frac) + source.delta))


def detection_probability(r: PhaseRotor) -> float:
    return r.re**2


def _product_real_part(forward: PhaseRotor, backward: PhaseRotor) -> float:
    prod = ga3.geometric_product(forward.to_multivector(), backward.to_multivector())
    return ga3.scalar_part(prod)


def joint_probability(phi1: float, phi2: float, source: PairSourceSpec = PairSourceSpec()) -> float:
    """Joint detection probability cos^2(phi1 - phi2 - delta).

    Evaluated as the squared real part of the geometric product of the two
    photon rotors; the common source phase ``phi0`` enters both and cancels.
    Scalar only.
    """
    forward = PhaseRotor(phi1 + source.phi0)
    backward = PhaseRotor(-(phi2 + source.phi0 + source.delta))
    return _product_real_part(forward, backward) ** 2


def joint_probability_multi(station: RotatorStation, source: PairSourceSpec = PairSourceSpec()) -> float:
    """Joint probability for several rotators per side, cos^2(sum_f - sum_b - delta).

    With one angle on each side this is exactly ``joint_probability``.
    """
    forward = PhaseRotor(sum(station.angles_forward) + source.phi0)
    backward = PhaseRotor(-(sum(station.angles_backward) + source.phi0 + source.delta))
    return _product_real_part(forward, backward) ** 2


def joint_probability_closed(phi1, phi2, delta=0.0):
    """Shortcut cos^2(phi1 - phi2 - delta), for cross-checks and vectorized use."""
    return np.cos(np.subtract(phi1, phi2) - delta) ** 2


def coincidence_probabilities(phi1, phi2, delta=0.0) -> OutcomeDistribution:
    """Four-channel outcome distribution (++, --, +-, -+) for one pair.

    The coincidence rates C++ = C-- = cos^2 and C+- = C-+ = sin^2 sum to 2,
    so each is halved to make the channels exhaustive.
    """
    x = np.subtract(phi1, phi2) - delta
    same = 0.5 * np.cos(x) ** 2
    diff = 0.5 * np.sin(x) ** 2
    return OutcomeDistribution(same, same, diff, diff)


def correlation(phi1, phi2, delta=0.0):
    """E(phi1, phi2) = cos 2(phi1 - phi2 - delta)."""
    return np.cos(2.0 * (np.subtract(phi1, phi2) - delta))


def chsh(phi1, phi1p, phi2, phi2p, delta=0.0):
    """S = E(phi1, phi2) - E(phi1, phi2') + E(phi1', phi2) + E(phi1', phi2')."""
    return (
        correlation(phi1, phi2, delta)
        - correlation(phi1, phi2p, delta)
        + correlation(phi1p, phi2, delta)
        + correlation(phi1p, phi2p, delta)
    )


def chsh_terms(phi1, phi1p, phi2, phi2p) -> list[tuple[float, float]]:
    """The four setting pairs entering S, in order, with signs +, -, +, +."""
    return [(phi1, phi2), (phi1, phi2p), (phi1p, phi2), (phi1p, phi2p)]


CHSH_SIGNS = (1.0, -1.0, 1.0, 1.0)


def max_abs_chsh_grid(angles: Sequence[float], corr=correlation) -> tuple[float, tuple[float, float, float, float]]:
    """Exhaustive max |S| over all quadruples drawn from `angles`.

    ``corr`` maps two broadcastable angle arrays to correlations.
    Returns the maximum and the first quadruple (phi1, phi1', phi2, phi2') attaining it.
    """
    a = np.asarray(angles, dtype=float)
    e = corr(a[:, None], a[None, :])  # e[i, j] = E(a_i, a_j)
    s = e[:, None, :, None] - e[:, None, None, :] + e[None, :, :, None] + e[None, :, None, :]
    idx = np.unravel_index(np.argmax(np.abs(s)), s.shape)
    return float(abs(s[idx])), tuple(float(a[k]) for k in idx)

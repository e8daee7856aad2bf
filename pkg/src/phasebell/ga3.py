"""Geometric algebra of three-dimensional Euclidean space, Cl(3,0).

Multivectors are stored densely as 8 real coefficients over the blade order

    index:  0   1    2    3    4      5      6      7
    blade:  1   e1   e2   e3   e1e2   e1e3   e2e3   e1e2e3

The trivector ``e1e2e3`` squares to -1 and commutes with every element, so it
plays the part of the imaginary unit.  Only what the phase model needs is
here: the geometric product, the pseudoscalar and bivector exponentials.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

BLADES = ("1", "e1", "e2", "e3", "e1e2", "e1e3", "e2e3", "e1e2e3")

# bitmask of the basis vectors in each blade, in BLADES order
_MASKS = (0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111)
_INDEX = {m: i for i, m in enumerate(_MASKS)}


class InvalidOperandError(ValueError):
    """Raised for non-finite multivector coefficients."""


class DegeneratePlaneError(ValueError):
    """Raised when a rotation plane bivector is zero."""


def _reorder_sign(a: int, b: int) -> int:
    # number of transpositions needed to bring blade a * blade b into canonical order
    swaps = 0
    a >>= 1
    while a:
        swaps += bin(a & b).count("1")
        a >>= 1
    return -1 if swaps & 1 else 1


def _build_table() -> np.ndarray:
    # table[i, j, k]: coefficient of blade k in blade_i * blade_j (Euclidean metric)
    table = np.zeros((8, 8, 8))
    for i, a in enumerate(_MASKS):
        for j, b in enumerate(_MASKS):
            table[i, j, _INDEX[a ^ b]] = _reorder_sign(a, b)
    return table


PRODUCT_TABLE = _build_table()
PRODUCT_TABLE.setflags(write=False)


class Multivector:
    """Immutable element of Cl(3,0) with 8 coefficients in ``BLADES`` order."""

    __slots__ = ("_c",)

    def __init__(self, coefficients: Sequence[float] | np.ndarray):
        c = np.array(coefficients, dtype=float)
        if c.shape != (8,):
            raise InvalidOperandError(f"expected 8 coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise InvalidOperandError("multivector coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @classmethod
    def blade(cls, name: str, value: float = 1.0) -> Multivector:
        c = np.zeros(8)
        c[BLADES.index(name)] = value
        return cls(c)

    @classmethod
    def scalar(cls, value: float) -> Multivector:
        return cls.blade("1", value)

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    def __getitem__(self, name: str) -> float:
        return float(self._c[BLADES.index(name)])

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return geometric_product(self, other)
        return Multivector(self._c * float(other))

    def __rmul__(self, other):
        return Multivector(self._c * float(other))

    def __add__(self, other: Multivector) -> Multivector:
        return Multivector(self._c + other._c)

    def __sub__(self, other: Multivector) -> Multivector:
        return Multivector(self._c - other._c)

    def __neg__(self) -> Multivector:
        return Multivector(-self._c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Multivector):
            return NotImplemented
        return bool(np.array_equal(self._c, other._c))

    def __hash__(self):
        return hash(self._c.tobytes())

    def allclose(self, other: Multivector, atol: float = 1e-12) -> bool:
        return bool(np.allclose(self._c, other._c, rtol=0.0, atol=atol))

    def __repr__(self) -> str:
        terms = [f"{v:+.6g}*{b}" for v, b in zip(self._c, BLADES) if v != 0.0]
        return f"Multivector({' '.join(terms) or '0'})"


@dataclass(frozen=True)
class Bivector:
    """Plane element with coefficients over (e1e2, e1e3, e2e3)."""

    e12: float = 0.0
    e13: float = 0.0
    e23: float = 0.0

    def to_multivector(self) -> Multivector:
        return Multivector([0, 0, 0, 0, self.e12, self.e13, self.e23, 0])

    def norm(self) -> float:
        return float(np.sqrt(self.e12**2 + self.e13**2 + self.e23**2))


E1 = Multivector.blade("e1")
E2 = Multivector.blade("e2")
E3 = Multivector.blade("e3")
ONE = Multivector.scalar(1.0)


def basis_vector(k: int) -> Multivector:
    """Return e_k for k in {1, 2, 3}."""
    return (E1, E2, E3)[k - 1]


def geometric_product(a: Multivector, b: Multivector) -> Multivector:
    return Multivector(np.einsum("i,j,ijk->k", a.coefficients, b.coefficients, PRODUCT_TABLE))


def pseudoscalar() -> Multivector:
    return Multivector.blade("e1e2e3")


def scalar_part(m: Multivector) -> float:
    return float(m.coefficients[0])


def rotor_exp(plane: Bivector, angle: float) -> Multivector:
    """exp(B * angle) for the unit bivector B along `plane`.

    Any nonzero bivector squares to minus its squared norm, so after
    normalization the exponential is cos(angle) + sin(angle) * B.
    """
    if not np.isfinite(angle):
        raise InvalidOperandError("rotor angle must be finite")
    n = plane.norm()
    if n == 0.0:
        raise DegeneratePlaneError("rotation plane bivector is zero")
    c = np.zeros(8)
    c[0] = np.cos(angle)
    s = np.sin(angle) / n
    c[4:7] = (plane.e12 * s, plane.e13 * s, plane.e23 * s)
    return Multivector(c)


def pseudoscalar_exp(angle: float) -> Multivector:
    """exp(i * angle) with i = e1e2e3: a scalar plus pseudoscalar phase."""
    if not np.isfinite(angle):
        raise InvalidOperandError("phase angle must be finite")
    c = np.zeros(8)
    c[0] = np.cos(angle)
    c[7] = np.sin(angle)
    return Multivector(c)

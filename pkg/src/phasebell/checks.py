"""Built-in invariant suite run by ``phasebell verify``."""

from __future__ import annotations

import itertools
import math
from typing import Callable, NamedTuple

import numpy as np

from . import ga3, model

N_RANDOM = 1000
TOL = 1e-12

_PAULI = (
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str


def levi_civita(i: int, j: int, k: int) -> int:
    return int(np.sign((j - i) * (k - i) * (k - j)))


def to_pauli_matrix(m: ga3.Multivector) -> np.ndarray:
    """Image of a multivector under e_k -> sigma_k (blade products map to matrix products)."""
    s1, s2, s3 = _PAULI
    images = (np.eye(2), s1, s2, s3, s1 @ s2, s1 @ s3, s2 @ s3, s1 @ s2 @ s3)
    return sum(c * b for c, b in zip(m.coefficients, images))


def _structure_constants() -> tuple[bool, str]:
    bad = []
    for i, j in itertools.product((1, 2, 3), repeat=2):
        expected = ga3.Multivector.scalar(1.0 if i == j else 0.0)
        for k in (1, 2, 3):
            eps = levi_civita(i, j, k)
            if eps:
                expected = expected + eps * ga3.geometric_product(ga3.pseudoscalar(), ga3.basis_vector(k))
        if ga3.geometric_product(ga3.basis_vector(i), ga3.basis_vector(j)) != expected:
            bad.append((i, j))
    return not bad, f"9 pairs checked, failing: {bad}"


def _pauli_isomorphism(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(100):
        a, b = (ga3.Multivector(rng.uniform(-1, 1, 8)) for _ in range(2))
        lhs = to_pauli_matrix(ga3.geometric_product(a, b))
        rhs = to_pauli_matrix(a) @ to_pauli_matrix(b)
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    ok = worst <= TOL and np.allclose(to_pauli_matrix(ga3.pseudoscalar()), 1j * np.eye(2), atol=0)
    return ok, f"max deviation {worst:.3g}"


def _pseudoscalar_square(rng) -> tuple[bool, str]:
    sq = ga3.geometric_product(ga3.pseudoscalar(), ga3.pseudoscalar())
    return sq == ga3.Multivector.scalar(-1.0), repr(sq)


def _pseudoscalar_central(rng) -> tuple[bool, str]:
    i = ga3.pseudoscalar()
    worst = 0.0
    for _ in range(100):
        m = ga3.Multivector(rng.uniform(-1, 1, 8))
        d = ga3.geometric_product(i, m).coefficients - ga3.geometric_product(m, i).coefficients
        worst = max(worst, float(np.max(np.abs(d))))
    return worst <= 1e-14, f"max deviation {worst:.3g}"


def _associativity(rng) -> tuple[bool, str]:
    gp = ga3.geometric_product
    worst = 0.0
    for _ in range(100):
        a, b, c = (ga3.Multivector(rng.uniform(-1, 1, 8)) for _ in range(3))
        d = gp(gp(a, b), c).coefficients - gp(a, gp(b, c)).coefficients
        worst = max(worst, float(np.max(np.abs(d))))
    return worst <= TOL, f"max deviation {worst:.3g}"


def _rotor_composition(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(N_RANDOM):
        plane = ga3.Bivector(*rng.uniform(-1, 1, 3))
        x, y = rng.uniform(-math.pi, math.pi, 2)
        lhs = ga3.geometric_product(ga3.rotor_exp(plane, x), ga3.rotor_exp(plane, y))
        d = lhs.coefficients - ga3.rotor_exp(plane, x + y).coefficients
        worst = max(worst, float(np.max(np.abs(d))))
    return worst <= TOL, f"max deviation {worst:.3g}"


def _rotor_magnitude(rng) -> tuple[bool, str]:
    worst = 0.0
    for _ in range(N_RANDOM):
        r = ga3.rotor_exp(ga3.Bivector(*rng.uniform(-1, 1, 3)), rng.uniform(-10, 10))
        c = r.coefficients
        worst = max(worst, abs(c[0] ** 2 + np.sum(c[4:7] ** 2) - 1.0))
    return worst <= TOL, f"max deviation {worst:.3g}"


def _mechanism_equality(rng) -> tuple[bool, str]:
    worst = 0.0
    for p1, p2, d in rng.uniform(-2 * math.pi, 2 * math.pi, (N_RANDOM, 3)):
        via_rotors = model.joint_probability(p1, p2, model.PairSourceSpec(delta=d))
        worst = max(worst, abs(via_rotors - model.joint_probability_closed(p1, p2, d)))
    return worst <= TOL, f"max deviation {worst:.3g}"


def _four_rotator_reduction(rng) -> tuple[bool, str]:
    worst = 0.0
    for a, b, d in rng.uniform(-2 * math.pi, 2 * math.pi, (N_RANDOM, 3)):
        src = model.PairSourceSpec(delta=d)
        multi = model.joint_probability_multi(model.RotatorStation((a,), (b,)), src)
        worst = max(worst, abs(multi - model.joint_probability(a, b, src)))
    cancel = model.joint_probability_multi(model.RotatorStation((0.7, -0.7), ()))
    return worst <= TOL and abs(cancel - 1.0) <= TOL, f"max deviation {worst:.3g}, cancellation {cancel!r}"


def _shift_invariance(rng) -> tuple[bool, str]:
    worst = 0.0
    for p1, p2, d, s in rng.uniform(-2 * math.pi, 2 * math.pi, (N_RANDOM, 4)):
        src = model.PairSourceSpec(delta=d)
        shifted = model.joint_probability(p1 + s, p2 + s, src)
        with_phi0 = model.joint_probability(p1, p2, model.PairSourceSpec(delta=d, phi0=s))
        base = model.joint_probability(p1, p2, src)
        worst = max(worst, abs(shifted - base), abs(with_phi0 - base))
    return worst <= TOL, f"max deviation {worst:.3g}"


def _chsh_value(rng) -> tuple[bool, str]:
    s = float(model.chsh(*np.radians(model.CHSH_ANGLES_DEG)))
    return abs(s - 2 * math.sqrt(2)) <= TOL, f"S = {s!r}"


CHECKS: dict[str, Callable] = {
    "structure_constants": lambda rng: _structure_constants(),
    "pauli_isomorphism": _pauli_isomorphism,
    "pseudoscalar_square": _pseudoscalar_square,
    "pseudoscalar_central": _pseudoscalar_central,
    "associativity": _associativity,
    "rotor_composition": _rotor_composition,
    "rotor_magnitude": _rotor_magnitude,
    "mechanism_equality": _mechanism_equality,
    "four_rotator_reduction": _four_rotator_reduction,
    "shift_invariance": _shift_invariance,
    "chsh_value": _chsh_value,
}


def run_checks(seed: int = 0) -> list[Check]:
    rng = np.random.default_rng(seed)
    out = []
    for name, fn in CHECKS.items():
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crashing check is a failing check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        out.append(Check(name, bool(ok), detail))
    return out

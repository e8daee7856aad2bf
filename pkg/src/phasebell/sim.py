"""Seeded Monte Carlo Bell experiments.

Each trial is one photon pair whose outcome is one of four coincidence
channels, coded

    0: ++    1: --    2: +-    3: -+

Three sampling laws are available (``ModelKind``): the phase model's
four-channel distribution, and two Bell-local baselines in which a shared
hidden angle ``lam`` uniform on [0, pi) fixes each side's outcome using only
that side's setting.

Reproducibility
---------------
Trial ``i`` of a run belongs to partition ``i % partitions``.  Partition ``p``
of sub-experiment ``tag`` draws from a Philox stream keyed by
``SeedSequence(seed, spawn_key=(tag, p))``, so counts depend only on
``(seed, partitions, tag)`` and not on thread scheduling.  Different partition
counts give different, equally valid, draws.
"""

from __future__ import annotations

import enum
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from functools import reduce
from typing import NamedTuple

import numpy as np

from . import model
from .model import OutcomeDistribution, PairSourceSpec

OUTCOMES = ("++", "--", "+-", "-+")
MAX_TRIALS = 2**62
_COUNT_MAX = 2**63 - 1
_CHUNK = 1 << 20


class ModelKind(str, enum.Enum):
    PHASE = "phase"
    BELL_DETERMINISTIC = "bell-det"
    BELL_STOCHASTIC = "bell-stoch"


class EmptyRunError(ValueError):
    """A run or a set of counts with no trials."""


@dataclass(frozen=True)
class ExperimentConfig:
    model: ModelKind = ModelKind.PHASE
    phi1: float = 0.0
    phi2: float = 0.0
    source: PairSourceSpec = field(default_factory=PairSourceSpec)
    trials: int = 1_000_000
    seed: int = 42
    partitions: int = 1

    def __post_init__(self):
        object.__setattr__(self, "model", ModelKind(self.model))
        if self.trials < 1:
            raise EmptyRunError("trials must be at least 1")
        if self.trials > MAX_TRIALS:
            raise ValueError(f"trials capped at 2**62, got {self.trials}")
        if not 1 <= self.partitions <= self.trials:
            raise ValueError(f"partitions must lie in [1, trials], got {self.partitions}")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if not (math.isfinite(self.phi1) and math.isfinite(self.phi2)):
            raise ValueError("settings must be finite")


@dataclass(frozen=True)
class CoincidenceCounts:
    n_pp: int = 0
    n_mm: int = 0
    n_pm: int = 0
    n_mp: int = 0

    def __post_init__(self):
        for v in self.as_tuple():
            if v < 0:
                raise ValueError("counts must be nonnegative")
            if v > _COUNT_MAX:
                raise OverflowError("count exceeds 64-bit range")

    @property
    def total(self) -> int:
        return self.n_pp + self.n_mm + self.n_pm + self.n_mp

    def as_tuple(self) -> tuple[int, int, int, int]:
        return (self.n_pp, self.n_mm, self.n_pm, self.n_mp)

    def frequencies(self) -> OutcomeDistribution:
        if self.total == 0:
            raise EmptyRunError("no counts")
        return OutcomeDistribution(*(v / self.total for v in self.as_tuple()))

    @classmethod
    def from_codes(cls, codes: np.ndarray) -> CoincidenceCounts:
        return cls(*(int(v) for v in np.bincount(codes, minlength=4)))


@dataclass(frozen=True)
class CorrelationEstimate:
    """Estimated correlation with std_err = sqrt((1 - e_hat**2) / n)."""

    e_hat: float
    std_err: float
    n: int


class ChshEstimate(NamedTuple):
    s_hat: float
    std_err: float
    terms: tuple[CorrelationEstimate, ...]


def merge_counts(a: CoincidenceCounts, b: CoincidenceCounts) -> CoincidenceCounts:
    return CoincidenceCounts(*(x + y for x, y in zip(a.as_tuple(), b.as_tuple())))


# ---------------------------------------------------------------- sampling


def _codes_from_sides(a_plus: np.ndarray, b_plus: np.ndarray) -> np.ndarray:
    return np.where(a_plus == b_plus, np.where(a_plus, 0, 1), np.where(a_plus, 2, 3)).astype(np.intp)


def sample_outcomes(kind: ModelKind, phi1: float, phi2: float, source: PairSourceSpec,
                    rng: np.random.Generator, size: int) -> np.ndarray:
    """Draw `size` outcome codes for fixed settings."""
    kind = ModelKind(kind)
    if kind is ModelKind.PHASE:
        p = model.coincidence_probabilities(phi1, phi2, source.delta)
        c0, c1, c2 = p.pp, p.pp + p.mm, p.pp + p.mm + p.pm
        u = rng.random(size)
        return (u >= c0).astype(np.intp) + (u >= c1) + (u >= c2)

    # the B side carries the source phase difference, as in the phase model
    b_setting = phi2 + source.delta
    lam = math.pi * rng.random(size)
    if kind is ModelKind.BELL_DETERMINISTIC:
        a_plus = np.cos(2.0 * (phi1 - lam)) >= 0.0
        b_plus = np.cos(2.0 * (b_setting - lam)) >= 0.0
    else:
        u = rng.random((2, size))
        a_plus = u[0] < np.cos(phi1 - lam) ** 2
        b_plus = u[1] < np.cos(b_setting - lam) ** 2
    return _codes_from_sides(a_plus, b_plus)


def sample_outcome(kind: ModelKind, phi1: float, phi2: float, source: PairSourceSpec,
                   rng: np.random.Generator) -> str:
    """One pair's outcome label, one of ``OUTCOMES``."""
    return OUTCOMES[int(sample_outcomes(kind, phi1, phi2, source, rng, 1)[0])]


def substream(seed: int, tag: int, partition: int) -> np.random.Generator:
    ss = np.random.SeedSequence(seed, spawn_key=(tag, partition))
    return np.random.Generator(np.random.Philox(ss))


def partition_sizes(trials: int, partitions: int) -> list[int]:
    """Trials per partition under the round-robin assignment i -> i % partitions."""
    return [(trials - p + partitions - 1) // partitions for p in range(partitions)]


def _run_partition(config: ExperimentConfig, tag: int, partition: int, n: int) -> CoincidenceCounts:
    rng = substream(config.seed, tag, partition)
    counts = CoincidenceCounts()
    done = 0
    while done < n:
        size = min(_CHUNK, n - done)
        codes = sample_outcomes(config.model, config.phi1, config.phi2, config.source, rng, size)
        counts = merge_counts(counts, CoincidenceCounts.from_codes(codes))
        done += size
    return counts


def run_partitions(config: ExperimentConfig, tag: int = 0) -> list[CoincidenceCounts]:
    """Per-partition counts, in partition order."""
    sizes = partition_sizes(config.trials, config.partitions)
    workers = min(config.partitions, os.cpu_count() or 1)
    if workers == 1:
        return [_run_partition(config, tag, p, n) for p, n in enumerate(sizes)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(lambda pn: _run_partition(config, tag, *pn), enumerate(sizes)))


def run_experiment(config: ExperimentConfig, tag: int = 0) -> CoincidenceCounts:
    return reduce(merge_counts, run_partitions(config, tag), CoincidenceCounts())


# -------------------------------------------------------------- estimation


def estimate_correlation(counts: CoincidenceCounts) -> CorrelationEstimate:
    n = counts.total
    if n == 0:
        raise EmptyRunError("cannot estimate a correlation from zero counts")
    e = (counts.n_pp + counts.n_mm - counts.n_pm - counts.n_mp) / n
    return CorrelationEstimate(e, math.sqrt(max(0.0, 1.0 - e * e) / n), n)


def estimate_chsh(base: ExperimentConfig, phi1p: float, phi2p: float) -> ChshEstimate:
    """Monte Carlo CHSH sum from four sub-experiments on tags 1..4."""
    settings = model.chsh_terms(base.phi1, phi1p, base.phi2, phi2p)
    terms = tuple(
        estimate_correlation(run_experiment(replace(base, phi1=a, phi2=b), tag=k + 1))
        for k, (a, b) in enumerate(settings)
    )
    s = sum(sign * t.e_hat for sign, t in zip(model.CHSH_SIGNS, terms))
    se = math.sqrt(sum(t.std_err**2 for t in terms))
    return ChshEstimate(s, se, terms)


# ------------------------------------------------------- analytic baselines


def _folded_difference(x):
    # distance of x to the nearest multiple of pi, in [0, pi/2]
    d = np.mod(np.abs(x), math.pi)
    return np.minimum(d, math.pi - d)


def analytic_probabilities(kind: ModelKind, phi1, phi2, delta=0.0) -> OutcomeDistribution:
    """Channel probabilities of each sampling law, averaged over the hidden angle."""
    kind = ModelKind(kind)
    if kind is ModelKind.PHASE:
        return model.coincidence_probabilities(phi1, phi2, delta)
    x = np.subtract(phi1, phi2) - delta
    if kind is ModelKind.BELL_DETERMINISTIC:
        same = 0.5 * (1.0 - 2.0 * _folded_difference(x) / math.pi)
        diff = 0.5 - same
    else:
        same = 0.25 * (1.0 + 0.5 * np.cos(2.0 * x))
        diff = 0.25 * (1.0 - 0.5 * np.cos(2.0 * x))
    return OutcomeDistribution(same, same, diff, diff)


def analytic_correlation(kind: ModelKind, phi1, phi2, delta=0.0):
    p = analytic_probabilities(kind, phi1, phi2, delta)
    return p.pp + p.mm - p.pm - p.mp


def analytic_chsh(kind: ModelKind, phi1, phi1p, phi2, phi2p, delta=0.0):
    terms = model.chsh_terms(phi1, phi1p, phi2, phi2p)
    return sum(sign * analytic_correlation(kind, a, b, delta) for sign, (a, b) in zip(model.CHSH_SIGNS, terms))


# --------------------------------------------------------------- grid scan


class ScanResult(NamedTuple):
    max_abs_s: float
    std_err: float
    argmax: tuple[float, float, float, float]
    s: np.ndarray
    s_err: np.ndarray


def scan_chsh(base: ExperimentConfig, angles) -> ScanResult:
    """Monte Carlo CHSH over all quadruples of `angles`.

    Correlations are estimated once per setting pair (tags 100 + i*len + j) and
    combined; ``s[i, ip, j, jp]`` is S(angles[i], angles[ip], angles[j], angles[jp]).
    """
    a = np.asarray(angles, dtype=float)
    m = len(a)
    e = np.empty((m, m))
    se = np.empty((m, m))
    for i in range(m):
        for j in range(m):
            est = estimate_correlation(
                run_experiment(replace(base, phi1=float(a[i]), phi2=float(a[j])), tag=100 + i * m + j))
            e[i, j], se[i, j] = est.e_hat, est.std_err
    s = e[:, None, :, None] - e[:, None, None, :] + e[None, :, :, None] + e[None, :, None, :]
    v = se**2
    s_err = np.sqrt(v[:, None, :, None] + v[:, None, None, :] + v[None, :, :, None] + v[None, :, None, :])
    idx = np.unravel_index(np.argmax(np.abs(s)), s.shape)
    return ScanResult(float(abs(s[idx])), float(s_err[idx]), tuple(float(a[k]) for k in idx), s, s_err)

"""Sphere-averaged qubit bounds: closed forms, Monte Carlo estimators, crossovers.

Averaging is over independent uniform unit axes for both observables.  The
pair average depends on the state only through its purity (the average is
invariant under simultaneous rotations), so Monte Carlo fixes the state
direction along z without bias.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import bisect

from ._parallel import pairwise_reduce
from .bounds import qubit_closed_form_batch
from .states import sample_unit_vectors

FIG1_HEADER = "purity,robertson,schrodinger,luo_park,bound1,bound2"

#: Column order of per-sample bound arrays.
BOUND_NAMES = ("robertson", "schrodinger", "luo_park", "bound1", "bound2")

_CHUNK = 1 << 17


@dataclass(frozen=True)
class MCEstimate:
    """Sample mean with its standard error (sample stdev / sqrt(n))."""

    mean: float
    std_error: float
    samples: int

    def z_score(self, target: float) -> float:
        """Studentized deviation from ``target``; infinite when SE is 0 and the mean differs."""
        diff = self.mean - target
        if self.std_error == 0.0:
            return 0.0 if diff == 0.0 else math.copysign(math.inf, diff)
        return diff / self.std_error


@dataclass(frozen=True)
class Moments:
    """Running (count, sum, sum of squares) per column; mergeable."""

    count: int
    total: np.ndarray
    total_sq: np.ndarray

    @classmethod
    def of(cls, values: np.ndarray) -> "Moments":
        values = np.atleast_2d(values)
        return cls(
            count=values.shape[0],
            total=values.sum(axis=0),
            total_sq=(values**2).sum(axis=0),
        )

    def merge(self, other: "Moments") -> "Moments":
        return Moments(
            count=self.count + other.count,
            total=self.total + other.total,
            total_sq=self.total_sq + other.total_sq,
        )

    def estimates(self) -> tuple[MCEstimate, ...]:
        if self.count < 2:
            raise ValueError("need at least 2 samples for a standard error")
        mean = self.total / self.count
        var = np.clip(self.total_sq - self.count * mean**2, 0.0, None) / (self.count - 1)
        se = np.sqrt(var / self.count)
        return tuple(
            MCEstimate(mean=float(m), std_error=float(s), samples=self.count)
            for m, s in zip(mean, se)
        )


def merge_moments(parts: list[Moments]) -> Moments:
    return pairwise_reduce(parts, lambda x, y: x.merge(y))


@dataclass(frozen=True)
class AveragedBounds:
    """The five bounds averaged over all unit observable axes, at fixed purity."""

    purity: float
    robertson: float
    schrodinger: float
    luo_park: float
    bound1: float
    bound2: float

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.robertson, self.schrodinger, self.luo_park, self.bound1, self.bound2]
        )


def averaged_bounds_qubit(purity: float) -> AveragedBounds:
    """Closed-form pair-averaged qubit bounds as functions of purity in [1/2, 1]."""
    p = float(purity)
    if not (0.5 - 1e-12 <= p <= 1.0 + 1e-12):
        raise ValueError(f"purity must lie in [1/2, 1], got {p!r}")
    p = min(max(p, 0.5), 1.0)
    root = math.sqrt(2.0 * p - 1.0)
    robertson = 2.0 * (2.0 * p - 1.0) / 9.0
    schrodinger = robertson + 2.0 * (2.0 * p * p - 4.0 * p + 3.0) / 9.0
    luo_park = robertson + 4.0 / 9.0 * ((1.0 - p) + math.sqrt(2.0 * (1.0 - p))) ** 2
    bound1 = 4.0 / 3.0 * (p - root) / (1.0 + root)
    bound2 = 4.0 / 3.0 * (1.0 - p)
    return AveragedBounds(
        purity=p,
        robertson=robertson,
        schrodinger=schrodinger,
        luo_park=luo_park,
        bound1=bound1,
        bound2=bound2,
    )


def qubit_bound_samples(purity: float, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, 5) per-sample bound values for independent uniform axis pairs.

    Column order follows ``BOUND_NAMES``.  The state is the purity-matching
    Bloch vector along z.
    """
    p = float(purity)
    if not (0.5 - 1e-12 <= p <= 1.0 + 1e-12):
        raise ValueError(f"purity must lie in [1/2, 1], got {p!r}")
    c = np.array([0.0, 0.0, math.sqrt(max(2.0 * p - 1.0, 0.0))])
    a = sample_unit_vectors(3, count, rng)
    b = sample_unit_vectors(3, count, rng)
    cols = qubit_closed_form_batch(a, b, c)
    return np.column_stack([cols[name] for name in BOUND_NAMES])


def qubit_bound_moments(purity: float, count: int, rng: np.random.Generator) -> Moments:
    """Accumulated moments of :func:`qubit_bound_samples` in fixed-size chunks."""
    parts = []
    done = 0
    while done < count:
        n = min(_CHUNK, count - done)
        parts.append(Moments.of(qubit_bound_samples(purity, n, rng)))
        done += n
    return merge_moments(parts)


def monte_carlo_qubit_average(
    purity: float, samples: int, rng: np.random.Generator
) -> tuple[MCEstimate, ...]:
    """Monte Carlo estimate of the pair-averaged qubit bounds at one purity.

    Returns five estimates in ``BOUND_NAMES`` order; each mean matches
    :func:`averaged_bounds_qubit` within a few standard errors.
    """
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    return qubit_bound_moments(purity, samples, rng).estimates()


def crossover_purities() -> tuple[float, float]:
    """Purities where the conjectured averaged bound meets Robertson / Schroedinger.

    Bisection roots of the averaged-bound differences on (1/2, 1); the first
    is exactly 7/8, the second sqrt(3) - 1.
    """

    def against_robertson(p: float) -> float:
        av = averaged_bounds_qubit(p)
        return av.robertson - av.bound2

    def against_schrodinger(p: float) -> float:
        av = averaged_bounds_qubit(p)
        return av.schrodinger - av.bound2

    p_r = float(bisect(against_robertson, 0.5, 1.0, xtol=1e-13))
    p_s = float(bisect(against_schrodinger, 0.5, 1.0, xtol=1e-13))
    return p_r, p_s


@dataclass(frozen=True)
class MomentMatrixEstimate:
    """Entrywise mean/standard-error matrices for sphere second moments."""

    mean: np.ndarray
    std_error: np.ndarray
    samples: int


def sphere_moment_check(dim: int, samples: int, rng: np.random.Generator) -> MomentMatrixEstimate:
    """Estimate <x_j x_k> for x uniform on the unit sphere in R^dim.

    The exact second moments are delta_jk / dim; each row of outer products
    sums to 1 exactly sample by sample.
    """
    if dim < 2:
        raise ValueError(f"dimension must be >= 2, got {dim}")
    if samples < 10_000:
        raise ValueError(f"need at least 10^4 samples, got {samples}")
    parts = []
    done = 0
    while done < samples:
        n = min(_CHUNK, samples - done)
        x = sample_unit_vectors(dim, n, rng)
        outer = np.einsum("ni,nj->nij", x, x).reshape(n, dim * dim)
        parts.append(Moments.of(outer))
        done += n
    merged = merge_moments(parts)
    ests = merged.estimates()
    mean = np.array([e.mean for e in ests]).reshape(dim, dim)
    se = np.array([e.std_error for e in ests]).reshape(dim, dim)
    return MomentMatrixEstimate(mean=mean, std_error=se, samples=merged.count)


def fig1_rows(points: int) -> np.ndarray:
    """(points, 6) table of averaged bounds on a uniform purity grid over [1/2, 1].

    Columns follow ``FIG1_HEADER``.
    """
    if points < 2:
        raise ValueError(f"need at least 2 grid points, got {points}")
    grid = np.linspace(0.5, 1.0, points)
    rows = np.empty((points, 6))
    for i, p in enumerate(grid):
        av = averaged_bounds_qubit(float(p))
        rows[i] = (av.purity, av.robertson, av.schrodinger, av.luo_park, av.bound1, av.bound2)
    return rows

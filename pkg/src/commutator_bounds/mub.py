"""Mutually unbiased observable pairs: construction, bound formulas, sphere averages.

One observable is diagonal in the computational basis (sharing its eigenbasis
with the state); its partner's eigenbasis is encoded by a phase table
theta[j, k] with overlaps e^(i theta[j,k]) / sqrt(d).  The discrete Fourier
phases give a valid pair in every dimension, and the averaged quantities are
independent of which valid phase table is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .averages import MCEstimate, Moments, merge_moments
from .bounds import bound_robertson, bound_schrodinger
from .linalg import frozen
from .states import DensityMatrix, Observable, sample_unit_vectors

FIG2_HEADER = "purity,luo_park_mub_avg,bound2_mub_avg"

_CHUNK = 1 << 16

#: Tolerance on the unitarity of the induced eigenbasis.
BASIS_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class MUBPair:
    """A mutually unbiased observable pair with fixed spectra.

    ``phases[j, k]`` is the phase of the overlap between computational basis
    vector j and the k-th eigenvector of the second observable; the first
    observable is diagonal with eigenvalues ``spectrum_a``.
    """

    dim: int
    phases: np.ndarray
    spectrum_a: np.ndarray
    spectrum_b: np.ndarray

    def basis(self) -> np.ndarray:
        """Unitary whose k-th column is the k-th eigenvector of the second observable."""
        return np.exp(1j * self.phases) / math.sqrt(self.dim)

    def observable_a(self) -> Observable:
        return Observable(np.diag(self.spectrum_a).astype(complex))

    def observable_b(self) -> Observable:
        u = self.basis()
        return Observable((u * self.spectrum_b) @ u.conj().T)


def mub_pair(dim, phases, spectrum_a, spectrum_b, require_unit: bool = True) -> MUBPair:
    """Validate and build a :class:`MUBPair`.

    The phase table must induce an orthonormal basis (unitary overlap
    matrix); with ``require_unit`` the spectra must be unit vectors, the
    normalization used throughout the sphere-averaging formulas.
    """
    d = int(dim)
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    ph = np.asarray(phases, dtype=float)
    if ph.shape != (d, d):
        raise ValueError(f"phase table must have shape ({d}, {d}), got {ph.shape}")
    sa = np.asarray(spectrum_a, dtype=float)
    sb = np.asarray(spectrum_b, dtype=float)
    if sa.shape != (d,) or sb.shape != (d,):
        raise ValueError("spectra must have one eigenvalue per dimension")
    if require_unit:
        for name, s in (("spectrum_a", sa), ("spectrum_b", sb)):
            if abs(float(np.linalg.norm(s)) - 1.0) > 1e-10:
                raise ValueError(f"{name} must be a unit vector, |{name}| = {np.linalg.norm(s)!r}")
    u = np.exp(1j * ph) / math.sqrt(d)
    defect = float(np.linalg.norm(u.conj().T @ u - np.eye(d)))
    if defect > BASIS_TOL:
        raise ValueError(f"phases do not induce an orthonormal eigenbasis (defect {defect:.3e})")
    return MUBPair(dim=d, phases=frozen(ph), spectrum_a=frozen(sa), spectrum_b=frozen(sb))


def fourier_phases(dim: int) -> np.ndarray:
    """Discrete Fourier phase table 2 pi j k / d; valid in every dimension."""
    j = np.arange(dim)
    return 2.0 * np.pi * np.outer(j, j) / dim


def fourier_mub_pair(dim, spectrum_a, spectrum_b, require_unit: bool = True) -> MUBPair:
    """Mutually unbiased pair on the computational / Fourier bases."""
    return mub_pair(dim, fourier_phases(dim), spectrum_a, spectrum_b, require_unit=require_unit)


def mub_sample_columns(
    phases: np.ndarray, lams: np.ndarray, a: np.ndarray, b: np.ndarray
) -> np.ndarray:
    """Per-sample phase-sum evaluation for batches of spectra ``a``, ``b`` (rows).

    Columns: weighted squared commutator norm, Luo-Park second term, and its
    two classical factors.  Works entirely through the overlap phases, never
    building the d x d observables.
    """
    d = phases.shape[0]
    # off-diagonal matrix elements of B in the computational basis
    u = np.exp(1j * phases) / math.sqrt(d)  # u[j, l] = <j|b_l>
    b_elems = np.einsum("nl,jl,kl->njk", b.astype(complex), u, u.conj())
    g = np.abs(b_elems) ** 2  # |<j|B|k>|^2

    a_sq = a**2
    sqrt_lam = np.sqrt(lams)

    # |[A,B]|_rho^2 = sum_jk lam_k a_j (a_j - 2 a_k) |<j|B|k>|^2 + sum_j lam_j a_j^2 <j|B^2|j>
    term1 = np.einsum("nj,njk,k->n", a_sq, g, lams) - 2.0 * np.einsum(
        "nj,njk,nk,k->n", a, g, a, lams
    )
    term2 = (a_sq @ lams) * np.einsum("nl,nl->n", b, b) / d
    comm_norm = term1 + term2

    factor_a = a_sq @ lams - (a @ lams) ** 2
    diag_b = np.einsum("njj->nj", b_elems).real
    factor_b = np.einsum("j,njk,k->n", sqrt_lam, g, sqrt_lam) - (diag_b @ lams) ** 2
    np.clip(factor_a, 0.0, None, out=factor_a)
    np.clip(factor_b, 0.0, None, out=factor_b)

    return np.column_stack([comm_norm, factor_a * factor_b, factor_a, factor_b])


def mub_commutator_norm(pair: MUBPair, lams) -> float:
    """State-weighted squared commutator norm via the double phase sum.

    Agrees with the matrix path (building both observables and the diagonal
    state explicitly) within 1e-9.
    """
    lam = np.asarray(lams, dtype=float)
    cols = mub_sample_columns(
        np.asarray(pair.phases), lam, pair.spectrum_a[None, :], pair.spectrum_b[None, :]
    )
    return float(cols[0, 0])


def mub_vanishing_check(pair: MUBPair, rho_spectrum) -> tuple[float, float]:
    """Robertson and Schroedinger bounds when the state commutes with the first observable.

    Both vanish (below 1e-10) for every spectrum: a mutually unbiased pair's
    complementarity is invisible to them.
    """
    rho = DensityMatrix.from_spectrum(rho_spectrum)
    a = pair.observable_a()
    b = pair.observable_b()
    return (bound_robertson(a, b, rho), bound_schrodinger(a, b, rho))


def mub_lp_average(lams) -> float:
    """Pair-averaged Luo-Park bound for a mutually unbiased pair, given the state spectrum.

    (1 - sum lam^2) ((sum sqrt(lam))^2 - 1) / d^3.
    """
    lam = np.asarray(lams, dtype=float)
    d = lam.shape[0]
    return float((1.0 - lam @ lam) * (np.sqrt(lam).sum() ** 2 - 1.0) / d**3)


def mub_b2_average(lams) -> float:
    """Pair-averaged conjectured bound: lam1 lam2 / (lam1 + lam2) * 2 (d-1) / d^3."""
    lam = np.sort(np.asarray(lams, dtype=float))
    d = lam.shape[0]
    denom = float(lam[0] + lam[1])
    if denom <= 0.0:
        return 0.0
    return float(lam[0] * lam[1] / denom) * mub_commutator_norm_average(d)


def mub_commutator_norm_average(dim: int) -> float:
    """Average of the weighted squared commutator norm over both unit spectra.

    2 (d - 1) / d^3, independent of the state spectrum and the phase table.
    """
    d = int(dim)
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return 2.0 * (d - 1) / d**3


@dataclass(frozen=True)
class MubAverages:
    """Monte Carlo estimates for a mutually unbiased pair with random unit spectra."""

    comm_norm: MCEstimate
    lp_term: MCEstimate
    lp_factor_a: MCEstimate
    lp_factor_b: MCEstimate


def mub_mc_moments(
    phases: np.ndarray, lams: np.ndarray, samples: int, rng: np.random.Generator
) -> Moments:
    """Accumulated moments of the four per-sample columns in fixed-size chunks."""
    d = phases.shape[0]
    parts = []
    done = 0
    while done < samples:
        n = min(_CHUNK, samples - done)
        a = sample_unit_vectors(d, n, rng)
        b = sample_unit_vectors(d, n, rng)
        parts.append(Moments.of(mub_sample_columns(phases, lams, a, b)))
        done += n
    return merge_moments(parts)


def mc_mub_average(
    dim: int, lams, samples: int, rng: np.random.Generator, phases: np.ndarray | None = None
) -> MubAverages:
    """Monte Carlo averages over independent uniform unit spectra of both observables.

    The commutator-norm mean matches :func:`mub_commutator_norm_average`, the
    Luo-Park term matches :func:`mub_lp_average`, and the factors match
    (1 - sum lam^2)/d and ((sum sqrt(lam))^2 - 1)/d^2.
    """
    if samples < 10_000:
        raise ValueError(f"need at least 10^4 samples, got {samples}")
    lam = np.asarray(lams, dtype=float)
    if lam.shape != (dim,):
        raise ValueError(f"spectrum must have {dim} entries, got shape {lam.shape}")
    ph = fourier_phases(dim) if phases is None else np.asarray(phases, dtype=float)
    ests = mub_mc_moments(ph, lam, samples, rng).estimates()
    return MubAverages(comm_norm=ests[0], lp_term=ests[1], lp_factor_a=ests[2], lp_factor_b=ests[3])


def qubit_mub_theta_lp(purity: float, theta: float) -> float:
    """Luo-Park bound for a mutually unbiased qubit pair with the state in their plane.

    With q = sqrt(2 (1 - P)) the value is
    q^2 (1 + (q - 1) cos^2 theta)(1 + (q - 1) sin^2 theta): largest at
    theta = pi/4 where it reaches q^2 (1 + q)^2 / 4, smallest at theta = 0
    where it reduces to q^3.  It never exceeds the conjectured bound
    2 (1 - P).
    """
    p = float(purity)
    if not (0.5 - 1e-12 <= p <= 1.0 + 1e-12):
        raise ValueError(f"purity must lie in [1/2, 1], got {p!r}")
    q = math.sqrt(max(2.0 * (1.0 - p), 0.0))
    return q**2 * (1.0 + (q - 1.0) * math.cos(theta) ** 2) * (
        1.0 + (q - 1.0) * math.sin(theta) ** 2
    )


def qubit_spectrum_from_purity(purity: float) -> np.ndarray:
    """Ascending qubit spectrum ((1 - r)/2, (1 + r)/2) with r = sqrt(2P - 1)."""
    p = float(purity)
    if not (0.5 - 1e-12 <= p <= 1.0 + 1e-12):
        raise ValueError(f"purity must lie in [1/2, 1], got {p!r}")
    r = math.sqrt(max(2.0 * p - 1.0, 0.0))
    return np.array([(1.0 - r) / 2.0, (1.0 + r) / 2.0])


def fig2_rows(points: int) -> np.ndarray:
    """(points, 3) table of mutually-unbiased-pair averages over a qubit purity grid.

    Columns follow ``FIG2_HEADER``: purity, Luo-Park average, conjectured
    bound average.  The second column never exceeds the third.
    """
    if points < 2:
        raise ValueError(f"need at least 2 grid points, got {points}")
    grid = np.linspace(0.5, 1.0, points)
    rows = np.empty((points, 3))
    for i, p in enumerate(grid):
        lam = qubit_spectrum_from_purity(float(p))
        rows[i] = (float(p), mub_lp_average(lam), mub_b2_average(lam))
    return rows

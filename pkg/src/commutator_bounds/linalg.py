"""Dense complex matrix primitives used by every other module.

All functions operate on plain complex ``numpy`` arrays.  Wherever a matrix
argument is expected, any object exposing a ``.matrix`` attribute (density
matrices, observables) is accepted as well, which keeps this module free of
upward imports.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import (
    DimensionMismatchError,
    EigensolverError,
    NotHermitianError,
    NumericalConsistencyError,
)

#: Absolute Frobenius tolerance for accepting a matrix as Hermitian.
HERMITICITY_TOL = 1e-10

#: Largest imaginary residue tolerated on analytically-real traces.
IMAG_RESIDUE_TOL = 1e-9

#: Real parts of nonnegative quantities below this are treated as round-off.
ROUNDOFF_FLOOR = -1e-12


def as_matrix(a, name: str = "matrix") -> np.ndarray:
    """Coerce ``a`` (array-like or ``.matrix``-bearing object) to a square complex array."""
    arr = np.asarray(getattr(a, "matrix", a), dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise DimensionMismatchError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def require_same_dim(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionMismatchError(f"dimension mismatch: {a.shape} vs {b.shape}")


def frozen(arr: np.ndarray) -> np.ndarray:
    """Return a write-protected copy of ``arr``."""
    out = np.array(arr)
    out.setflags(write=False)
    return out


def commutator(a, b) -> np.ndarray:
    """[A, B] = AB - BA.  Anti-Hermitian whenever A and B are Hermitian."""
    am = as_matrix(a, "A")
    bm = as_matrix(b, "B")
    require_same_dim(am, bm)
    return am @ bm - bm @ am


def anticommutator(a, b) -> np.ndarray:
    """{A, B} = AB + BA."""
    am = as_matrix(a, "A")
    bm = as_matrix(b, "B")
    require_same_dim(am, bm)
    return am @ bm + bm @ am


def frobenius_norm_sq(a) -> float:
    """Sum of squared entry magnitudes, equal to Tr(A^dag A)."""
    am = as_matrix(a, "A")
    return float(np.sum(np.abs(am) ** 2))


def weighted_inner_product(a, b, weight) -> complex:
    """Semi-inner product Tr(A^dag B W) against a positive-semidefinite weight.

    Conjugate-symmetric, linear in the second argument, and the induced
    quadratic form is nonnegative for any PSD weight.  ``weight`` is usually
    a density matrix; the identity recovers the Hilbert-Schmidt product.
    """
    am = as_matrix(a, "A")
    bm = as_matrix(b, "B")
    wm = as_matrix(weight, "weight")
    require_same_dim(am, bm)
    require_same_dim(am, wm)
    return complex(np.einsum("ji,jk,ki->", am.conj(), bm, wm))


def weighted_norm_sq(a, weight) -> float:
    """Squared weighted Frobenius semi-norm Tr(A^dag A W).

    The imaginary residue is checked against ``IMAG_RESIDUE_TOL`` and then
    discarded; real parts inside the round-off floor are clipped to zero.
    """
    value = weighted_inner_product(a, a, weight)
    if abs(value.imag) > IMAG_RESIDUE_TOL:
        raise NumericalConsistencyError(
            f"weighted norm has imaginary residue {value.imag:.3e} (tol {IMAG_RESIDUE_TOL:.1e})"
        )
    real = value.real
    if real < 0.0:
        if real < ROUNDOFF_FLOOR:
            raise NumericalConsistencyError(f"weighted norm is negative: {real:.3e}")
        real = 0.0
    return real


def hermiticity_defect(a) -> float:
    """Frobenius norm of A - A^dag."""
    am = as_matrix(a, "A")
    return float(np.linalg.norm(am - am.conj().T))


def require_hermitian(a, tol: float = HERMITICITY_TOL, name: str = "matrix") -> np.ndarray:
    """Validate Hermiticity within ``tol`` (absolute, Frobenius) and symmetrize.

    Inputs inside tolerance are returned as (A + A^dag)/2 so that round-off
    from upstream arithmetic never leaks into spectral routines.
    """
    am = as_matrix(a, name)
    defect = float(np.linalg.norm(am - am.conj().T))
    if defect > tol:
        raise NotHermitianError(f"{name} deviates from Hermitian by {defect:.3e} (tol {tol:.1e})")
    return (am + am.conj().T) / 2.0


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with matching orthonormal eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return int(self.values.shape[0])

    def reconstruct(self) -> np.ndarray:
        """Rebuild the matrix as sum_i values[i] |v_i><v_i|."""
        return (self.vectors * self.values) @ self.vectors.conj().T


def _degenerate_clusters(values: np.ndarray) -> list[tuple[int, int]]:
    scale = max(1.0, float(np.max(np.abs(values))))
    gap_tol = 1e-9 * scale
    clusters = []
    start = 0
    for i in range(1, values.shape[0]):
        if values[i] - values[i - 1] > gap_tol:
            clusters.append((start, i))
            start = i
    clusters.append((start, values.shape[0]))
    return clusters


def _canonical_gauge(values: np.ndarray, vectors: np.ndarray) -> np.ndarray:
    """Fix the eigenvector gauge so output depends only on the input matrix.

    Degenerate clusters are re-spanned by Gram-Schmidt over projections of
    the canonical basis vectors (in basis order); afterwards each column is
    rotated so its largest-magnitude component lies on the positive real
    axis.  Consumers must still treat the gauge as arbitrary.
    """
    out = vectors.copy()
    d = out.shape[0]
    for lo, hi in _degenerate_clusters(values):
        size = hi - lo
        if size <= 1:
            continue
        block = out[:, lo:hi]
        proj = block @ block.conj().T
        chosen: list[np.ndarray] = []
        for i in range(d):
            w = proj[:, i].copy()
            for _ in range(2):  # second pass keeps orthogonality tight
                for u in chosen:
                    w -= u * (u.conj() @ w)
            nrm = float(np.linalg.norm(w))
            if nrm > 1e-6:
                chosen.append(w / nrm)
            if len(chosen) == size:
                break
        if len(chosen) == size:
            out[:, lo:hi] = np.column_stack(chosen)
    idx = np.argmax(np.abs(out), axis=0)
    lead = out[idx, np.arange(out.shape[1])]
    out = out * (lead.conj() / np.abs(lead))
    return out


def hermitian_eigensystem(h, tol: float = HERMITICITY_TOL) -> EigenSystem:
    """Eigendecomposition of a Hermitian matrix with a deterministic gauge.

    The input is symmetrized after a Hermiticity check, decomposed with
    LAPACK, and gauge-fixed via :func:`_canonical_gauge` so repeated calls on
    equal inputs return identical arrays.
    """
    hm = require_hermitian(h, tol=tol, name="H")
    try:
        values, vectors = np.linalg.eigh(hm)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(
            f"eigensolver did not converge for a {hm.shape[0]}x{hm.shape[0]} matrix: {exc}"
        ) from exc
    vectors = _canonical_gauge(values, vectors)
    return EigenSystem(values=frozen(values), vectors=frozen(vectors))

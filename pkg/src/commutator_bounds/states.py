"""Validated density matrices and observables, Bloch conversions, random sampling.

Sampling routines take an explicit ``numpy.random.Generator`` so callers own
the stream; nothing here touches global RNG state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionMismatchError, InvalidStateError, NotHermitianError
from .linalg import frozen, hermitian_eigensystem, require_hermitian

#: Eigenvalues below this are rejected; the band [floor, 0) is clipped to 0.
EIGENVALUE_FLOOR = -1e-12

#: Allowed deviation of the trace from 1 before rejection.
TRACE_TOL = 1e-10

#: Allowed overshoot of |c| beyond the Bloch ball.
BLOCH_TOL = 1e-12

PAULI_X = frozen(np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex))
PAULI_Y = frozen(np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex))
PAULI_Z = frozen(np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex))
PAULIS = frozen(np.stack([PAULI_X, PAULI_Y, PAULI_Z]))


class DensityMatrix:
    """A validated quantum state with cached spectral data.

    Construction symmetrizes the input, rejects it unless it is Hermitian
    within 1e-10, every eigenvalue is above ``EIGENVALUE_FLOOR``, and the
    trace is 1 within ``TRACE_TOL``.  Round-off-negative eigenvalues are
    clipped to zero and the spectrum renormalized (keeping the square root
    real).  The ascending spectrum, eigenvectors, matrix square root, and
    purity are cached; all arrays are write-protected, so instances are safe
    to share between concurrent tasks.
    """

    __slots__ = ("_matrix", "_spectrum", "_vectors", "_sqrt_matrix", "_purity")

    def __init__(self, matrix) -> None:
        try:
            sym = require_hermitian(matrix, name="density matrix")
        except NotHermitianError as exc:
            raise InvalidStateError(str(exc)) from exc
        eig = hermitian_eigensystem(sym)
        lam = np.array(eig.values)
        if float(lam.min()) < EIGENVALUE_FLOOR:
            raise InvalidStateError(
                f"density matrix has negative eigenvalue {float(lam.min()):.3e}"
            )
        lam = np.clip(lam, 0.0, None)
        total = float(lam.sum())
        if abs(total - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"density matrix trace is {total!r}, expected 1")
        lam /= total
        vec = eig.vectors
        mat = (vec * lam) @ vec.conj().T
        sqrt_mat = (vec * np.sqrt(lam)) @ vec.conj().T
        self._matrix = frozen((mat + mat.conj().T) / 2.0)
        self._sqrt_matrix = frozen((sqrt_mat + sqrt_mat.conj().T) / 2.0)
        self._spectrum = frozen(lam)
        self._vectors = vec
        self._purity = float(lam @ lam)

    @classmethod
    def from_bloch(cls, c) -> "DensityMatrix":
        """Qubit state (I + c . sigma)/2 for a Bloch vector inside the unit ball."""
        cv = np.asarray(c, dtype=float)
        if cv.shape != (3,):
            raise InvalidStateError(f"Bloch vector must have 3 components, got shape {cv.shape}")
        if float(np.linalg.norm(cv)) > 1.0 + BLOCH_TOL:
            raise InvalidStateError(f"Bloch vector has length {np.linalg.norm(cv)!r} > 1")
        mat = 0.5 * (np.eye(2, dtype=complex) + np.einsum("k,kij->ij", cv, PAULIS))
        return cls(mat)

    @classmethod
    def from_spectrum(cls, spectrum) -> "DensityMatrix":
        """Diagonal state with the given eigenvalues (order preserved in the matrix)."""
        lam = np.asarray(spectrum, dtype=float)
        if lam.ndim != 1 or lam.shape[0] < 1:
            raise InvalidStateError(f"spectrum must be a 1-d sequence, got shape {lam.shape}")
        if float(lam.min()) < EIGENVALUE_FLOOR:
            raise InvalidStateError(f"spectrum has negative entry {float(lam.min()):.3e}")
        total = float(lam.sum())
        if abs(total - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"spectrum sums to {total!r}, expected 1")
        return cls(np.diag(np.clip(lam, 0.0, None) / total).astype(complex))

    @classmethod
    def maximally_mixed(cls, dim: int) -> "DensityMatrix":
        return cls(np.eye(dim, dtype=complex) / dim)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[0])

    @property
    def spectrum(self) -> np.ndarray:
        """Eigenvalues in ascending order, clipped and renormalized."""
        return self._spectrum

    @property
    def eigenvectors(self) -> np.ndarray:
        """Orthonormal eigenvector columns matching :attr:`spectrum` (gauge is arbitrary)."""
        return self._vectors

    @property
    def sqrt_matrix(self) -> np.ndarray:
        return self._sqrt_matrix

    @property
    def purity(self) -> float:
        return self._purity

    @property
    def lambda_min(self) -> float:
        return float(self._spectrum[0])

    @property
    def lambda_second_min(self) -> float:
        if self.dim < 2:
            raise DimensionMismatchError("second smallest eigenvalue needs dim >= 2")
        return float(self._spectrum[1])

    @property
    def lambda_max(self) -> float:
        return float(self._spectrum[-1])

    def bloch_vector(self) -> np.ndarray:
        """Bloch components Tr(rho sigma_k); qubits only."""
        if self.dim != 2:
            raise DimensionMismatchError(f"Bloch vector defined for dim 2, not {self.dim}")
        return np.einsum("kij,ji->k", PAULIS, self._matrix).real

    def __repr__(self) -> str:
        return f"DensityMatrix(dim={self.dim}, purity={self._purity:.6f})"


def spectral_summary(rho: DensityMatrix) -> tuple[float, float, float, float]:
    """(smallest, second smallest, largest eigenvalue, purity) of a state."""
    return (rho.lambda_min, rho.lambda_second_min, rho.lambda_max, rho.purity)


class Observable:
    """A Hermitian matrix representing a measurable quantity."""

    __slots__ = ("_matrix",)

    def __init__(self, matrix) -> None:
        self._matrix = frozen(require_hermitian(matrix, name="observable"))

    @classmethod
    def from_bloch(cls, vec, a0: float = 0.0) -> "Observable":
        """Qubit observable a0*I + a . sigma."""
        av = np.asarray(vec, dtype=float)
        if av.shape != (3,):
            raise DimensionMismatchError(f"axis must have 3 components, got shape {av.shape}")
        mat = a0 * np.eye(2, dtype=complex) + np.einsum("k,kij->ij", av, PAULIS)
        return cls(mat)

    @property
    def matrix(self) -> np.ndarray:
        return self._matrix

    @property
    def dim(self) -> int:
        return int(self._matrix.shape[0])

    def bloch(self) -> "BlochVector":
        """Decompose a qubit observable as a0*I + a . sigma."""
        if self.dim != 2:
            raise DimensionMismatchError(f"Bloch decomposition defined for dim 2, not {self.dim}")
        a0 = float(np.trace(self._matrix).real) / 2.0
        vec = np.einsum("kij,ji->k", PAULIS, self._matrix).real / 2.0
        return BlochVector(a0=a0, vec=frozen(vec))

    def __repr__(self) -> str:
        return f"Observable(dim={self.dim})"


@dataclass(frozen=True, eq=False)
class BlochVector:
    """Pauli expansion coefficients of a qubit observable: a0*I + vec . sigma."""

    a0: float
    vec: np.ndarray = field(repr=False)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.vec))

    def to_observable(self) -> Observable:
        return Observable.from_bloch(self.vec, a0=self.a0)


def sample_unit_vectors(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` rows drawn uniformly (Haar) from the unit sphere in R^dim.

    Normalized standard Gaussian vectors; robust in any dimension, unlike
    rejection sampling.
    """
    g = rng.standard_normal((count, dim))
    norms = np.linalg.norm(g, axis=1, keepdims=True)
    # A zero draw has probability zero but would poison the batch.
    bad = norms[:, 0] < 1e-12
    while np.any(bad):
        g[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(g, axis=1, keepdims=True)
        bad = norms[:, 0] < 1e-12
    return g / norms


def sample_unit_vector(dim: int, rng: np.random.Generator) -> np.ndarray:
    return sample_unit_vectors(dim, 1, rng)[0]


def sample_density(dim: int, spec, rng: np.random.Generator) -> DensityMatrix:
    """Draw a random state.

    ``spec`` selects the ensemble:

    - ``"hilbert-schmidt"``: G G^dag / Tr(G G^dag) with complex Gaussian G
      (generic full states, the default ensemble for comparisons);
    - ``"flat-simplex"``: diagonal state with Dirichlet(1, ..., 1) spectrum,
      sorted ascending (spectra uniform on the simplex);
    - a sequence of floats: diagonal state with exactly that spectrum.
    """
    if dim < 2:
        raise DimensionMismatchError(f"state dimension must be >= 2, got {dim}")
    if isinstance(spec, str):
        key = spec.lower().replace("_", "-")
        if key == "hilbert-schmidt":
            g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
            w = g @ g.conj().T
            return DensityMatrix(w / np.trace(w).real)
        if key == "flat-simplex":
            lam = np.sort(rng.dirichlet(np.ones(dim)))
            return DensityMatrix.from_spectrum(lam)
        raise InvalidStateError(f"unknown sampling spec {spec!r}")
    return DensityMatrix.from_spectrum(spec)


def sample_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> Observable:
    """Random Hermitian observable (G + G^dag)/2 with complex Gaussian G."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return Observable(scale * (g + g.conj().T) / 2.0)


def sample_observable_unit(dim: int, rng: np.random.Generator) -> Observable:
    """Observable with a unit eigenvalue/axis vector drawn uniformly on the sphere.

    For qubits this is a . sigma with a uniform on S^2 (traceless, squared
    Frobenius norm 2).  For dim >= 3 it is the diagonal matrix whose
    eigenvalue vector is uniform on S^(dim-1), the convention used for
    unbiased-pair averaging.
    """
    if dim < 2:
        raise DimensionMismatchError(f"observable dimension must be >= 2, got {dim}")
    if dim == 2:
        a = sample_unit_vector(3, rng)
        return Observable.from_bloch(a)
    eigs = sample_unit_vector(dim, rng)
    return Observable(np.diag(eigs).astype(complex))


def sample_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary via QR of a complex Ginibre matrix with phase fixing."""
    g = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2.0)
    q, r = np.linalg.qr(g)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def sample_hermitian_batch(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, dim, dim) stack of Gaussian Hermitian matrices, for bulk corpora.

    Raw arrays for the vectorized evaluation paths; matches the ensemble of
    :func:`sample_hermitian` entry for entry.
    """
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    return (g + g.conj().transpose(0, 2, 1)) / 2.0


def sample_density_batch(dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
    """(count, dim, dim) stack of random full states, G G^dag normalized to unit trace.

    Same ensemble as ``sample_density(dim, "hilbert-schmidt", rng)`` but as
    raw arrays without per-state validation, for bulk corpora.
    """
    g = rng.standard_normal((count, dim, dim)) + 1j * rng.standard_normal((count, dim, dim))
    w = g @ g.conj().transpose(0, 2, 1)
    traces = np.einsum("nii->n", w).real
    return w / traces[:, None, None]

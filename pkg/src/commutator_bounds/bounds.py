"""Variances, skew information, and the five variance-product lower bounds.

The scalar functions follow the defining formulas one observable pair at a
time; :func:`batch_bounds` evaluates the same quantities vectorized over
stacked triples for large corpora.  Both paths center the observables before
taking traces, which makes every nonnegative quantity a trace of a Hermitian
square and keeps round-off from manufacturing sign violations.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np

from .errors import InvalidStateError, NumericalConsistencyError
from .linalg import (
    as_matrix,
    commutator,
    require_same_dim,
    weighted_norm_sq,
)
from .states import DensityMatrix, BlochVector

logger = logging.getLogger(__name__)

#: Classical-uncertainty factors this far below zero are treated as round-off.
FACTOR_FLOOR = -1e-12

#: Slack for flagging violations of the conjectured inequality.
CONJECTURE_SLACK = 1e-9

#: Relative slack allowed on the proven inequalities before counting a violation.
HARD_SLACK = 1e-10

#: Largest imaginary residue tolerated on an expectation value.
EXPECTATION_IMAG_TOL = 1e-10

#: Tolerance for the internal ordering checks of a bound report.
ORDERING_SLACK = 1e-12


def _state_matrix(rho) -> np.ndarray:
    return as_matrix(rho, "rho")


def expectation(x, rho) -> float:
    """<X> = Tr(X rho), required to be real within 1e-10."""
    xm = as_matrix(x, "X")
    rm = _state_matrix(rho)
    require_same_dim(xm, rm)
    value = complex(np.einsum("ij,ji->", xm, rm))
    if abs(value.imag) > EXPECTATION_IMAG_TOL:
        raise NumericalConsistencyError(f"expectation has imaginary residue {value.imag:.3e}")
    return value.real


def _centered(x, rho) -> np.ndarray:
    xm = as_matrix(x, "X")
    return xm - expectation(xm, rho) * np.eye(xm.shape[0])


def variance(x, rho) -> float:
    """V(X) = Tr(X^2 rho) - <X>^2, evaluated as the weighted norm of X - <X> I."""
    return weighted_norm_sq(_centered(x, rho), rho)


def skew_information(x, rho: DensityMatrix) -> float:
    """Tr(X^2 rho) - Tr(sqrt(rho) X sqrt(rho) X): the quantum part of the variance."""
    xm = as_matrix(x, "X")
    rm = _state_matrix(rho)
    require_same_dim(xm, rm)
    sm = rho.sqrt_matrix
    square = complex(np.einsum("ij,jk,ki->", xm, xm, rm))
    cross = complex(np.einsum("ij,jk,kl,li->", sm, xm, sm, xm))
    value = square.real - cross.real
    if value < 0.0:
        if value < FACTOR_FLOOR:
            raise NumericalConsistencyError(f"skew information is negative: {value:.3e}")
        value = 0.0
    return value


def classical_uncertainty(x, rho: DensityMatrix) -> float:
    """C(X) = V(X) - skew(X) = Tr(sqrt(rho) X' sqrt(rho) X') for centered X'.

    Nonnegative analytically; values inside the round-off floor are clipped,
    anything lower raises.
    """
    xc = _centered(x, rho)
    sm = rho.sqrt_matrix
    value = complex(np.einsum("ij,jk,kl,li->", sm, xc, sm, xc)).real
    if value < 0.0:
        if value < FACTOR_FLOOR:
            raise NumericalConsistencyError(f"classical uncertainty is negative: {value:.3e}")
        value = 0.0
    return value


def _centered_cross(a, b, rho) -> complex:
    """Tr(A' B' rho) for centered A', B'; encodes both commutator and covariance terms."""
    am = as_matrix(a, "A")
    bm = as_matrix(b, "B")
    rm = _state_matrix(rho)
    require_same_dim(am, bm)
    require_same_dim(am, rm)
    ac = am - expectation(am, rho) * np.eye(am.shape[0])
    bc = bm - expectation(bm, rho) * np.eye(bm.shape[0])
    return complex(np.einsum("ij,jk,ki->", ac, bc, rm))


def bound_robertson(a, b, rho) -> float:
    """|Tr([A,B] rho)|^2 / 4."""
    return _centered_cross(a, b, rho).imag ** 2


def bound_schrodinger(a, b, rho) -> float:
    """Robertson bound plus the squared symmetrized covariance."""
    return abs(_centered_cross(a, b, rho)) ** 2


def bound_luo_park(a, b, rho: DensityMatrix) -> float:
    """Robertson bound plus the product of classical uncertainties C(A) C(B)."""
    return bound_robertson(a, b, rho) + classical_uncertainty(a, rho) * classical_uncertainty(
        b, rho
    )


def bound_one(a, b, rho: DensityMatrix) -> float:
    """Proven commutator-norm bound: lam_min^2 / (2 lam_max) * |[A,B]|_rho^2."""
    lam = rho.spectrum
    return float(lam[0]) ** 2 / (2.0 * float(lam[-1])) * weighted_norm_sq(commutator(a, b), rho)


def bound_two(a, b, rho: DensityMatrix) -> float:
    """Conjectured commutator-norm bound with prefactor lam1 lam2 / (lam1 + lam2).

    For qubits the prefactor reduces to lam1 lam2.  States with two vanishing
    eigenvalues make the prefactor 0/0; the bound is then 0.
    """
    lam = rho.spectrum
    denom = float(lam[0]) + float(lam[1])
    if denom <= 0.0:
        logger.debug("bound prefactor degenerate: two zero eigenvalues, returning 0")
        return 0.0
    factor = float(lam[0]) * float(lam[1]) / denom
    return factor * weighted_norm_sq(commutator(a, b), rho)


@dataclass(frozen=True)
class BoundReport:
    """All five lower bounds next to the variance product for one (A, B, rho) triple.

    ``conjecture_ok`` is False when the conjectured bound exceeds the product
    beyond ``CONJECTURE_SLACK``; such triples are never silently accepted.
    """

    dim: int
    purity: float
    product: float
    robertson: float
    schrodinger: float
    luo_park: float
    bound1: float
    bound2: float
    conjecture_ok: bool


def _check_ordering(lo: float, hi: float, label: str) -> None:
    if lo - hi > ORDERING_SLACK * max(1.0, abs(lo), abs(hi)):
        raise NumericalConsistencyError(f"bound ordering violated: {label} ({lo!r} > {hi!r})")


def bound_report(a, b, rho: DensityMatrix) -> BoundReport:
    """Evaluate every bound for one triple and validate the internal orderings."""
    robertson = bound_robertson(a, b, rho)
    schrodinger = bound_schrodinger(a, b, rho)
    luo_park = bound_luo_park(a, b, rho)
    b1 = bound_one(a, b, rho)
    b2 = bound_two(a, b, rho)
    product = variance(a, rho) * variance(b, rho)
    _check_ordering(robertson, schrodinger, "robertson <= schrodinger")
    _check_ordering(robertson, luo_park, "robertson <= luo_park")
    _check_ordering(b1, b2, "bound1 <= bound2")
    conjecture_ok = b2 - product <= CONJECTURE_SLACK * max(1.0, product)
    if not conjecture_ok:
        logger.warning("conjectured inequality violated: bound2=%r product=%r", b2, product)
    return BoundReport(
        dim=rho.dim,
        purity=rho.purity,
        product=product,
        robertson=robertson,
        schrodinger=schrodinger,
        luo_park=luo_park,
        bound1=b1,
        bound2=b2,
        conjecture_ok=conjecture_ok,
    )


def batch_bounds(a: np.ndarray, b: np.ndarray, rho: np.ndarray) -> dict[str, np.ndarray]:
    """Vectorized bound evaluation over stacked triples.

    ``a`` and ``b`` are (n, d, d) Hermitian arrays and ``rho`` an (n, d, d)
    array of valid states; validation is the caller's job on this hot path.
    Returns per-sample arrays for the product, the five bounds, and purity,
    matching the scalar path to machine precision.
    """
    n, d, _ = rho.shape
    eye = np.eye(d)
    lam, vecs = np.linalg.eigh(rho)
    lam = np.clip(lam, 0.0, None)
    sqrt_rho = np.einsum("nij,nj,nkj->nik", vecs, np.sqrt(lam), vecs.conj())

    mean_a = np.einsum("nij,nji->n", a, rho).real
    mean_b = np.einsum("nij,nji->n", b, rho).real
    ac = a - mean_a[:, None, None] * eye
    bc = b - mean_b[:, None, None] * eye

    var_a = np.einsum("nij,njk,nki->n", ac, ac, rho).real
    var_b = np.einsum("nij,njk,nki->n", bc, bc, rho).real
    product = var_a * var_b

    cross = np.einsum("nij,njk,nki->n", ac, bc, rho)
    robertson = cross.imag**2
    schrodinger = robertson + cross.real**2

    cu_a = np.einsum("nij,njk,nkl,nli->n", sqrt_rho, ac, sqrt_rho, ac).real
    cu_b = np.einsum("nij,njk,nkl,nli->n", sqrt_rho, bc, sqrt_rho, bc).real
    lowest = min(float(cu_a.min()), float(cu_b.min()))
    if lowest < FACTOR_FLOOR:
        raise NumericalConsistencyError(f"classical uncertainty is negative: {lowest:.3e}")
    np.clip(cu_a, 0.0, None, out=cu_a)
    np.clip(cu_b, 0.0, None, out=cu_b)
    luo_park = robertson + cu_a * cu_b

    comm = a @ b - b @ a
    comm_norm = np.einsum("nji,njk,nki->n", comm.conj(), comm, rho).real

    lam_m = lam[:, 0]
    lam_sm = lam[:, 1]
    lam_big = lam[:, -1]
    bound1 = lam_m**2 / (2.0 * lam_big) * comm_norm
    denom = lam_m + lam_sm
    with np.errstate(divide="ignore", invalid="ignore"):
        prefactor = np.where(denom > 0.0, lam_m * lam_sm / np.where(denom > 0.0, denom, 1.0), 0.0)
    bound2 = prefactor * comm_norm

    return {
        "product": product,
        "robertson": robertson,
        "schrodinger": schrodinger,
        "luo_park": luo_park,
        "bound1": bound1,
        "bound2": bound2,
        "purity": (lam**2).sum(axis=1),
    }


def violation_masks(cols: dict[str, np.ndarray]) -> dict[str, np.ndarray]:
    """Boolean per-sample masks marking bound values that exceed the product.

    The proven bounds get ``HARD_SLACK`` relative to the bound value; the
    conjectured bound gets ``CONJECTURE_SLACK`` relative to the product.
    """
    product = cols["product"]
    masks = {
        name: cols[name] - product > HARD_SLACK * np.maximum(1.0, cols[name])
        for name in ("robertson", "schrodinger", "luo_park", "bound1")
    }
    masks["bound2"] = cols["bound2"] - product > CONJECTURE_SLACK * np.maximum(1.0, product)
    return masks


def _bloch3(v, name: str, require_unit: bool) -> np.ndarray:
    if isinstance(v, BlochVector):
        if abs(v.a0) > 1e-12:
            raise ValueError(f"{name} must be traceless (a0 = 0), got a0 = {v.a0!r}")
        arr = np.asarray(v.vec, dtype=float)
    else:
        arr = np.asarray(v, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"{name} must have 3 components, got shape {arr.shape}")
    if require_unit and abs(float(np.linalg.norm(arr)) - 1.0) > 1e-10:
        raise ValueError(f"{name} must be a unit vector, |{name}| = {np.linalg.norm(arr)!r}")
    return arr


def qubit_closed_form_batch(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> dict[str, np.ndarray]:
    """Closed-form qubit bounds for unit traceless axes ``a``, ``b`` (rows) and one state.

    ``a``, ``b`` have shape (n, 3); ``c`` is the state's Bloch vector.  The
    Luo-Park factor coefficient vanishes as |c| -> 0, so the otherwise
    ill-defined (a.c)^2/|c|^2 term is taken as 0 below 1e-14.
    """
    c = np.asarray(c, dtype=float)
    r2 = float(c @ c)
    r = np.sqrt(r2)
    s = np.sqrt(max(1.0 - r2, 0.0))
    purity = 0.5 * (1.0 + r2)

    ac = a @ c
    bc = b @ c
    ab = np.einsum("ni,ni->n", a, b)
    cross = np.cross(a, b)
    cross_c = cross @ c
    cross_sq = np.einsum("ni,ni->n", cross, cross)

    robertson = cross_c**2
    schrodinger = robertson + (ab - ac * bc) ** 2

    if r > 1e-14:
        fa = s + (1.0 - r2 - s) * ac**2 / r2
        fb = s + (1.0 - r2 - s) * bc**2 / r2
    else:
        fa = np.full(a.shape[0], s)
        fb = np.full(b.shape[0], s)
    luo_park = robertson + fa * fb

    root = r  # sqrt(2 P - 1)
    bound1 = 2.0 * (purity - root) / (1.0 + root) * cross_sq
    bound2 = 2.0 * (1.0 - purity) * cross_sq
    product = (1.0 - ac**2) * (1.0 - bc**2)

    return {
        "product": product,
        "robertson": robertson,
        "schrodinger": schrodinger,
        "luo_park": luo_park,
        "bound1": bound1,
        "bound2": bound2,
        "purity": np.full(a.shape[0], purity),
    }


def qubit_bounds_closed_form(a, b, c) -> BoundReport:
    """Closed-form qubit bound report for unit traceless axes and a Bloch vector.

    Agrees with the generic matrix path within 1e-10 for every state in the
    Bloch ball.
    """
    av = _bloch3(a, "a", require_unit=True)
    bv = _bloch3(b, "b", require_unit=True)
    cv = np.asarray(c, dtype=float)
    if cv.shape != (3,):
        raise InvalidStateError(f"state Bloch vector must have 3 components, got {cv.shape}")
    if float(cv @ cv) > 1.0 + 2e-12:
        raise InvalidStateError(f"state Bloch vector has length {np.linalg.norm(cv)!r} > 1")
    cols = qubit_closed_form_batch(av[None, :], bv[None, :], cv)
    b2 = float(cols["bound2"][0])
    product = float(cols["product"][0])
    return BoundReport(
        dim=2,
        purity=float(cols["purity"][0]),
        product=product,
        robertson=float(cols["robertson"][0]),
        schrodinger=float(cols["schrodinger"][0]),
        luo_park=float(cols["luo_park"][0]),
        bound1=float(cols["bound1"][0]),
        bound2=b2,
        conjecture_ok=b2 - product <= CONJECTURE_SLACK * max(1.0, product),
    )


def qubit_commutator_norm_identity(a, b) -> float:
    """State-weighted squared commutator norm of two traceless qubit observables.

    Equals 4 |a x b|^2 independently of the state, and half the unweighted
    squared Frobenius norm.  This is special to qubits and does not extend
    to higher dimensions.
    """
    av = _bloch3(a, "a", require_unit=False)
    bv = _bloch3(b, "b", require_unit=False)
    cross = np.cross(av, bv)
    return 4.0 * float(cross @ cross)

"""Bounds engine: variances, skew information, the five bounds, qubit closed forms."""

import numpy as np
import pytest

from commutator_bounds import (
    DensityMatrix,
    Observable,
    PAULI_X,
    PAULI_Y,
    PAULI_Z,
    batch_bounds,
    bound_luo_park,
    bound_one,
    bound_report,
    bound_robertson,
    bound_schrodinger,
    bound_two,
    classical_uncertainty,
    commutator,
    expectation,
    qubit_bounds_closed_form,
    qubit_closed_form_batch,
    qubit_commutator_norm_identity,
    sample_density,
    sample_density_batch,
    sample_hermitian,
    sample_hermitian_batch,
    sample_unit_vectors,
    skew_information,
    variance,
    violation_masks,
    weighted_norm_sq,
)

SEED = 20240903

RHO_QUARTER = DensityMatrix.from_spectrum([0.25, 0.75])
MIXED = DensityMatrix.maximally_mixed(2)
SX = Observable(PAULI_X)
SY = Observable(PAULI_Y)
SZ = Observable(PAULI_Z)


def cross_trace_oracle(x, rho):
    """Tr(sqrt(rho) X sqrt(rho) X) as sum_jk sqrt(lam_j lam_k) |X_jk|^2 in the eigenbasis."""
    lam = rho.spectrum
    vecs = rho.eigenvectors
    xt = vecs.conj().T @ np.asarray(getattr(x, "matrix", x)) @ vecs
    root = np.sqrt(lam)
    return float(np.einsum("j,k,jk->", root, root, np.abs(xt) ** 2))


class TestExpectationVariance:
    def test_pauli_z_at_maximal_mixing(self):
        assert expectation(SZ, MIXED) == pytest.approx(0.0, abs=1e-15)

    def test_pauli_z_on_diagonal_state(self):
        # ascending diag(1/4, 3/4) with sigma_z = diag(1, -1): <sigma_z> = 1/4 - 3/4.
        assert expectation(SZ, RHO_QUARTER) == pytest.approx(-0.5)

    def test_identity_expectation(self):
        rng = np.random.default_rng(SEED)
        rho = sample_density(4, "hilbert-schmidt", rng)
        assert expectation(np.eye(4), rho) == pytest.approx(1.0)

    def test_variance_pauli_x_maximally_mixed(self):
        assert variance(SX, MIXED) == pytest.approx(1.0)

    def test_variance_eigenstate_vanishes(self):
        assert variance(SZ, DensityMatrix.from_bloch([0, 0, 1.0])) == pytest.approx(0.0, abs=1e-12)

    def test_variance_pauli_x_on_diagonal_state(self):
        assert variance(SX, RHO_QUARTER) == pytest.approx(1.0)

    def test_variance_matches_centered_norm(self):
        rng = np.random.default_rng(SEED + 1)
        for _ in range(50):
            d = int(rng.integers(2, 6))
            x = sample_hermitian(d, rng)
            rho = sample_density(d, "hilbert-schmidt", rng)
            centered = x.matrix - expectation(x, rho) * np.eye(d)
            assert variance(x, rho) == pytest.approx(weighted_norm_sq(centered, rho), abs=1e-10)


class TestSkewInformation:
    def test_commuting_pair_vanishes(self):
        assert skew_information(SZ, RHO_QUARTER) == pytest.approx(0.0, abs=1e-13)

    def test_pauli_x_on_diagonal_state(self):
        # 1 - sum_jk sqrt(lam_j lam_k) |X_jk|^2 = 1 - 2 sqrt(3/16) = 1 - sqrt(3)/2
        expected = 1.0 - cross_trace_oracle(SX, RHO_QUARTER)
        assert expected == pytest.approx(1.0 - np.sqrt(3.0) / 2.0, abs=1e-14)
        assert skew_information(SX, RHO_QUARTER) == pytest.approx(expected, abs=1e-12)

    def test_pure_state_skew_equals_variance(self):
        rho = DensityMatrix.from_bloch([0, 0, 1.0])
        assert skew_information(SX, rho) == pytest.approx(1.0, abs=1e-12)
        assert skew_information(SX, rho) == pytest.approx(variance(SX, rho), abs=1e-12)

    def test_between_zero_and_variance(self):
        rng = np.random.default_rng(SEED + 2)
        for _ in range(100):
            d = int(rng.integers(2, 6))
            x = sample_hermitian(d, rng)
            rho = sample_density(d, "hilbert-schmidt", rng)
            skew = skew_information(x, rho)
            assert -1e-12 <= skew <= variance(x, rho) + 1e-10

    def test_classical_uncertainty_oracle(self):
        rng = np.random.default_rng(SEED + 3)
        for _ in range(50):
            d = int(rng.integers(2, 6))
            x = sample_hermitian(d, rng)
            rho = sample_density(d, "hilbert-schmidt", rng)
            expected = cross_trace_oracle(x, rho) - expectation(x, rho) ** 2
            assert classical_uncertainty(x, rho) == pytest.approx(expected, abs=1e-10)


class TestIndividualBounds:
    def test_robertson_trivial_at_maximal_mixing(self):
        assert bound_robertson(SX, SY, MIXED) == pytest.approx(0.0, abs=1e-15)

    def test_robertson_half_z(self):
        rho = DensityMatrix.from_bloch([0, 0, 0.5])
        assert bound_robertson(SX, SY, rho) == pytest.approx(0.25, abs=1e-13)

    def test_robertson_commuting_pair(self):
        rng = np.random.default_rng(SEED + 4)
        rho = sample_density(2, "hilbert-schmidt", rng)
        assert bound_robertson(SZ, SZ, rho) == pytest.approx(0.0, abs=1e-13)

    def test_schrodinger_anticommuting_at_maximal_mixing(self):
        assert bound_schrodinger(SX, SY, MIXED) == pytest.approx(0.0, abs=1e-15)

    def test_schrodinger_half_z(self):
        rho = DensityMatrix.from_bloch([0, 0, 0.5])
        assert bound_schrodinger(SX, SY, rho) == pytest.approx(0.25, abs=1e-13)

    def test_schrodinger_self_pair_is_variance_squared(self):
        rng = np.random.default_rng(SEED + 5)
        for _ in range(20):
            x = sample_hermitian(3, rng)
            rho = sample_density(3, "hilbert-schmidt", rng)
            assert bound_schrodinger(x, x, rho) == pytest.approx(variance(x, rho) ** 2, rel=1e-9)

    def test_luo_park_maximally_mixed(self):
        assert bound_luo_park(SX, SY, MIXED) == pytest.approx(1.0, abs=1e-12)

    def test_luo_park_diagonal_state(self):
        # robertson 1/4 plus factors sqrt(3)/2 each: 1/4 + 3/4 = 1.
        assert bound_luo_park(SX, SY, RHO_QUARTER) == pytest.approx(1.0, abs=1e-12)

    def test_luo_park_pure_state_reduces_to_robertson(self):
        rho = DensityMatrix.from_bloch([0, 0, 1.0])
        assert bound_luo_park(SX, SY, rho) == pytest.approx(
            bound_robertson(SX, SY, rho), abs=1e-11
        )

    def test_bound_one_values(self):
        assert bound_one(SX, SY, MIXED) == pytest.approx(1.0, abs=1e-12)
        assert bound_one(SX, SY, RHO_QUARTER) == pytest.approx(1.0 / 6.0, abs=1e-12)
        pure = DensityMatrix.from_bloch([0, 0, 1.0])
        assert bound_one(SX, SY, pure) == pytest.approx(0.0, abs=1e-12)

    def test_bound_two_values(self):
        assert bound_two(SX, SY, MIXED) == pytest.approx(1.0, abs=1e-12)
        assert bound_two(SX, SY, RHO_QUARTER) == pytest.approx(0.75, abs=1e-12)
        pure = DensityMatrix.from_bloch([0, 0, 1.0])
        assert bound_two(SX, SY, pure) == pytest.approx(0.0, abs=1e-12)

    def test_bound_two_double_degenerate(self):
        rho = DensityMatrix.from_spectrum([0.0, 0.0, 1.0])
        a = sample_hermitian(3, np.random.default_rng(SEED + 6))
        b = sample_hermitian(3, np.random.default_rng(SEED + 7))
        assert bound_two(a, b, rho) == 0.0


class TestBoundReport:
    def test_orderings_and_hard_inequalities(self):
        rng = np.random.default_rng(SEED + 8)
        for _ in range(200):
            d = int(rng.integers(2, 6))
            a = sample_hermitian(d, rng)
            b = sample_hermitian(d, rng)
            rho = sample_density(d, "hilbert-schmidt", rng)
            rep = bound_report(a, b, rho)
            slack = 1e-12 * max(1.0, rep.product)
            assert rep.schrodinger >= rep.robertson - slack
            assert rep.luo_park >= rep.robertson - slack
            assert rep.bound2 >= rep.bound1 - slack
            for value in (rep.robertson, rep.schrodinger, rep.luo_park, rep.bound1):
                assert rep.product >= value - 1e-10 * max(1.0, value)
            assert rep.conjecture_ok

    def test_scale_covariance(self):
        rng = np.random.default_rng(SEED + 9)
        a = sample_hermitian(3, rng)
        b = sample_hermitian(3, rng)
        rho = sample_density(3, "hilbert-schmidt", rng)
        base = bound_report(a, b, rho)
        s = 1.7
        scaled = bound_report(Observable(s * a.matrix), b, rho)
        for name in ("product", "robertson", "schrodinger", "luo_park", "bound1", "bound2"):
            assert getattr(scaled, name) == pytest.approx(s**2 * getattr(base, name), rel=1e-9)

    def test_batch_matches_scalar(self):
        rng = np.random.default_rng(SEED + 10)
        n, d = 64, 4
        a = sample_hermitian_batch(d, n, rng)
        b = sample_hermitian_batch(d, n, rng)
        rho = sample_density_batch(d, n, rng)
        cols = batch_bounds(a, b, rho)
        for i in range(0, n, 7):
            rep = bound_report(a[i], b[i], DensityMatrix(rho[i]))
            for name in ("product", "robertson", "schrodinger", "luo_park", "bound1", "bound2"):
                assert cols[name][i] == pytest.approx(getattr(rep, name), rel=1e-9, abs=1e-12)
            assert cols["purity"][i] == pytest.approx(rep.purity, abs=1e-12)

    def test_violation_masks_clean_on_random_corpus(self):
        rng = np.random.default_rng(SEED + 11)
        n, d = 2000, 3
        cols = batch_bounds(
            sample_hermitian_batch(d, n, rng),
            sample_hermitian_batch(d, n, rng),
            sample_density_batch(d, n, rng),
        )
        masks = violation_masks(cols)
        assert not any(mask.any() for mask in masks.values())


class TestQubitClosedForm:
    def test_axes_example(self):
        rep = qubit_bounds_closed_form([1, 0, 0], [0, 1, 0], [0, 0, 0.5])
        assert rep.robertson == pytest.approx(0.25)
        assert rep.bound2 == pytest.approx(0.75)

    def test_parallel_axes_vanish(self):
        a = np.array([0.0, 0.6, 0.8])
        rep = qubit_bounds_closed_form(a, a, [0.1, 0.2, 0.3])
        assert rep.robertson == pytest.approx(0.0, abs=1e-15)
        assert rep.bound1 == pytest.approx(0.0, abs=1e-15)
        assert rep.bound2 == pytest.approx(0.0, abs=1e-15)

    def test_center_of_ball_convention(self):
        rep = qubit_bounds_closed_form([1, 0, 0], [0, 1, 0], [0.0, 0.0, 0.0])
        assert rep.luo_park == pytest.approx(1.0)
        assert rep.robertson == pytest.approx(0.0, abs=1e-15)
        assert rep.schrodinger == pytest.approx(0.0, abs=1e-15)

    def test_non_unit_axis_rejected(self):
        with pytest.raises(ValueError):
            qubit_bounds_closed_form([1.0, 1.0, 0.0], [0, 1, 0], [0, 0, 0.1])

    def test_outside_ball_rejected(self):
        from commutator_bounds import InvalidStateError

        with pytest.raises(InvalidStateError):
            qubit_bounds_closed_form([1, 0, 0], [0, 1, 0], [0, 0, 1.5])

    def test_matches_matrix_path(self):
        rng = np.random.default_rng(SEED + 12)
        n = 1000
        a = sample_unit_vectors(3, n, rng)
        b = sample_unit_vectors(3, n, rng)
        c_dirs = sample_unit_vectors(3, n, rng)
        radii = rng.uniform(0.0, 1.0, n)
        cases = []
        for i in range(n):
            c = radii[i] * c_dirs[i]
            closed = qubit_bounds_closed_form(a[i], b[i], c)
            rho = DensityMatrix.from_bloch(c)
            generic = bound_report(Observable.from_bloch(a[i]), Observable.from_bloch(b[i]), rho)
            cases.append((closed, generic))
        for closed, generic in cases:
            for name in ("product", "robertson", "schrodinger", "luo_park", "bound1", "bound2"):
                assert getattr(closed, name) == pytest.approx(
                    getattr(generic, name), abs=1e-10
                ), name

    def test_batch_matches_single(self):
        rng = np.random.default_rng(SEED + 13)
        a = sample_unit_vectors(3, 10, rng)
        b = sample_unit_vectors(3, 10, rng)
        c = np.array([0.1, -0.3, 0.4])
        cols = qubit_closed_form_batch(a, b, c)
        for i in range(10):
            rep = qubit_bounds_closed_form(a[i], b[i], c)
            for name in ("product", "robertson", "schrodinger", "luo_park", "bound1", "bound2"):
                assert cols[name][i] == pytest.approx(getattr(rep, name), abs=1e-13)

    def test_matches_matrix_path_bulk(self):
        # closed forms against the generic matrix path on 10^4 random triples
        from commutator_bounds import PAULIS

        rng = np.random.default_rng(SEED + 15)
        n = 10_000
        a = sample_unit_vectors(3, n, rng)
        b = sample_unit_vectors(3, n, rng)
        c = rng.uniform(0.0, 1.0) * sample_unit_vectors(3, 1, rng)[0]
        closed = qubit_closed_form_batch(a, b, c)
        a_mats = np.einsum("nk,kij->nij", a, PAULIS)
        b_mats = np.einsum("nk,kij->nij", b, PAULIS)
        rho = 0.5 * (np.eye(2) + np.einsum("k,kij->ij", c, PAULIS))
        generic = batch_bounds(a_mats, b_mats, np.broadcast_to(rho, (n, 2, 2)))
        for name in ("product", "robertson", "schrodinger", "luo_park", "bound1", "bound2"):
            assert np.max(np.abs(closed[name] - generic[name])) < 1e-10, name


class TestCommutatorNormIdentity:
    def test_orthogonal_axes(self):
        assert qubit_commutator_norm_identity([1, 0, 0], [0, 1, 0]) == pytest.approx(4.0)

    def test_parallel_axes(self):
        a = [0.0, 0.6, 0.8]
        assert qubit_commutator_norm_identity(a, a) == pytest.approx(0.0, abs=1e-15)

    def test_state_independence_against_matrix_path(self):
        rng = np.random.default_rng(SEED + 14)
        for _ in range(300):
            a = sample_unit_vectors(3, 1, rng)[0]
            b = sample_unit_vectors(3, 1, rng)[0]
            c = rng.uniform(0, 1) * sample_unit_vectors(3, 1, rng)[0]
            rho = DensityMatrix.from_bloch(c)
            comm = commutator(Observable.from_bloch(a), Observable.from_bloch(b))
            matrix_path = weighted_norm_sq(comm, rho)
            identity = qubit_commutator_norm_identity(a, b)
            assert abs(matrix_path - identity) < 1e-10
            # also half the unweighted squared norm
            assert identity == pytest.approx(np.sum(np.abs(comm) ** 2) / 2.0, abs=1e-10)

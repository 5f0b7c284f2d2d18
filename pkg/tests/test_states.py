"""Quantum-state module: validation, spectral summaries, Bloch maps, sampling."""

import numpy as np
import pytest

from commutator_bounds import (
    DensityMatrix,
    DimensionMismatchError,
    InvalidStateError,
    Observable,
    PAULI_X,
    PAULI_Z,
    sample_density,
    sample_density_batch,
    sample_hermitian_batch,
    sample_observable_unit,
    sample_unit_vectors,
    spectral_summary,
)

SEED = 20240902


class TestDensityFromBloch:
    def test_origin_is_maximally_mixed(self):
        rho = DensityMatrix.from_bloch([0.0, 0.0, 0.0])
        np.testing.assert_allclose(rho.matrix, np.eye(2) / 2.0, atol=1e-15)
        assert rho.purity == pytest.approx(0.5)

    def test_north_pole_is_pure(self):
        rho = DensityMatrix.from_bloch([0.0, 0.0, 1.0])
        np.testing.assert_allclose(rho.matrix, np.diag([1.0, 0.0]), atol=1e-12)
        assert rho.purity == pytest.approx(1.0)

    def test_half_z_state(self):
        # (I + z/2 sigma_z)/2 = diag(3/4, 1/4); ascending spectrum (1/4, 3/4), P = 5/8.
        rho = DensityMatrix.from_bloch([0.0, 0.0, 0.5])
        np.testing.assert_allclose(rho.spectrum, [0.25, 0.75], atol=1e-14)
        assert rho.purity == pytest.approx(5.0 / 8.0)

    def test_outside_ball_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix.from_bloch([0.8, 0.8, 0.8])

    def test_round_trip(self):
        rng = np.random.default_rng(SEED)
        for _ in range(1000):
            c = rng.standard_normal(3)
            c *= rng.uniform(0.0, 1.0) / np.linalg.norm(c)
            rho = DensityMatrix.from_bloch(c)
            np.testing.assert_allclose(rho.bloch_vector(), c, atol=1e-12)


class TestDensityValidation:
    def test_non_hermitian_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.array([[0.5, 0.5], [0.0, 0.5]], dtype=complex))

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([1.2, -0.2]).astype(complex))

    def test_wrong_trace_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix(np.diag([0.7, 0.7]).astype(complex))

    def test_roundoff_negative_clipped(self):
        eps = 5e-13
        rho = DensityMatrix(np.diag([-eps, 0.5, 0.5 + eps]).astype(complex))
        assert rho.spectrum[0] == 0.0
        assert rho.spectrum.sum() == pytest.approx(1.0, abs=1e-15)

    def test_matrix_is_write_protected(self):
        rho = DensityMatrix.maximally_mixed(3)
        with pytest.raises(ValueError):
            rho.matrix[0, 0] = 1.0

    def test_invalid_spectrum_rejected(self):
        with pytest.raises(InvalidStateError):
            DensityMatrix.from_spectrum([0.5, -0.1, 0.6])
        with pytest.raises(InvalidStateError):
            DensityMatrix.from_spectrum([0.3, 0.3])

    def test_sqrt_cache(self):
        rng = np.random.default_rng(SEED + 1)
        for _ in range(50):
            d = int(rng.integers(2, 7))
            rho = sample_density(d, "hilbert-schmidt", rng)
            np.testing.assert_allclose(
                rho.sqrt_matrix @ rho.sqrt_matrix, rho.matrix, atol=1e-9
            )


class TestSpectralSummary:
    def test_maximally_mixed(self):
        assert spectral_summary(DensityMatrix.maximally_mixed(2)) == pytest.approx(
            (0.5, 0.5, 0.5, 0.5)
        )

    def test_half_z_state(self):
        lam_m, lam_sm, lam_max, purity = spectral_summary(DensityMatrix.from_bloch([0, 0, 0.5]))
        assert (lam_m, lam_max, purity) == pytest.approx((0.25, 0.75, 0.625))
        assert lam_sm == pytest.approx(0.75)

    def test_three_level(self):
        summary = spectral_summary(DensityMatrix.from_spectrum([1 / 6, 2 / 6, 3 / 6]))
        assert summary == pytest.approx((1 / 6, 1 / 3, 1 / 2, 14 / 36))

    def test_qubit_purity_relation(self):
        # lam_min = (1 - sqrt(2P-1))/2, lam_max = (1 + sqrt(2P-1))/2 for qubits.
        rng = np.random.default_rng(SEED + 2)
        for _ in range(200):
            rho = sample_density(2, "hilbert-schmidt", rng)
            lam_m, lam_sm, lam_max, purity = spectral_summary(rho)
            root = np.sqrt(2.0 * purity - 1.0)
            assert lam_m == pytest.approx((1.0 - root) / 2.0, abs=1e-12)
            assert lam_sm == pytest.approx((1.0 + root) / 2.0, abs=1e-12)
            assert lam_max == pytest.approx((1.0 + root) / 2.0, abs=1e-12)


class TestSampling:
    def test_fixed_spectrum_half_half(self):
        rng = np.random.default_rng(SEED + 3)
        rho = sample_density(2, [0.5, 0.5], rng)
        np.testing.assert_allclose(rho.matrix, np.eye(2) / 2.0, atol=1e-15)

    def test_hilbert_schmidt_statistics(self):
        rng = np.random.default_rng(SEED + 4)
        purities = []
        for _ in range(10_000):
            rho = sample_density(4, "hilbert-schmidt", rng)
            assert np.trace(rho.matrix).real == pytest.approx(1.0, abs=1e-12)
            purities.append(rho.purity)
        mean_purity = np.mean(purities)
        assert 0.25 < mean_purity < 1.0

    def test_flat_simplex_contract(self):
        rng = np.random.default_rng(SEED + 5)
        rho = sample_density(3, "flat-simplex", rng)
        off_diag = rho.matrix - np.diag(np.diagonal(rho.matrix))
        assert np.linalg.norm(off_diag) < 1e-14
        diag = np.diagonal(rho.matrix).real
        assert np.all(np.diff(diag) >= 0)
        assert diag.sum() == pytest.approx(1.0, abs=1e-12)

    def test_unknown_spec_rejected(self):
        with pytest.raises(InvalidStateError):
            sample_density(3, "bures", np.random.default_rng(0))

    def test_unit_observable_qubit(self):
        rng = np.random.default_rng(SEED + 6)
        for _ in range(100):
            a = sample_observable_unit(2, rng)
            assert abs(np.trace(a.matrix)) < 1e-12
            assert np.sum(np.abs(a.matrix) ** 2) == pytest.approx(2.0, abs=1e-12)

    def test_unit_observable_higher_dim(self):
        rng = np.random.default_rng(SEED + 7)
        a = sample_observable_unit(4, rng)
        eigs = np.diagonal(a.matrix).real
        assert np.linalg.norm(a.matrix - np.diag(eigs)) < 1e-14
        assert np.linalg.norm(eigs) == pytest.approx(1.0, abs=1e-12)

    def test_sphere_second_moments(self):
        # <a_j a_k> = delta_jk / 3 at one million draws, within 3 standard errors,
        # on the same stream that feeds the qubit observable sampler.
        n = 1_000_000
        vec_rng = np.random.default_rng(SEED + 8)
        a = sample_unit_vectors(3, n, vec_rng)
        obs_rng = np.random.default_rng(SEED + 8)
        for i in range(5):
            obs = sample_observable_unit(2, obs_rng)
            np.testing.assert_allclose(obs.bloch().vec, a[i], atol=1e-12)
        prods = np.einsum("ni,nj->nij", a, a)
        mean = prods.mean(axis=0)
        se = prods.std(axis=0, ddof=1) / np.sqrt(n)
        target = np.eye(3) / 3.0
        assert np.all(np.abs(mean - target) <= 3.0 * se + 1e-12)

    def test_batch_samplers_produce_valid_ensembles(self):
        rng = np.random.default_rng(SEED + 9)
        batch = sample_hermitian_batch(3, 200, rng)
        np.testing.assert_allclose(batch, batch.conj().transpose(0, 2, 1), atol=1e-14)
        # entry scale matches the scalar sampler: diagonal variance 1, off-diagonal 1/2
        assert np.var(np.diagonal(batch, axis1=1, axis2=2).real) == pytest.approx(1.0, rel=0.3)
        assert np.var(batch[:, 0, 1].real) == pytest.approx(0.5, rel=0.3)

        rhos = sample_density_batch(3, 200, rng)
        traces = np.einsum("nii->n", rhos).real
        np.testing.assert_allclose(traces, 1.0, atol=1e-12)
        eigs = np.linalg.eigvalsh(rhos)
        assert eigs.min() > -1e-12
        # every batch state passes full validation
        for i in range(0, 200, 40):
            DensityMatrix(rhos[i])


class TestObservable:
    def test_requires_hermitian(self):
        from commutator_bounds import NotHermitianError

        with pytest.raises(NotHermitianError):
            Observable(np.array([[0.0, 1.0], [0.5, 0.0]], dtype=complex))

    def test_bloch_round_trip(self):
        obs = Observable.from_bloch([0.6, -0.8, 0.0], a0=0.25)
        decomposed = obs.bloch()
        assert decomposed.a0 == pytest.approx(0.25)
        np.testing.assert_allclose(decomposed.vec, [0.6, -0.8, 0.0], atol=1e-14)
        np.testing.assert_allclose(decomposed.to_observable().matrix, obs.matrix, atol=1e-14)

    def test_bloch_needs_dim_two(self):
        with pytest.raises(DimensionMismatchError):
            Observable(np.eye(3)).bloch()

    def test_pauli_x_from_bloch(self):
        np.testing.assert_allclose(Observable.from_bloch([1, 0, 0]).matrix, PAULI_X, atol=0)
        np.testing.assert_allclose(Observable.from_bloch([0, 0, 1]).matrix, PAULI_Z, atol=0)

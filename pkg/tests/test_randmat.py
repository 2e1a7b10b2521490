import numpy as np
import pytest
from hypothesis import given, strategies as st

from speclim.errors import NumericalError
from speclim.randmat import (
    SeedSpec,
    isotropic_unit_vector,
    mix64,
    quadratic_form_inverse,
    reconstruct,
    sample_cn_matrix,
    svd,
    wishart_squared_singular_values,
)


class TestSeedSpec:
    def test_determinism(self):
        a = sample_cn_matrix(4, 4, SeedSpec(42, 3))
        b = sample_cn_matrix(4, 4, SeedSpec(42, 3))
        np.testing.assert_array_equal(a, b)

    def test_distinct_streams_differ(self):
        a = sample_cn_matrix(4, 4, SeedSpec(42, 0))
        b = sample_cn_matrix(4, 4, SeedSpec(42, 1))
        assert not np.allclose(a, b)

    @given(st.integers(0, 2**64 - 1), st.integers(0, 2**64 - 1),
           st.integers(0, 2**64 - 1))
    def test_derived_seeds_distinct(self, root, i, j):
        if i != j:
            assert SeedSpec(root, i).derived() != SeedSpec(root, j).derived()

    @given(st.integers(0, 2**64 - 1))
    def test_mix64_range(self, z):
        assert 0 <= mix64(z) < 2**64

    def test_substream_chain_is_pure(self):
        s = SeedSpec(7).substream(3).substream(9)
        t = SeedSpec(7).substream(3).substream(9)
        assert s == t


class TestSampling:
    def test_zero_dimension_rejected(self):
        with pytest.raises(ValueError):
            sample_cn_matrix(0, 3, SeedSpec(1))
        with pytest.raises(ValueError):
            sample_cn_matrix(3, 0, SeedSpec(1))

    def test_scalar_moments(self):
        # 1e5 draws of a single CN(0,1) entry
        draws = sample_cn_matrix(100_000, 1, SeedSpec(11)).ravel()
        assert abs(draws.mean()) < 0.02
        mags = np.abs(draws) ** 2
        se = mags.std(ddof=1) / np.sqrt(mags.size)
        assert abs(mags.mean() - 1.0) < 3 * se

    def test_component_variance(self):
        m = sample_cn_matrix(256, 256, SeedSpec(5))
        assert 0.45 < m.real.var() < 0.55
        assert 0.45 < m.imag.var() < 0.55

    def test_unitary_invariance_of_entries(self):
        # e.d.f. of the entries of Q G matches that of G for unitary Q
        import scipy.stats

        g = sample_cn_matrix(400, 250, SeedSpec(21))
        q = svd(sample_cn_matrix(400, 400, SeedSpec(22))).left
        rotated = q @ g
        stat, _ = scipy.stats.ks_2samp(g.real.ravel(), rotated.real.ravel())
        assert stat < 0.02
        stat, _ = scipy.stats.ks_2samp(g.imag.ravel(), rotated.imag.ravel())
        assert stat < 0.02


class TestSvd:
    def test_identity(self):
        res = svd(np.eye(3))
        np.testing.assert_allclose(res.squared, np.ones(3))

    def test_diagonal(self):
        res = svd(np.array([[3.0, 0.0], [0.0, 4.0]]))
        np.testing.assert_allclose(res.squared, [16.0, 9.0])

    def test_reconstruction_and_unitarity(self):
        m = sample_cn_matrix(8, 8, SeedSpec(3))
        res = svd(m)
        rel = np.linalg.norm(reconstruct(res) - m) / np.linalg.norm(m)
        assert rel <= 1e-10
        eye = np.eye(8)
        assert np.linalg.norm(res.left.conj().T @ res.left - eye, 2) <= 1e-10
        assert np.linalg.norm(res.right.conj().T @ res.right - eye, 2) <= 1e-10

    def test_rectangular_reconstruction(self):
        m = sample_cn_matrix(9, 5, SeedSpec(4))
        res = svd(m)
        assert np.linalg.norm(reconstruct(res) - m) / np.linalg.norm(m) <= 1e-10
        assert np.all(np.diff(res.squared) <= 0)
        assert np.all(res.squared >= 0)

    def test_nonfinite_rejected(self):
        with pytest.raises(ValueError):
            svd(np.array([[np.nan, 0], [0, 1]]))


class TestIsotropicVector:
    def test_scalar_case(self):
        w = isotropic_unit_vector(1, SeedSpec(9))
        assert abs(abs(w[0]) - 1.0) < 1e-12

    def test_unit_norm(self):
        w = isotropic_unit_vector(16, SeedSpec(10))
        assert abs(np.linalg.norm(w) - 1.0) < 1e-12

    def test_coordinate_symmetry(self):
        # every coordinate carries expected squared magnitude 1/dim
        vals = np.array([
            abs(isotropic_unit_vector(64, SeedSpec(77, i))[0]) ** 2
            for i in range(10_000)
        ])
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - 1.0 / 64) < 3 * se

    def test_zero_dim_rejected(self):
        with pytest.raises(ValueError):
            isotropic_unit_vector(0, SeedSpec(1))


class TestQuadraticForm:
    def test_scaled_identity(self):
        assert quadratic_form_inverse([1, 0, 0], 2 * np.eye(3)) == pytest.approx(0.5)

    def test_diagonal(self):
        u = np.array([1.0, 1.0]) / np.sqrt(2.0)
        assert quadratic_form_inverse(u, np.diag([1.0, 4.0])) == pytest.approx(0.625)

    def test_against_explicit_inverse(self):
        k = sample_cn_matrix(8, 12, SeedSpec(31))
        phi = np.linspace(0.1, 2.0, 12)
        a = np.eye(8) + (k * phi) @ k.conj().T
        a = 0.5 * (a + a.conj().T)
        u = sample_cn_matrix(8, 1, SeedSpec(32)).ravel()
        expect = np.real(u.conj() @ np.linalg.inv(a) @ u)
        got = quadratic_form_inverse(u, a)
        assert abs(got - expect) / expect < 1e-9

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            quadratic_form_inverse([1, 0], np.eye(3))

    def test_indefinite_matrix_rejected(self):
        with pytest.raises(NumericalError):
            quadratic_form_inverse([1.0, 0.0], np.diag([1.0, -1.0]))


class TestWishart:
    def test_scalar_moment(self):
        vals = np.array([
            wishart_squared_singular_values(1, 1, SeedSpec(55, i))[0]
            for i in range(10_000)
        ])
        se = vals.std(ddof=1) / np.sqrt(vals.size)
        assert abs(vals.mean() - 1.0) < 3 * se

    def test_shape_and_order(self):
        vals = wishart_squared_singular_values(8, 8, SeedSpec(2))
        assert vals.shape == (8,)
        assert np.all(vals >= 0)
        assert np.all(np.diff(vals) <= 0)
        assert vals[0] < 16.0

    def test_wide_matrix_rejected(self):
        with pytest.raises(ValueError):
            wishart_squared_singular_values(4, 8, SeedSpec(1))

    def test_empirical_law_matches_limit(self):
        from speclim.mp_law import MpParams, mp_cdf

        vals = wishart_squared_singular_values(256, 256, SeedSpec(8))
        params = MpParams.from_ratio(1.0)
        sorted_vals = np.sort(vals)
        n = sorted_vals.size
        cdf = np.array([mp_cdf(params, v) for v in sorted_vals])
        ks = max(np.max(np.abs(np.arange(1, n + 1) / n - cdf)),
                 np.max(np.abs(np.arange(0, n) / n - cdf)))
        assert ks < 0.05

import numpy as np
import pytest

from speclim.interference import (
    Edf,
    InterferenceLaw,
    PathLossScenario,
    PowerModel,
    analytic_H,
    build_phi,
    empirical_vs_analytic_distance,
    interference_law,
    path_loss,
    sample_positions,
    sample_stream_powers,
)
from speclim.randmat import SeedSpec

SPATIAL = PathLossScenario.spatial(g_t=1.0, alpha=4.0, rho=1e-3, n=500,
                                   r1=17.8412, sigma2=1e-13)
CONSTANT = PathLossScenario.constant(gamma=10**-12.5, gamma1=1e-10, sigma_bar2=1e-13)


class TestPowerModel:
    def test_equal_power_rows(self):
        m = PowerModel.equal_power(4, 0.25)
        rows = sample_stream_powers(m, 3, SeedSpec(1))
        np.testing.assert_array_equal(rows, np.full((3, 4), 0.25))

    def test_two_class_degenerate_mix(self):
        m = PowerModel.two_class(3, 0.5, 1.0, 1.0)
        rows = sample_stream_powers(m, 20, SeedSpec(2))
        np.testing.assert_array_equal(rows, np.full((20, 3), 0.5))

    def test_two_class_composition(self):
        m = PowerModel.two_class(4, 0.5, 1.0, 0.5)
        rows = sample_stream_powers(m, 100_000, SeedSpec(3))
        class_one = rows[:, 1] > 0
        assert abs(class_one.mean() - 0.5) < 0.01
        two = rows[~class_one]
        assert np.all(two[:, 0] == 1.0)
        assert np.all(two[:, 1:] == 0.0)

    def test_rows_respect_power_cap(self):
        m = PowerModel.two_class(4, 0.2, 0.7, 0.3)
        rows = sample_stream_powers(m, 1000, SeedSpec(4))
        assert np.all(rows.sum(axis=1) <= m.p_max + 1e-12)

    def test_determinism(self):
        m = PowerModel.two_class(2, 0.5, 1.0, 0.5)
        a = sample_stream_powers(m, 50, SeedSpec(9))
        b = sample_stream_powers(m, 50, SeedSpec(9))
        np.testing.assert_array_equal(a, b)

    def test_cap_violation_rejected(self):
        with pytest.raises(ValueError):
            PowerModel(variant="equal-power", m=4, p=0.5, p_max=1.0)

    def test_bad_probability_rejected(self):
        with pytest.raises(ValueError):
            PowerModel.two_class(2, 0.5, 1.0, 1.5)

    def test_representative_is_class_one(self):
        m = PowerModel.two_class(4, 0.5, 1.0, 0.5)
        np.testing.assert_array_equal(m.representative_powers(), np.full(4, 0.5))

    def test_mean_power_fraction(self):
        # q M P1^(2/alpha) + (1-q) P2^(2/alpha) for the two-class model
        m = PowerModel.two_class(4, 0.5, 1.0, 0.5)
        expect = 0.5 * 4 * 0.5 ** 0.5 + 0.5 * 1.0
        assert m.sum_mean_power_frac(4.0) == pytest.approx(expect, rel=1e-14)
        assert expect == pytest.approx(1.9142, abs=1e-4)


class TestPositions:
    def test_area_uniformity(self):
        scen = PathLossScenario.spatial(1.0, 4.0, 1e5 / np.pi, 100_000, 0.5, 0.0)
        assert scen.radius == pytest.approx(1.0)
        radii = sample_positions(scen, SeedSpec(5))
        assert abs(np.mean(radii <= 0.5) - 0.25) < 0.01

    def test_empty(self):
        scen = PathLossScenario.spatial(1.0, 4.0, 1e-3, 0, 1.0, 0.0)
        assert sample_positions(scen, SeedSpec(1)).size == 0

    def test_determinism(self):
        a = sample_positions(SPATIAL, SeedSpec(6))
        b = sample_positions(SPATIAL, SeedSpec(6))
        np.testing.assert_array_equal(a, b)

    def test_constant_scenario_rejected(self):
        with pytest.raises(ValueError):
            sample_positions(CONSTANT, SeedSpec(1))


class TestPathLoss:
    @pytest.mark.parametrize("g_t,alpha,r,expect", [
        (1.0, 4.0, 1.0, 1.0),
        (1.0, 4.0, 10.0, 1e-4),
        (1e-3, 3.0, 2.0, 1.25e-4),
    ])
    def test_power_law(self, g_t, alpha, r, expect):
        scen = PathLossScenario.spatial(g_t, alpha, 1e-3, 10, 1.0, 0.0)
        assert path_loss(r, scen) == pytest.approx(expect, rel=1e-12)

    def test_collocated_rejected(self):
        with pytest.raises(ValueError):
            path_loss(0.0, SPATIAL)

    def test_vectorized(self):
        out = path_loss(np.array([1.0, 10.0]), SPATIAL)
        np.testing.assert_allclose(out, [1.0, 1e-4])


class TestBuildPhi:
    def test_direct_product(self):
        np.testing.assert_array_equal(build_phi([2.0], [[3.0, 5.0]]), [6.0, 10.0])

    def test_zero_powers(self):
        np.testing.assert_array_equal(build_phi([1.0, 2.0], np.zeros((2, 3))),
                                      np.zeros(6))

    def test_hand_expanded(self):
        losses = [0.5, 2.0]
        powers = [[1.0, 3.0], [4.0, 0.25]]
        np.testing.assert_array_equal(build_phi(losses, powers),
                                      [0.5, 1.5, 8.0, 0.5])

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            build_phi([1.0, 2.0, 3.0], np.ones((2, 2)))

    def test_permutation_preserves_edf(self):
        losses = np.array([0.5, 2.0, 1.0])
        powers = np.array([[1.0, 3.0], [4.0, 0.25], [2.0, 2.0]])
        phi = build_phi(losses, powers)
        perm = [2, 0, 1]
        phi_p = build_phi(losses[perm], powers[perm])
        np.testing.assert_array_equal(np.sort(phi), np.sort(phi_p))


class TestAnalyticH:
    def test_equal_power_step(self):
        model = PowerModel.equal_power(2, 0.5)
        gamma = CONSTANT.gamma
        assert analytic_H(model, CONSTANT, 0.49 * gamma) == 0.0
        assert analytic_H(model, CONSTANT, 0.5 * gamma) == 1.0
        assert analytic_H(model, CONSTANT, 1.0) == 1.0

    def test_two_class_hand_value(self):
        model = PowerModel.two_class(2, 0.5, 1.0, 0.5)
        scen = PathLossScenario.constant(gamma=1.0, gamma1=1.0, sigma_bar2=1e-13)
        assert analytic_H(model, scen, 0.75) == pytest.approx(0.75)
        # zero-power atom from the silent second stream of class-two nodes
        assert analytic_H(model, scen, 0.0) == pytest.approx(0.25)

    def test_spatial_limits(self):
        model = PowerModel.equal_power(2, 0.5)
        assert analytic_H(model, SPATIAL, 1e9, n_rx=16) == pytest.approx(1.0, abs=1e-6)
        assert analytic_H(model, SPATIAL, 0.0, n_rx=16) == 0.0

    def test_negative_rejected(self):
        model = PowerModel.equal_power(1, 1.0)
        with pytest.raises(ValueError):
            analytic_H(model, CONSTANT, -1.0)

    @pytest.mark.parametrize("spatial", [False, True])
    def test_valid_cdf_on_grid(self, spatial):
        model = PowerModel.two_class(4, 0.5, 1.0, 0.5)
        scen = SPATIAL if spatial else CONSTANT
        law = interference_law(model, scen, n_rx=16)
        lo = 1e-16 if spatial else 1e-14
        # the spatial tail decays like x^(-2/alpha), so the grid must reach
        # far out before the CDF is within 1e-6 of one
        hi = 1e16 if spatial else 1.0
        grid = np.concatenate([[0.0], np.geomspace(lo, hi, 999)])
        vals = np.array([law.cdf(x) for x in grid])
        assert np.all(np.diff(vals) >= -1e-12)
        assert vals[0] >= 0.0
        assert vals[-1] == pytest.approx(1.0, abs=1e-6)

    def test_spatial_law_independent_of_n_rx_at_fixed_ratio(self):
        model = PowerModel.two_class(2, 0.5, 1.0, 0.5)
        scen_a = PathLossScenario.spatial(1.0, 4.0, 1e-3, 500, 17.8412, 1e-13)
        scen_b = PathLossScenario.spatial(1.0, 4.0, 1e-3, 1000, 17.8412, 1e-13)
        for x in np.geomspace(1e-12, 1e3, 40):
            a = analytic_H(model, scen_a, x, n_rx=16)
            b = analytic_H(model, scen_b, x, n_rx=32)
            assert abs(a - b) <= 1e-12


class TestEmpiricalDistance:
    def test_equal_power_degenerate(self):
        model = PowerModel.equal_power(2, 0.5)
        d = empirical_vs_analytic_distance(model, CONSTANT, 100, 16, SeedSpec(1))
        assert d <= 1.0 / (100 * 2)

    def test_two_class_rate(self):
        model = PowerModel.two_class(2, 0.5, 1.0, 0.5)
        d = empirical_vs_analytic_distance(model, CONSTANT, 20_000, 16, SeedSpec(2))
        assert d < 0.02

    def test_spatial_rate(self):
        model = PowerModel.equal_power(2, 0.5)
        d = empirical_vs_analytic_distance(model, SPATIAL, 20_000, 16, SeedSpec(3))
        assert d < 0.03


class TestEdf:
    def test_step_values(self):
        edf = Edf([1.0, 2.0, 2.0, 5.0])
        assert edf(0.5) == 0.0
        assert edf(1.0) == 0.25
        assert edf(2.0) == 0.75
        assert edf.below(2.0) == 0.25
        assert edf(5.0) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            Edf([])


class TestScenario:
    def test_alpha_must_exceed_two(self):
        with pytest.raises(ValueError):
            PathLossScenario.spatial(1.0, 2.0, 1e-3, 10, 1.0, 0.0)

    def test_radius_from_density(self):
        assert SPATIAL.radius == pytest.approx(np.sqrt(500 / (np.pi * 1e-3)))

    def test_link_rank(self):
        assert SPATIAL.link_rank == pytest.approx(np.pi * 1e-3 * 17.8412**2)

    def test_b_scale(self):
        assert SPATIAL.b_scale(16) == pytest.approx((np.pi * 1e-3 * 16 / 500) ** 2)

    def test_mixture_mass_validated(self):
        with pytest.raises(ValueError):
            InterferenceLaw(atoms=((0.5, 1.0),))

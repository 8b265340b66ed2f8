import mpmath as mp
import numpy as np
import pytest

from combwalk import (
    LatticeDistribution,
    bessel_j,
    bessel_j_sequence,
    classical_ctrw,
    classical_ctrw_distribution,
    ctqw_finite,
    ctqw_infinite,
    ctqw_infinite_distribution,
    scaled_bessel_i_sequence,
)

from reference import bessel_j_series, master_equation_rk4, scaled_bessel_i_series


class TestBesselJ:
    def test_definition_at_zero(self):
        assert bessel_j(0, 0.0) == 1.0
        for n in (1, 2, 7, 100):
            assert bessel_j(n, 0.0) == 0.0

    def test_j0_of_one(self):
        # power-series reference value
        assert bessel_j(0, 1.0) == pytest.approx(0.7651976865579666, rel=1e-14)

    def test_against_power_series(self):
        # the recurrence and the series must agree far beyond 1e-12
        for n in (0, 1, 2, 5, 13, 30, 50):
            for x in (1e-3, 0.5, 1.0, 4.0, 9.5, 17.0, 25.0):
                ref = bessel_j_series(n, x)
                got = bessel_j(n, x)
                assert got == pytest.approx(ref, rel=1e-12, abs=1e-300)

    def test_against_big_float_reference_large_orders(self):
        # twelve significant digits up to n, x = 300
        mp.mp.dps = 30
        for n in (0, 60, 150, 300):
            for x in (2.0, 75.0, 190.0, 300.0):
                ref = float(mp.besselj(n, x))
                got = bessel_j(n, x)
                if abs(ref) > 1e-250:
                    assert got == pytest.approx(ref, rel=1e-12)
                else:
                    assert abs(got) <= 1e-250

    def test_sum_of_squares_identity(self):
        seq = bessel_j_sequence(90, 50.0)
        total = seq[0] ** 2 + 2.0 * np.sum(seq[1:] ** 2)
        assert abs(total - 1.0) < 1e-10

    @pytest.mark.parametrize("x", [1.0, 10.0, 50.0])
    def test_second_moment_identity(self, x):
        n_max = int(np.ceil(x)) + 60
        seq = bessel_j_sequence(n_max, x)
        m2 = 2.0 * np.sum(np.arange(1, n_max + 1) ** 2 * seq[1:] ** 2)
        assert abs(m2 - x * x / 2.0) < 1e-8

    def test_domain_errors(self):
        with pytest.raises(ValueError):
            bessel_j(-1, 1.0)
        with pytest.raises(ValueError):
            bessel_j(1, -1.0)


class TestScaledBesselI:
    def test_at_zero(self):
        seq = scaled_bessel_i_sequence(5, 0.0)
        assert seq[0] == 1.0
        assert np.all(seq[1:] == 0.0)

    def test_against_power_series(self):
        for n in (0, 1, 3, 10, 25):
            for x in (0.1, 1.0, 5.0, 12.0, 25.0):
                ref = scaled_bessel_i_series(n, x)
                assert scaled_bessel_i_sequence(n, x)[n] == pytest.approx(
                    ref, rel=1e-12
                )

    def test_no_overflow_at_large_argument(self):
        seq = scaled_bessel_i_sequence(50, 300.0)
        assert np.all(np.isfinite(seq))
        assert seq[0] == pytest.approx(float(mp.besseli(0, 300) * mp.exp(-300)), rel=1e-12)


class TestCtqwInfinite:
    def test_initial_condition(self):
        assert ctqw_infinite(0, 0.0, 1.0) == 1.0 + 0.0j

    def test_phase_structure(self):
        x = 3.7
        for n in range(5):
            expect = (1j ** n) * bessel_j(n, x)
            assert ctqw_infinite(n, x, 1.0) == pytest.approx(expect, rel=1e-14)

    def test_mirror_symmetry(self):
        for n in (1, 2, 9):
            p_plus = abs(ctqw_infinite(n, 7.0, 1.0)) ** 2
            p_minus = abs(ctqw_infinite(-n, 7.0, 1.0)) ** 2
            assert p_plus == p_minus

    def test_distribution_normalization(self):
        dist = ctqw_infinite_distribution(1.0, 50.0, n_max=90)
        assert abs(dist.total() - 1.0) < 1e-10

    def test_twin_peaks_at_large_gamma_t(self):
        dist = ctqw_infinite_distribution(1.0, 50.0)
        peak_offset = dist.offsets[int(np.argmax(dist.probabilities))]
        assert abs(peak_offset) >= 0.8 * 50


class TestCtqwFinite:
    def test_identity_at_zero_time(self):
        state = ctqw_finite(11, 4, 0.0, 1.0)
        assert state.populations[4] == pytest.approx(1.0, rel=1e-12)

    def test_three_site_closed_form(self):
        for t in (0.3, 1.0, 2.7):
            state = ctqw_finite(3, 1, t, 1.0)
            assert state.populations[1] == pytest.approx(
                np.cos(t / np.sqrt(2)) ** 2, abs=1e-12
            )

    def test_matches_infinite_before_boundary(self):
        state = ctqw_finite(401, 200, 10.0, 1.0)
        dist = ctqw_infinite_distribution(1.0, 10.0, n_max=200)
        assert np.max(np.abs(state.populations - dist.probabilities)) < 1e-10

    def test_long_time_unitarity(self):
        state = ctqw_finite(401, 200, 1000.0, 1.0)
        assert abs(state.norm() - 1.0) < 1e-12

    def test_origin_out_of_range(self):
        with pytest.raises(ValueError):
            ctqw_finite(10, 10, 1.0, 1.0)


class TestClassicalCtrw:
    def test_initial_condition(self):
        assert classical_ctrw(0, 0.0, 1.0) == 1.0

    def test_probability_conservation(self):
        dist = classical_ctrw_distribution(1.0, 10.0, n_max=120)
        assert abs(dist.total() - 1.0) < 1e-10

    def test_variance_is_gamma_t(self):
        p = scaled_bessel_i_sequence(120, 10.0)
        var = 2.0 * np.sum(np.arange(1, 121) ** 2 * p[1:])
        assert abs(var - 10.0) < 1e-8

    def test_against_master_equation_rk4(self):
        ref = master_equation_rk4(n_max=140, gamma=1.0, t=10.0, steps=8000)
        dist = classical_ctrw_distribution(1.0, 10.0, n_max=140)
        assert np.max(np.abs(dist.probabilities - ref)) < 1e-8

    def test_negative_time_rejected(self):
        with pytest.raises(ValueError):
            classical_ctrw(0, -0.1, 1.0)

    def test_spreads_slower_than_walk(self):
        x = 25.0
        classical = classical_ctrw_distribution(1.0, x)
        quantum = ctqw_infinite_distribution(1.0, x)
        var_c = np.sum(classical.offsets**2 * classical.probabilities)
        var_q = np.sum(quantum.offsets**2 * quantum.probabilities)
        assert var_c == pytest.approx(x, rel=1e-6)
        assert var_q == pytest.approx(x * x / 2.0, rel=1e-6)
        assert var_q > 10 * var_c


class TestLatticeDistribution:
    def test_rejects_negative_probability(self):
        with pytest.raises(ValueError):
            LatticeDistribution(np.array([0, 1]), np.array([0.5, -0.1]))

    def test_rejects_excess_mass(self):
        with pytest.raises(ValueError):
            LatticeDistribution(np.array([0, 1]), np.array([0.7, 0.7]))

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            LatticeDistribution(np.array([0, 1, 2]), np.array([0.5, 0.5]))

import numpy as np
import pytest

from combwalk import (
    RotorSpec,
    rotational_energy,
    transition_dipole,
    transition_dipoles,
    transition_frequencies,
    transition_frequency,
)


class TestRotationalEnergy:
    def test_ground_state(self):
        spec = RotorSpec(b=1.0, j_max=10)
        assert rotational_energy(spec, 0) == 0.0

    def test_rigid_level(self):
        spec = RotorSpec(b=1.0, j_max=10)
        assert rotational_energy(spec, 2) == pytest.approx(6.0, rel=1e-15)

    def test_distorted_level(self):
        spec = RotorSpec(b=1.0, d=1e-7, j_max=20)
        # B J(J+1) - D J^2(J+1)^2 at J=10: 110 - 1e-7 * 12100
        assert rotational_energy(spec, 10, distorted=True) == pytest.approx(
            109.99879, rel=1e-12
        )

    def test_distortion_flag_off_ignores_d(self):
        spec = RotorSpec(b=1.0, d=1e-7, j_max=20)
        assert rotational_energy(spec, 10) == pytest.approx(110.0, rel=1e-15)

    def test_negative_j_rejected(self):
        spec = RotorSpec(b=1.0, j_max=5)
        with pytest.raises(ValueError):
            rotational_energy(spec, -1)


class TestTransitionFrequency:
    def test_lowest_rigid(self):
        spec = RotorSpec(b=0.5, j_max=10)
        assert transition_frequency(spec, 0) == pytest.approx(1.0, rel=1e-15)

    def test_rigid_scaling(self):
        spec = RotorSpec(b=0.5, j_max=10)
        assert transition_frequency(spec, 9) == pytest.approx(10.0, rel=1e-15)

    def test_distorted_high_j(self):
        b = 0.5
        spec = RotorSpec(b=b, d=1.57e-7 * b, j_max=100)
        # 2B(J+1) - 4D(J+1)^3 at J=99: 100 - 4 * 0.785e-7 * 1e6
        assert transition_frequency(spec, 99, distorted=True) == pytest.approx(
            99.686, rel=1e-12
        )

    def test_out_of_ladder_rejected(self):
        spec = RotorSpec(b=0.5, j_max=10)
        with pytest.raises(ValueError):
            transition_frequency(spec, 10)
        with pytest.raises(ValueError):
            transition_frequency(spec, -1)


class TestTransitionDipole:
    def test_lowest_bond(self):
        spec = RotorSpec(b=0.5, j_max=5)
        assert transition_dipole(spec, 0) == pytest.approx(np.sqrt(1 / 3), rel=1e-12)

    def test_second_bond(self):
        spec = RotorSpec(b=0.5, j_max=5)
        assert transition_dipole(spec, 1) == pytest.approx(np.sqrt(4 / 15), rel=1e-12)

    def test_linear_in_mu(self):
        spec = RotorSpec(b=0.5, mu=2.0, j_max=5)
        assert transition_dipole(spec, 0) == pytest.approx(
            2 * np.sqrt(1 / 3), rel=1e-12
        )

    def test_nonzero_m_value(self):
        spec = RotorSpec(b=0.5, m=1, j_max=5)
        # sqrt((4 - 1) / 15) for the 1 -> 2 bond
        assert transition_dipole(spec, 1) == pytest.approx(np.sqrt(3 / 15), rel=1e-12)

    def test_forbidden_m_rejected(self):
        spec = RotorSpec(b=0.5, m=3, j_max=5)
        with pytest.raises(ValueError):
            transition_dipole(spec, 1)  # needs |M| <= J+1 = 2

    def test_vanishing_at_m_equals_j_plus_one(self):
        spec = RotorSpec(b=0.5, m=2, j_max=5)
        assert transition_dipole(spec, 1) == 0.0


class TestSpecValidation:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(b=0.0),
            dict(b=-1.0),
            dict(b=1.0, d=-1e-9),
            dict(b=1.0, d=2e-3),  # ratio above the distortion guard
            dict(b=1.0, mu=0.0),
            dict(b=1.0, j_max=0),
        ],
    )
    def test_bad_specs_rejected(self, kwargs):
        with pytest.raises(ValueError):
            RotorSpec(**kwargs)

    def test_normalized_convention(self):
        spec = RotorSpec.normalized(d_over_b=1.57e-7, j_max=200)
        assert spec.b == 0.5
        assert spec.d == pytest.approx(1.57e-7 * 0.5, rel=1e-15)
        assert spec.size == 201


class TestConsistencyProperties:
    def test_frequency_equals_energy_gap(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            b = rng.uniform(0.1, 3.0)
            spec = RotorSpec(b=b, d=rng.uniform(0, 1e-5) * b, j_max=60)
            for distorted in (False, True):
                for j in range(0, 60, 7):
                    gap = rotational_energy(spec, j + 1, distorted) - rotational_energy(
                        spec, j, distorted
                    )
                    nu = transition_frequency(spec, j, distorted)
                    assert abs(gap - nu) <= 1e-12 * max(1.0, abs(nu))

    def test_rigid_comb_evenly_spaced(self):
        # exact in the 2B = 1 convention, where the products are dyadic
        spec = RotorSpec.normalized(j_max=50)
        nu = transition_frequencies(spec)
        assert np.all(np.diff(nu) == 1.0)
        # ulp-level for a general rotational constant
        spec = RotorSpec(b=0.73, j_max=50)
        nu = transition_frequencies(spec)
        assert np.allclose(np.diff(nu), 2 * spec.b, rtol=1e-13, atol=0)

    def test_distorted_gaps_shrink(self):
        spec = RotorSpec(b=0.5, d=0.5 * 1.57e-7, j_max=200)
        nu = transition_frequencies(spec, distorted=True)
        assert np.all(np.diff(nu) < 2 * spec.b)

    def test_dipole_bounds_and_limit(self):
        spec = RotorSpec(b=0.5, j_max=1001)
        mu = transition_dipoles(spec)
        assert np.all(mu > 0)
        assert np.all(mu <= spec.mu / np.sqrt(3) + 1e-15)
        assert np.all(mu < spec.mu)
        # m = 0 dipoles decrease monotonically from mu/sqrt(3) toward mu/2
        assert np.all(np.diff(mu) < 0)
        assert abs(transition_dipole(spec, 1000) - 0.5 * spec.mu) < 1e-6

    def test_vector_ops_match_scalars(self):
        spec = RotorSpec(b=0.8, d=0.8e-6, mu=1.3, j_max=30)
        nu_d = transition_frequencies(spec, distorted=True)
        mu_all = transition_dipoles(spec)
        for j in range(30):
            assert nu_d[j] == pytest.approx(
                transition_frequency(spec, j, True), rel=1e-15
            )
            assert mu_all[j] == pytest.approx(transition_dipole(spec, j), rel=1e-15)

    def test_vector_dipoles_reject_blocked_ladder(self):
        # |M| >= 1 leaves the lowest bonds without a dipole; the full-ladder
        # helper refuses rather than returning zeros
        spec = RotorSpec(b=0.5, m=2, j_max=10)
        with pytest.raises(ValueError):
            transition_dipoles(spec)

import math

import numpy as np
import pytest

from wavelab.geometry import (
    INTERNAL_TANGENCY_C0,
    LightConePoint,
    angle_identity_residual,
    calibrate_internal_tangency_constant,
    huygens_support_check,
    internal_tangency_angle_window,
    sample_internal_tangency,
    sample_tangent_sphere,
    tangent_ray_configuration,
    tangent_sphere_angle_bound,
    tangent_sphere_constant,
    unit_angle,
)


class TestHuygensSupport:
    def test_coincident_points(self):
        assert huygens_support_check(5.0, 1.0, np.zeros(3), np.zeros(3))

    def test_outside_support(self):
        x = np.array([4.0, 0.0, 0.0])
        assert not huygens_support_check(3.0, 1.0, x, np.zeros(3))

    def test_boundary_is_closed(self):
        x = np.array([2.0, 0.0, 0.0])
        assert huygens_support_check(3.0, 1.0, x, np.zeros(3))

    def test_rejects_reversed_times(self):
        with pytest.raises(ValueError):
            huygens_support_check(1.0, 2.0, np.zeros(3), np.zeros(3))


class TestAngleIdentity:
    def test_random_sweep(self):
        # |x-y|^2 = (|x|-|y|)^2 + |x||y| |x/|x| - y/|y||^2 to 1e-12
        rng = np.random.default_rng(77)
        worst = 0.0
        for _ in range(100_000):
            x = rng.normal(size=3) * rng.uniform(0.1, 100.0)
            y = rng.normal(size=3) * rng.uniform(0.1, 100.0)
            worst = max(worst, angle_identity_residual(x, y))
        assert worst <= 1e-12


class TestTangentSphereBound:
    def test_collinear_gives_zero_angle(self):
        t = 100.0
        x = np.array([99.5, 0.0, 0.0])
        s = 60.0
        y = (59.5 / 99.5) * x
        res = tangent_sphere_angle_bound(t, x, s, y)
        assert res.angle == pytest.approx(0.0, abs=1e-12)
        assert res.bound_ok

    def test_derived_constant_value(self):
        # C(t)^2 = 2 t^2 / ((t-1)(t/10 - 1))
        assert tangent_sphere_constant(100.0) == pytest.approx(
            math.sqrt(20000.0 / (99.0 * 9.0)), rel=1e-15
        )

    def test_sampled_angles_within_bound(self):
        rng = np.random.default_rng(2024)
        t = 100.0
        for x, s, y in sample_tangent_sphere(t, 10_000, rng):
            res = tangent_sphere_angle_bound(t, x, s, y)
            assert res.bound_ok
            assert res.identity_residual <= 1e-12

    def test_rejects_hypothesis_violations(self):
        t = 100.0
        x = np.array([95.0, 0.0, 0.0])  # t - |x| = 5 > 1
        with pytest.raises(ValueError):
            tangent_sphere_angle_bound(t, x, 60.0, x * 0.5)
        with pytest.raises(ValueError):
            tangent_sphere_angle_bound(
                t, np.array([99.5, 0, 0]), 5.0, np.array([4.5, 0, 0])
            )


class TestInternalTangencyWindow:
    def test_tangent_ray_near_lower_edge(self):
        t, delta = 10.0, 0.01
        x, y = tangent_ray_configuration(t, delta)
        res = internal_tangency_angle_window(t, x, y, delta)
        assert res.bound_ok
        # below the multiplicative midpoint of the window
        assert res.angle <= math.sqrt(delta)

    def test_identity_exact(self):
        rng = np.random.default_rng(31)
        for x, y in sample_internal_tangency(10.0, 0.01, 1000, rng):
            assert angle_identity_residual(x, y) <= 1e-12

    def test_fresh_samples_in_window(self):
        # frozen constant, fresh seed (calibration used seed 7)
        rng = np.random.default_rng(424242)
        for t, delta in ((10.0, 0.01), (6.0, 0.002), (80.0, 0.05)):
            for x, y in sample_internal_tangency(t, delta, 3000, rng):
                res = internal_tangency_angle_window(t, x, y, delta)
                assert res.bound_ok

    def test_calibration_below_frozen_constant(self):
        fitted = calibrate_internal_tangency_constant(count=6000, seed=7)
        assert fitted <= INTERNAL_TANGENCY_C0 * 1.05

    def test_rejects_hypothesis_violations(self):
        t, delta = 10.0, 0.01
        x, y = tangent_ray_configuration(t, delta)
        with pytest.raises(ValueError):
            internal_tangency_angle_window(4.0, x, y, delta)
        with pytest.raises(ValueError):
            internal_tangency_angle_window(t, 0.5 * x, y, delta)
        with pytest.raises(ValueError):
            internal_tangency_angle_window(t, x, y, 0.2)


class TestLightConePoint:
    def test_membership(self):
        assert LightConePoint(2.0, np.array([1.0, 1.0, 0.0])).in_forward_cone()
        assert not LightConePoint(1.0, np.array([2.0, 0.0, 0.0])).in_forward_cone()

    def test_rejects_negative_time(self):
        with pytest.raises(ValueError):
            LightConePoint(-1.0, np.zeros(3))

    def test_unit_angle_symmetry(self):
        x = np.array([3.0, 4.0, 0.0])
        y = np.array([0.0, 5.0, 0.0])
        assert unit_angle(x, y) == pytest.approx(unit_angle(y, x), rel=1e-15)

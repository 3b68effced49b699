import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavelab.exponents import (
    ExponentSet,
    critical_power,
    critical_residual,
    conformal_power,
    radial_estimate_params,
    strichartz_exponent,
    weight_window,
)


class TestCriticalPower:
    def test_dimension_three(self):
        assert critical_power(3) == pytest.approx(1.0 + math.sqrt(2.0), abs=1e-12)

    def test_dimension_four(self):
        assert critical_power(4) == pytest.approx(2.0, abs=1e-12)

    def test_dimension_two(self):
        assert critical_power(2) == pytest.approx((3.0 + math.sqrt(17.0)) / 2.0,
                                                  abs=1e-12)

    def test_rejects_low_dimension(self):
        with pytest.raises(ValueError):
            critical_power(1)

    def test_quadratic_residual_small(self):
        for n in range(2, 21):
            res = critical_residual(n, critical_power(n))
            assert abs(res) <= 1e-12 * (n + 1)

    def test_strictly_decreasing_in_dimension(self):
        values = [critical_power(n) for n in range(2, 21)]
        assert all(a > b for a, b in zip(values, values[1:]))

    def test_below_conformal_power(self):
        for n in range(2, 21):
            assert critical_power(n) < float(conformal_power(n))


class TestExponentSet:
    def test_rational_fields_exact(self):
        es = ExponentSet.for_dimension(3)
        assert es.p_conf == Fraction(3, 1)
        assert es.q_strichartz == Fraction(4, 1)
        assert strichartz_exponent(5) == Fraction(3, 1)
        assert conformal_power(5) == Fraction(2, 1)

    def test_residual_method(self):
        es = ExponentSet.for_dimension(7)
        assert abs(es.quadratic_residual()) <= 1e-12 * 8


class TestWeightWindow:
    def test_three_dim_power_three(self):
        win = weight_window(3, 3.0)
        assert win.lower == pytest.approx(1.0 / 12.0, abs=1e-15)
        assert win.upper == pytest.approx(1.0 / 4.0, abs=1e-15)
        assert win.classify() == "nonempty"

    def test_degenerate_at_critical(self):
        win = weight_window(3, 1.0 + math.sqrt(2.0))
        assert win.classify() == "degenerate"
        assert win.lower == pytest.approx(win.upper, abs=1e-12)

    def test_four_dim_at_critical(self):
        win = weight_window(4, 2.0)
        assert win.lower >= win.upper - 1e-12
        assert win.classify() in ("degenerate", "empty")

    def test_rejects_power_at_most_one(self):
        with pytest.raises(ValueError):
            weight_window(3, 1.0)

    def test_dichotomy_random_sweep(self):
        # nonempty exactly when p exceeds the critical power
        rng = np.random.default_rng(1234)
        for _ in range(1000):
            n = int(rng.integers(2, 10))
            p = float(rng.uniform(1.01, 6.0))
            p_c = critical_power(n)
            if abs(p - p_c) <= 1e-10:
                continue
            assert weight_window(n, p).is_nonempty() == (p > p_c)

    @given(st.integers(min_value=2, max_value=12),
           st.floats(min_value=1.001, max_value=8.0))
    def test_dichotomy_property(self, n, p):
        p_c = critical_power(n)
        if abs(p - p_c) <= 1e-9:
            return
        assert weight_window(n, p).is_nonempty() == (p > p_c)


class TestRadialEstimateParams:
    def test_three_dim_q_four(self):
        rp = radial_estimate_params(3, 4)
        assert rp.gamma == Fraction(1, 2)
        assert rp.exponent_sum == Fraction(1, 2)
        assert rp.beta_max == Fraction(1, 4)

    def test_endpoint_alpha_plus_beta_zero(self):
        rp = radial_estimate_params(3, strichartz_exponent(3))
        assert rp.alpha_plus_beta == 0

    def test_five_dim_q_three(self):
        rp = radial_estimate_params(5, 3)
        assert rp.gamma == Fraction(2, 3)
        assert rp.exponent_sum == Fraction(2, 3)
        assert rp.beta_max == Fraction(1, 3)

    def test_rejects_out_of_range_q(self):
        with pytest.raises(ValueError):
            radial_estimate_params(3, 2.0)
        with pytest.raises(ValueError):
            radial_estimate_params(3, 4.5)
        with pytest.raises(ValueError):
            radial_estimate_params(4, 3.0)

    def test_endpoint_equivalence_sweep(self):
        # alpha+beta >= 0 iff q <= 2(n+1)/(n-1), checked across a grid
        for n in (3, 5, 7, 9):
            q_max = strichartz_exponent(n)
            for q in np.linspace(2.05, float(q_max), 17):
                rp = radial_estimate_params(n, float(min(q, q_max)))
                assert float(rp.alpha_plus_beta) >= -1e-12

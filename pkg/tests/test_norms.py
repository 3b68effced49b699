import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wavelab.fd import convergence_order
from wavelab.grids import Grid, RadialField
from wavelab.norms import (
    Region,
    WeightDomainError,
    WeightSpec,
    dyadic_layers,
    null_coords,
    null_coords_inverse,
    sphere_area,
    weighted_norm,
)

# frozen independent reference (adaptive quadrature of the closed-form
# integrand): q = 3, gamma = 0.3, R = 1, u = exp(-t) cos(r),
# region t in [0.5, 2], r in [0, 1.5]
REFERENCE_NORM = 0.7205067228397457


def _box_field(grid, fn):
    return RadialField.from_function(grid, fn)


class TestWeightedNorm:
    def test_zero_field(self, small_grid):
        u = RadialField.zeros(small_grid)
        w = WeightSpec(gamma=0.3, shift=1.0, q=4.0)
        assert weighted_norm(u, w, Region.full(small_grid)) == 0.0

    def test_unit_field_closed_form(self):
        # gamma = 0, R = 0, u = 1 on a box: c_n (t1-t0) (r1^3-r0^3)/3
        grid = Grid(t_max=2.0, r_max=2.0, nt=321, nr=321)
        u = _box_field(grid, lambda t, r: np.ones_like(t))
        region = Region(t_lo=0.5, t_hi=1.5, cone_lo=-math.inf, cone_hi=math.inf)
        got = weighted_norm(u, WeightSpec(gamma=0.0, shift=5.0, q=2.0), region)
        exact = (sphere_area(3) * 1.0 * (2.0**3) / 3.0) ** 0.5
        assert got == pytest.approx(exact, rel=2e-4)

    def test_region_monotonicity(self, small_grid):
        rng = np.random.default_rng(3)
        u = _box_field(small_grid, lambda t, r: np.sin(3 * t) + np.cos(2 * r))
        w = WeightSpec(gamma=0.2, shift=3.0, q=3.0)
        small = weighted_norm(u, w, Region(t_lo=0.5, t_hi=1.0))
        large = weighted_norm(u, w, Region(t_lo=0.0, t_hi=2.0))
        assert large >= small

    def test_rejects_bad_exponent(self):
        with pytest.raises(ValueError):
            WeightSpec(gamma=0.0, shift=0.0, q=0.5)

    def test_rejects_region_beyond_grid(self, small_grid):
        u = RadialField.zeros(small_grid)
        w = WeightSpec(gamma=0.0, shift=0.0, q=2.0)
        with pytest.raises(ValueError):
            weighted_norm(u, w, Region(t_lo=0.0, t_hi=5.0))

    def test_rejects_mass_outside_weight_domain(self, small_grid):
        # field nonzero where (t+R)^2 <= r^2 must raise, not clamp
        u = _box_field(small_grid, lambda t, r: np.ones_like(t))
        w = WeightSpec(gamma=0.5, shift=0.0, q=2.0)
        with pytest.raises(WeightDomainError):
            weighted_norm(u, w, Region.full(small_grid))

    def test_quadrature_convergence_order(self):
        errs = []
        for npts in (41, 81, 161):
            grid = Grid(t_max=2.0, r_max=1.5, nt=npts, nr=npts)
            u = _box_field(grid, lambda t, r: np.exp(-t) * np.cos(r))
            w = WeightSpec(gamma=0.3, shift=1.0, q=3.0)
            region = Region(t_lo=0.5, t_hi=2.0)
            errs.append(abs(weighted_norm(u, w, region) - REFERENCE_NORM))
        assert convergence_order(errs) >= 1.8

    def test_hoelder_consistency(self, small_grid):
        rng = np.random.default_rng(8)
        u = _box_field(small_grid, lambda t, r: np.sin(2 * t + r) + 1.5)
        v = _box_field(small_grid, lambda t, r: np.cos(t - 3 * r) + 2.0)
        uv = u.with_values(u.values * v.values)
        q = 3.0
        dual = q / (q - 1.0)
        gamma = 0.25
        shift = 3.0
        region = Region.full(small_grid)
        lhs = weighted_norm(uv, WeightSpec(0.0, shift, 1.0), region)
        rhs = weighted_norm(u, WeightSpec(gamma, shift, q), region) * weighted_norm(
            v, WeightSpec(-gamma, shift, dual), region
        )
        assert lhs <= rhs * (1 + 1e-12)

    def test_weight_at_least_one_on_deep_cone(self):
        # (t+R)^2 - r^2 >= t on t - r >= 1, so the weight >= 1 for gamma >= 0
        grid = Grid(t_max=6.0, r_max=6.0, nt=61, nr=61)
        tc, rc = grid.cell_centers()
        mask = (tc - rc >= 1.0) & (tc >= 1.0)
        vals = (tc + 0.0) ** 2 - rc**2
        assert np.all(vals[mask] >= tc[mask])
        assert np.all(vals[mask] ** 0.3 >= 1.0)


class TestNullCoords:
    def test_example(self):
        assert null_coords(1.0, 1.0) == (2.0, 0.0)

    def test_roundtrip(self):
        rng = np.random.default_rng(12)
        t = rng.uniform(0, 100, 10_000)
        r = rng.uniform(0, 100, 10_000)
        u, v = null_coords(t, r)
        t2, r2 = null_coords_inverse(u, v)
        assert np.max(np.abs(t2 - t)) <= 1e-15 * 100
        assert np.max(np.abs(r2 - r)) <= 1e-15 * 100

    def test_inverse_rejects_negative_radius(self):
        with pytest.raises(ValueError):
            null_coords_inverse(1.0, 2.0)
        t, r = null_coords_inverse(1.0, 2.0, require_nonnegative_radius=False)
        assert r == -0.5

    @given(st.floats(0, 50), st.floats(0, 50), st.floats(0, 50), st.floats(0, 50))
    def test_ordering_correspondence(self, t, r, s, rho):
        # 0 <= eta <= v <= xi <= u  <=>  0 <= s-rho <= t-r and t-r <= s+rho <= t+r
        u, v = null_coords(t, r)
        xi, eta = null_coords(s, rho)
        lhs = 0 <= eta <= v <= xi <= u
        rhs = (0 <= s - rho <= t - r) and (t - r <= s + rho <= t + r)
        assert lhs == rhs


class TestDyadicLayers:
    def test_small_time(self):
        layers = dyadic_layers(2.0)
        assert len(layers) == 3
        assert [(l.cone_lo, l.cone_hi) for l in layers] == [
            (1.0, 2.0), (2.0, 4.0), (4.0, 8.0)
        ]

    def test_large_time_count(self):
        assert len(dyadic_layers(1000.0)) == 12
        assert dyadic_layers(1000.0)[-1].cone_hi == 4000.0

    def test_partition_no_overlap(self):
        layers = dyadic_layers(16.0, t_minus_r_max=40.0)
        probes = np.linspace(1.0 + 1e-9, 40.0, 2017)
        t = 12.0  # inside [T/2, T]
        hits = np.zeros_like(probes, dtype=int)
        for lay in layers:
            hits += lay.contains(t, t - probes).astype(int)
        assert np.all(hits == 1)

    def test_rejects_small_horizon(self):
        with pytest.raises(ValueError):
            dyadic_layers(1.0)

    def test_respects_strip(self):
        layers = dyadic_layers(8.0)
        for lay in layers:
            assert lay.t_lo == 4.0 and lay.t_hi == 8.0
            assert not lay.contains(3.0, 1.0)

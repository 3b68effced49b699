"""Weighted space-time Lebesgue norms on radial fields.

Norms are taken with respect to the measure c_n r^{n-1} dr dt (c_n the
area of the unit (n-1)-sphere) against the Lorentz-invariant weight
((t+R)^2 - r^2)^gamma, over regions cut out of the grid: a time strip,
an optional cone layer a < t-r <= b, and an optional interior condition
r <= t/2.  Quadrature is cell based: a grid cell belongs to a region iff
its center does, the integrand is evaluated at cell centers (field values
averaged from the four corners), so refinement washes out boundary error
at second order.

A field that is nonzero where the weight is undefined ((t+R)^2 <= r^2) is
an error, not a silent clamp; this surfaces support violations in
upstream solvers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from wavelab.grids import Grid, RadialField


class WeightDomainError(ValueError):
    """Field has mass where the cone weight is undefined."""


def sphere_area(n: int) -> float:
    """Surface area of the unit (n-1)-sphere: 2 pi^{n/2} / Gamma(n/2)."""
    return 2.0 * math.pi ** (n / 2.0) / math.gamma(n / 2.0)


@dataclass(frozen=True)
class WeightSpec:
    """Weight ((t+R)^2 - r^2)^gamma paired with a Lebesgue exponent q."""

    gamma: float
    shift: float = 0.0  # R, the time shift
    q: float = 2.0

    def __post_init__(self):
        if self.q < 1:
            raise ValueError(f"Lebesgue exponent must be >= 1, got {self.q}")
        if self.shift < 0:
            raise ValueError("time shift must be >= 0")


@dataclass(frozen=True)
class Region:
    """Grid-aligned region: time strip, cone layer, optional interior cut.

    Membership: t_lo <= t <= t_hi, cone_lo < t - r <= cone_hi, and
    r <= t/2 when interior is set.
    """

    t_lo: float = 0.0
    t_hi: float = math.inf
    cone_lo: float = -math.inf
    cone_hi: float = math.inf
    interior: bool = False
    region_id: str = ""

    def contains(self, t, r):
        t = np.asarray(t, dtype=float)
        r = np.asarray(r, dtype=float)
        d = t - r
        ok = (t >= self.t_lo) & (t <= self.t_hi)
        ok &= (d > self.cone_lo) & (d <= self.cone_hi)
        if self.interior:
            ok &= r <= 0.5 * t
        return ok

    @classmethod
    def full(cls, grid: Grid) -> "Region":
        return cls(t_lo=0.0, t_hi=grid.t_max, region_id="full")

    @classmethod
    def time_window(cls, t_hi: float, t_lo: float = 0.0) -> "Region":
        return cls(t_lo=t_lo, t_hi=t_hi, region_id=f"t[{t_lo},{t_hi}]")

    @classmethod
    def box(cls, t_lo, t_hi) -> "Region":
        return cls(t_lo=t_lo, t_hi=t_hi, region_id=f"strip[{t_lo},{t_hi}]")


def weighted_norm(u: RadialField, weight: WeightSpec, region: Region,
                  n: int | None = None, support_tol: float = 1e-9) -> float:
    """(int_region |((t+R)^2 - r^2)^gamma u|^q c_n r^{n-1} dr dt)^{1/q}."""
    grid = u.grid
    if n is None:
        n = u.n
    if math.isfinite(region.t_hi) and region.t_hi > grid.t_max + 0.5 * grid.dt:
        raise ValueError(
            f"region extends to t = {region.t_hi} beyond the grid ({grid.t_max})"
        )
    if region.t_lo < -0.5 * grid.dt:
        raise ValueError("region starts before t = 0")

    tc, rc = grid.cell_centers()
    vals = u.values
    u_c = 0.25 * (vals[:-1, :-1] + vals[1:, :-1] + vals[:-1, 1:] + vals[1:, 1:])
    mask = region.contains(tc, rc)

    shifted = (tc + weight.shift) ** 2 - rc * rc
    defined = shifted > 0.0
    bad = mask & ~defined & (np.abs(u_c) > support_tol * max(u.max_abs(), 1e-300))
    if bad.any():
        worst = float(np.max(np.abs(u_c[bad])))
        raise WeightDomainError(
            f"field is nonzero (|u| up to {worst:.3e}) where the weight "
            "((t+R)^2 - r^2)^gamma is undefined"
        )

    use = mask & defined & (np.abs(u_c) > 0)
    if not use.any():
        return 0.0
    integrand = np.zeros_like(u_c)
    integrand[use] = (
        np.abs(shifted[use] ** weight.gamma * u_c[use]) ** weight.q
        * rc[use] ** (n - 1)
    )
    cell = grid.dt * grid.dr
    total = sphere_area(n) * cell * float(np.sum(integrand))
    return total ** (1.0 / weight.q)


def null_coords(t, r):
    """(u, v) = (t + r, t - r)."""
    t = np.asarray(t, dtype=float)
    r = np.asarray(r, dtype=float)
    return t + r, t - r


def null_coords_inverse(u, v, require_nonnegative_radius: bool = True):
    """(t, r) = ((u+v)/2, (u-v)/2); rejects u < v when a radius is required."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    if require_nonnegative_radius and np.any(u < v):
        raise ValueError("u < v gives a negative radius")
    return 0.5 * (u + v), 0.5 * (u - v)


def dyadic_layers(T: float, t_minus_r_max: float = math.inf) -> list[Region]:
    """Cone layers 2^{k-1} < t-r <= 2^k inside the time strip [T/2, T].

    Layers are enumerated for k = 1, 2, ... until they cover
    (1, min(t_minus_r_max, 4T)], the last layer clipped to that upper
    bound; the base region t - r <= 1 is excluded (fields of interest
    vanish there).  Interiors are pairwise disjoint and the union covers
    the stated range exactly.
    """
    if T < 2:
        raise ValueError("requires T >= 2")
    upper = min(t_minus_r_max, 4.0 * T)
    layers = []
    k = 1
    while 2.0 ** (k - 1) < upper:
        lo = 2.0 ** (k - 1)
        hi = min(2.0**k, upper)
        layers.append(
            Region(
                t_lo=0.5 * T,
                t_hi=T,
                cone_lo=lo,
                cone_hi=hi,
                region_id=f"layer_k{k}",
            )
        )
        k += 1
    return layers

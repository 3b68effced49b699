"""Odd-dimension radial wave propagators.

The inhomogeneous solve uses the radial Duhamel representation

    w(t, r) = kappa_n r^{-(n-1)/2} *
              int_0^t int_{|t-r-s|}^{t+r-s} P_m(mu) F(s, rho) rho^{(n-1)/2} drho ds

with P_m the Legendre polynomial of degree m = (n-3)/2 and
mu = (r^2 + rho^2 - (t-s)^2) / (2 r rho), which stays in [-1, 1] on the
integration domain.  The normalization kappa_n is pinned per dimension by
calibrating against the constant-forcing solution w = t^2/2 (see
DUHAMEL_KAPPA); kappa = 1/2 for n = 3, 5, 7.

Quadrature: composite midpoint in rho with the integration limits resolved
exactly (on grids with dt = dr the limits fall on rho gridlines and the
rule has a smooth error expansion), trapezoid in s.  The r^{-(n-1)/2}
prefactor is applied after integration; the r = 0 column is filled by
one-sided extrapolation.

The homogeneous (free) propagator is implemented for n = 3 only, by
d'Alembert's formula on the 1D reduction v = r u with odd extension.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from wavelab.grids import Grid, RadialField

#: calibrated normalization of the radial Duhamel representation
DUHAMEL_KAPPA = {3: 0.5, 5: 0.5, 7: 0.5}

SUPPORTED_DIMENSIONS = (3, 5, 7)

_SNAP = 1e-9  # gridline snapping tolerance, in units of dr


def legendre(m: int, x, tol: float = 1e-12):
    """Degree-m Legendre polynomial on [-1, 1] via the three-term recurrence.

    Arguments within tol of the interval are clamped; anything further out
    is rejected.
    """
    if m < 0 or int(m) != m:
        raise ValueError(f"degree must be a nonnegative integer, got {m}")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > 1.0 + tol):
        worst = float(np.max(np.abs(x)))
        raise ValueError(f"argument outside [-1, 1] beyond tolerance: |x| = {worst}")
    x = np.clip(x, -1.0, 1.0)
    p_prev = np.ones_like(x)
    if m == 0:
        return p_prev if p_prev.ndim else float(p_prev)
    p = x.copy()
    for k in range(1, m):
        p, p_prev = ((2 * k + 1) * x * p - k * p_prev) / (k + 1), p
    return p if p.ndim else float(p)


def mu(r, rho, tau, clamp_tol: float = 1e-12):
    """Spherical-means kernel argument (r^2 + rho^2 - tau^2)/(2 r rho).

    On the admissible domain |tau - r| <= rho <= tau + r the value lies in
    [-1, 1]; roundoff excursions up to clamp_tol are clamped.
    """
    r = np.asarray(r, dtype=float)
    rho = np.asarray(rho, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if np.any(r <= 0) or np.any(rho <= 0):
        raise ValueError("r and rho must be positive")
    val = (r * r + rho * rho - tau * tau) / (2.0 * r * rho)
    val = np.where(np.abs(val) <= 1.0 + clamp_tol, np.clip(val, -1.0, 1.0), val)
    return val if val.ndim else float(val)


@dataclass(frozen=True)
class SupportBox:
    """Declared support {s in [s_lo, s_hi], s - rho in [d_lo, d_hi]}."""

    s_lo: float = 0.0
    s_hi: float = math.inf
    d_lo: float = -math.inf
    d_hi: float = math.inf

    def contains(self, s, rho):
        s = np.asarray(s, dtype=float)
        rho = np.asarray(rho, dtype=float)
        d = s - rho
        return (
            (s >= self.s_lo)
            & (s <= self.s_hi)
            & (d >= self.d_lo)
            & (d <= self.d_hi)
        )

    @property
    def in_forward_cone(self) -> bool:
        return self.d_lo > 0


class RadialForcing:
    """Forcing term F(s, rho), closure-backed or sampled on a grid."""

    def __init__(self, fn=None, field: RadialField | None = None,
                 support: SupportBox = SupportBox(), name: str = ""):
        if (fn is None) == (field is None):
            raise ValueError("provide exactly one of fn or field")
        self.fn = fn
        self.field = field
        self.support = support
        self.name = name
        self._interp = None

    @classmethod
    def from_callable(cls, fn, support: SupportBox = SupportBox(), name: str = ""):
        return cls(fn=fn, support=support, name=name)

    @classmethod
    def constant(cls, value: float = 1.0):
        def fn(s, rho):
            s, rho = np.broadcast_arrays(np.asarray(s, float), np.asarray(rho, float))
            return np.full(s.shape, float(value))

        return cls(fn=fn, support=SupportBox(), name=f"constant({value})")

    @classmethod
    def from_field(cls, field: RadialField, support: SupportBox, name: str = "sampled"):
        return cls(field=field, support=support, name=name)

    def eval(self, s, rho) -> np.ndarray:
        if self.fn is not None:
            s, rho = np.broadcast_arrays(np.asarray(s, float), np.asarray(rho, float))
            out = np.asarray(self.fn(s, rho), dtype=float)
            return np.broadcast_to(out, s.shape) if out.shape != s.shape else out
        if self._interp is None:
            from scipy.interpolate import RegularGridInterpolator

            self._interp = RegularGridInterpolator(
                (self.field.grid.t, self.field.grid.r),
                self.field.values,
                bounds_error=False,
                fill_value=0.0,
            )
        s, rho = np.broadcast_arrays(np.asarray(s, float), np.asarray(rho, float))
        return self._interp(np.stack([s, rho], axis=-1))

    def eval_row(self, s: float, rho: np.ndarray) -> np.ndarray:
        """F(s, rho) for scalar s; fast row interpolation for sampled data."""
        if self.fn is not None:
            rho = np.asarray(rho, dtype=float)
            out = np.asarray(self.fn(s, rho), dtype=float)
            return np.broadcast_to(out, rho.shape) if out.shape != rho.shape else out
        g = self.field.grid
        k = int(round(s / g.dt))
        if 0 <= k < g.nt and abs(g.t[k] - s) <= 1e-9 * max(g.dt, 1.0):
            return np.interp(rho, g.r, self.field.values[k], left=0.0, right=0.0)
        return self.eval(s, rho)

    def spot_check_support(self, rng: np.random.Generator, count: int = 400,
                           s_span: float = 10.0, rho_span: float = 10.0) -> float:
        """Largest |F| sampled outside the declared support box."""
        s_hi = self.support.s_hi if math.isfinite(self.support.s_hi) else s_span
        s = rng.uniform(0.0, s_hi + 2.0, count)
        rho = rng.uniform(0.0, rho_span, count)
        outside = ~self.support.contains(s, rho)
        if not outside.any():
            return 0.0
        vals = self.eval(s[outside], rho[outside])
        return float(np.max(np.abs(vals)))


def duhamel_radial(forcing: RadialForcing, n: int, grid: Grid,
                   kappa: float | None = None,
                   enforce_cone: bool = True) -> RadialField:
    """Zero-data solution of box w = F for odd n on the given grid.

    With enforce_cone the declared forcing support must sit strictly inside
    the forward cone (d_lo > 0 and s_hi finite), which keeps rho away from
    the axis where the r^{-(n-1)/2} prefactor is singular.  Callers that
    integrate data-driven forcings (which reach the axis but are harmless
    at n = 3) pass enforce_cone=False.
    """
    if n not in SUPPORTED_DIMENSIONS:
        raise ValueError(
            f"n must be one of {SUPPORTED_DIMENSIONS} (odd, with calibrated kappa); got {n}"
        )
    if enforce_cone and not (forcing.support.in_forward_cone
                             and math.isfinite(forcing.support.s_hi)):
        raise ValueError(
            "forcing support must be strictly inside the forward cone "
            "(d_lo > 0, s_hi < inf); pass enforce_cone=False to lift this"
        )
    if kappa is None:
        kappa = DUHAMEL_KAPPA[n]
    m = (n - 3) // 2
    if m == 0:
        raw = _duhamel_moment_zero(forcing, grid)
    else:
        raw = _duhamel_generic(forcing, grid, m)

    p_pow = (n - 1) // 2
    w = kappa * raw
    r = grid.r
    w[:, 1:] /= r[1:] ** p_pow
    if m == 0:
        # exact axis limit: w(t, 0) = 2 kappa int_0^t F(s, t-s)(t-s) ds,
        # which keeps the output nonnegative for nonnegative forcing
        w[:, 0] = 2.0 * kappa * _axis_limit_moment_zero(forcing, grid)
    else:
        # r = 0 sits under the prefactor singularity: one-sided extrapolation
        w[:, 0] = 2.0 * w[:, 1] - w[:, 2]

    support_radius = None
    if math.isfinite(forcing.support.d_lo):
        support_radius = 1.0 - forcing.support.d_lo
    return RadialField(grid, w, support_radius=support_radius, n=n)


def _duhamel_moment_zero(forcing: RadialForcing, grid: Grid) -> np.ndarray:
    """Inner double integral for n = 3 (P_0 = 1, integrand F rho).

    Per forcing slice s_k the whole-cell midpoint sums are accumulated into
    a cumulative table at rho gridlines (in extended precision, so
    differencing across distant gridlines stays exact), and the two partial
    cells at the exact limits |t-r-s|, t+r-s are added separately.
    """
    t, r = grid.t, grid.r
    h = grid.dr
    dt = grid.dt
    ncell = int(math.ceil((grid.t_max + grid.r_max) / h - _SNAP)) + 1
    mids = (np.arange(ncell) + 0.5) * h
    lines = np.arange(ncell + 1) * h

    W = np.zeros(grid.shape)
    for k in range(grid.nt - 1):
        s = t[k]
        f_mid = forcing.eval_row(s, mids)
        base = np.zeros(ncell + 1, dtype=np.longdouble)
        np.cumsum(np.asarray(f_mid * mids * h, dtype=np.longdouble), out=base[1:])

        tau = t[k + 1:] - s  # (ni,)
        a = np.abs(tau[:, None] - r[None, :])
        b = tau[:, None] + r[None, :]
        ga = np.ceil(a / h - _SNAP).astype(np.int64)
        gb = np.floor(b / h + _SNAP).astype(np.int64)
        np.clip(ga, 0, ncell, out=ga)
        np.clip(gb, 0, ncell, out=gb)
        split = ga <= gb  # at least one gridline inside [a, b]

        whole = np.where(split, (base.take(gb) - base.take(ga)).astype(float), 0.0)

        xa = ga * h
        xb = gb * h
        wa = np.where(split, np.maximum(xa - a, 0.0), 0.0)
        wb = np.where(split, np.maximum(b - xb, 0.0), 0.0)
        ws = np.where(split, 0.0, b - a)
        ma = a + 0.5 * wa
        mb = xb + 0.5 * wb
        ms = 0.5 * (a + b)

        fa = forcing.eval_row(s, ma.ravel()).reshape(ma.shape)
        fb = forcing.eval_row(s, mb.ravel()).reshape(mb.shape)
        fs = forcing.eval_row(s, ms.ravel()).reshape(ms.shape)
        inner = whole + fa * ma * wa + fb * mb * wb + fs * ms * ws

        weight = dt * (0.5 if k == 0 else 1.0)
        W[k + 1:, :] += weight * inner
    return W


# antiderivatives of P_m and of x P_m, used by the m >= 1 angular rule
_PM_ANTIDERIVATIVES = {
    1: (lambda x: 0.5 * x * x, lambda x: x**3 / 3.0),
    2: (lambda x: 0.5 * (x**3 - x), lambda x: (3.0 * x**4 - 2.0 * x * x) / 8.0),
}


def _axis_limit_moment_zero(forcing: RadialForcing, grid: Grid,
                            refine: int = 4) -> np.ndarray:
    """Values of int_0^t F(s, t-s)(t-s) ds at the grid times.

    Trapezoid on a diagonal s-grid refined below dt: the integrand is the
    restriction of F to the backward light ray, which narrow forcings cross
    on a scale the ambient grid need not resolve.
    """
    t = grid.t
    out = np.zeros(grid.nt)
    for i in range(1, grid.nt):
        ns = i * refine
        s = t[i] * np.arange(ns + 1) / ns
        tau = t[i] - s
        vals = forcing.eval(s, tau) * tau
        out[i] = (t[i] / ns) * (np.sum(vals) - 0.5 * (vals[0] + vals[-1]))
    return out


def _duhamel_generic(forcing: RadialForcing, grid: Grid, m: int) -> np.ndarray:
    """Inner double integral for m >= 1.

    Away from the axis (r >= tau/2) the rho-midpoint rule of the m = 0 path
    resolves the Legendre kernel and is used unchanged.  Near the axis the
    kernel oscillates on the rho-scale r while the integral itself is
    O(r^{m+1}); a fixed-step midpoint rule loses all significant digits
    there.  Instead the integral is transformed to the angular variable
    (rho = r mu + sqrt(r^2 mu^2 + tau^2 - r^2), single monotone branch for
    r < tau) and P_m is integrated exactly against a piecewise-linear
    interpolant of the remaining smooth factor, which keeps the relative
    error at O(step^2) uniformly in r.
    """
    t, r = grid.t, grid.r
    h = grid.dr
    dt = grid.dt
    p_pow = m + 1  # (n-1)/2
    anti_q, anti_r = _PM_ANTIDERIVATIVES[m]

    W = np.zeros(grid.shape)
    rr = r[None, :]
    for k in range(grid.nt - 1):
        s = t[k]
        tau = t[k + 1:] - s
        tt = tau[:, None]
        a = np.abs(tt - rr)
        b = tt + rr
        width = b - a
        near = (rr < 0.5 * tt) & (width > 0)
        far = (~near) & (width > 0)
        inner = np.zeros_like(width)

        # rho-midpoint on the far set
        nsub = np.where(far, np.ceil(width / h - _SNAP).astype(np.int64), 0)
        np.maximum(nsub, far.astype(np.int64), out=nsub)
        wsub = np.where(nsub > 0, width / np.maximum(nsub, 1), 0.0)
        for c in range(int(nsub.max(initial=0))):
            active = c < nsub
            mid = a + (c + 0.5) * wsub
            denom = 2.0 * rr * mid
            ok = active & (denom > 0)
            mu_val = np.where(
                ok, (rr * rr + mid * mid - tt * tt) / np.where(ok, denom, 1.0), 0.0
            )
            np.clip(mu_val, -1.0, 1.0, out=mu_val)
            pm = legendre(m, mu_val)
            f_val = forcing.eval_row(s, mid.ravel()).reshape(mid.shape)
            inner += np.where(ok, pm * f_val * mid**p_pow * wsub, 0.0)

        # angular rule on the near set
        r2 = rr * rr
        gap = tt * tt - r2

        def smooth_factor(x):
            # g(mu) = F(s, rho) rho^{m+2} r / S with rho = r mu + S
            S = np.sqrt(np.maximum(r2 * x * x + gap, 0.0))
            rho = rr * x + S
            f_val = forcing.eval_row(s, rho.ravel()).reshape(rho.shape)
            safe = np.where(S > 0, S, 1.0)
            return np.where(near, f_val * rho ** (m + 2) * rr / safe, 0.0)

        nmu = np.where(near, np.ceil(3.5 * rr / h).astype(np.int64), 0)
        np.maximum(nmu, 8 * near.astype(np.int64), out=nmu)
        dmu = np.where(nmu > 0, 2.0 / np.maximum(nmu, 1), 0.0)
        for c in range(int(nmu.max(initial=0))):
            seg = near & (c < nmu)
            x0 = -1.0 + c * dmu
            x1 = np.where(c + 1 == nmu, 1.0, x0 + dmu)
            g0 = smooth_factor(x0)
            g1 = smooth_factor(x1)
            slope = np.where(seg, (g1 - g0) / np.where(dmu > 0, dmu, 1.0), 0.0)
            icept = g0 - slope * x0
            contrib = slope * (anti_r(x1) - anti_r(x0)) + icept * (
                anti_q(x1) - anti_q(x0)
            )
            inner += np.where(seg, contrib, 0.0)

        weight = dt * (0.5 if k == 0 else 1.0)
        W[k + 1:, :] += weight * inner
    return W


def calibrate_kappa(n: int, grid: Grid | None = None) -> float:
    """Least-squares normalization so that F = 1 gives w = t^2/2."""
    if grid is None:
        grid = Grid(t_max=2.0, r_max=2.0, nt=81, nr=81)
    w_unit = duhamel_radial(
        RadialForcing.constant(1.0), n, grid, kappa=1.0, enforce_cone=False
    )
    tt, _ = grid.meshes()
    target = 0.5 * tt * tt
    num = float(np.sum(w_unit.values * target))
    den = float(np.sum(w_unit.values * w_unit.values))
    return num / den


def free_radial_n3(f, g, epsilon: float, grid: Grid, support_radius: float,
                   check_support: bool = True):
    """Free radial wave solution at n = 3 by d'Alembert on v = r u.

    f, g are radial profiles supported in {r <= support_radius - 1}; the
    solution is u = [phi(r+t) + phi(r-t) + Psi(r+t) - Psi(r-t)] / (2r) with
    phi(xi) = xi f(|xi|) and Psi an antiderivative of xi g(|xi|), and the
    r -> 0 column is the averaged limit phi'(t) + psi(t).

    Returns (field, decay_sup) where decay_sup is the grid supremum of
    |u| (1+t)(1+|t-r|) / epsilon, the constant in the free dispersive decay
    bound.
    """
    R = float(support_radius)
    if R < 1.0:
        raise ValueError("support radius must be >= 1")
    tail = np.linspace(R - 1.0 + 1e-9, R + 4.0, 257)
    if check_support:
        worst = max(
            float(np.max(np.abs(f(tail)))), float(np.max(np.abs(g(tail))))
        )
        if worst > 1e-12:
            raise ValueError(
                f"data must vanish for r > {R - 1} (found |data| = {worst:.3e})"
            )

    def phi(xi):
        xi = np.asarray(xi, dtype=float)
        return xi * np.asarray(f(np.abs(xi)), dtype=float)

    # Psi(x) = int_0^x xi g(|xi|) dxi is even; tabulate once on a fine axis
    span = grid.t_max + grid.r_max
    npts = max(4 * max(grid.nt, grid.nr), 1024)
    psi_axis = np.linspace(0.0, span, npts)
    integrand = psi_axis * np.asarray(g(psi_axis), dtype=float)
    psi_table = np.concatenate(
        [[0.0], np.cumsum(0.5 * (integrand[1:] + integrand[:-1]) * np.diff(psi_axis))]
    )

    def psi_even_int(x):
        return np.interp(np.abs(x), psi_axis, psi_table)

    tt, rr = grid.meshes()
    plus = rr + tt
    minus = rr - tt
    v = 0.5 * (phi(plus) + phi(minus)) + 0.5 * (psi_even_int(plus) - psi_even_int(minus))

    u = np.empty(grid.shape)
    u[:, 1:] = v[:, 1:] / rr[:, 1:]
    h0 = 0.25 * grid.dr
    tcol = grid.t
    dphi = (phi(tcol + h0) - phi(tcol - h0)) / (2.0 * h0)
    u[:, 0] = dphi + tcol * np.asarray(g(tcol), dtype=float)
    u *= epsilon

    field = RadialField(grid, u, support_radius=R, n=3)
    if epsilon == 0.0 or field.max_abs() == 0.0:
        return field, 0.0
    decay = np.abs(u) * (1.0 + tt) * (1.0 + np.abs(tt - rr)) / abs(epsilon)
    return field, float(np.max(decay))


def free_slice_n3(f, g, epsilon: float, t: float, r: np.ndarray,
                  support_radius: float):
    """Free solution on a single time slice (d'Alembert, n = 3)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    g_slice = Grid(t_max=max(t, 1e-6), r_max=float(np.max(r)) + 1e-9,
                   nt=2, nr=max(len(np.atleast_1d(r)), 2))
    # reuse the grid-based path on a 2-row grid, then interpolate the row
    field, _ = free_radial_n3(f, g, epsilon, g_slice, support_radius,
                              check_support=False)
    return np.interp(np.atleast_1d(r), g_slice.r, field.values[-1])

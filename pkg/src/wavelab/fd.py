"""Finite-difference machinery for the radial wave equation (n = 3).

Two independent tools live here.  `solve_radial_fd` is a leapfrog solver
for the 1D reduction d^2_t v = d^2_r v + r F of the radial wave equation
(v = r u, odd in r); it serves as the reference oracle against which the
quadrature-based propagators are validated, and deliberately shares no
code with them.  `dalembertian` applies the centered discrete wave
operator to a sampled field so that fixed-point residuals |box u - F| can
be measured.
"""

from __future__ import annotations

import numpy as np

from wavelab.grids import Grid, RadialField


def solve_radial_fd(grid: Grid, forcing=None, f=None, g=None, epsilon=1.0,
                    support_radius=None) -> RadialField:
    """Leapfrog solution of box u = F, u(0)=eps*f, u_t(0)=eps*g at n = 3.

    The r-domain is extended internally to r_max + t_max so the outer
    boundary stays causally silent, then cropped back to the grid.
    Requires dt <= dr (CFL).
    """
    dt, dr = grid.dt, grid.dr
    lam = dt / dr
    if lam > 1.0 + 1e-12:
        raise ValueError(f"CFL violated: dt/dr = {lam:.3f} > 1")
    lam2 = lam * lam

    # extended radial axis; one ghost cell beyond is never reached
    nr_ext = grid.nr + int(np.ceil(grid.t_max / dr)) + 2
    r = dr * np.arange(nr_ext)

    fv = epsilon * np.asarray(f(r), dtype=float) if f is not None else np.zeros(nr_ext)
    gv = epsilon * np.asarray(g(r), dtype=float) if g is not None else np.zeros(nr_ext)

    zero_row = np.zeros(nr_ext)

    def rF(k):
        if forcing is None:
            return zero_row
        return r * np.asarray(forcing(grid.t[k], r), dtype=float)

    v = np.zeros((grid.nt, nr_ext))
    v[0] = r * fv
    if grid.nt > 1:
        # Taylor start: v(dt) = v0 + dt v_t(0) + dt^2/2 (v_rr(0) + rF(0))
        d2 = v[0, 2:] - 2.0 * v[0, 1:-1] + v[0, :-2]
        v[1, 1:-1] = (
            v[0, 1:-1]
            + dt * (r * gv)[1:-1]
            + 0.5 * dt * dt * (d2 / (dr * dr) + rF(0)[1:-1])
        )
        v[1, 0] = 0.0
    for k in range(1, grid.nt - 1):
        v[k + 1, 1:-1] = (
            2.0 * v[k, 1:-1]
            - v[k - 1, 1:-1]
            + lam2 * (v[k, 2:] - 2.0 * v[k, 1:-1] + v[k, :-2])
            + dt * dt * rF(k)[1:-1]
        )
        v[k + 1, 0] = 0.0
        v[k + 1, -1] = 0.0

    u = np.empty(grid.shape)
    u[:, 1:] = v[:, 1 : grid.nr] / r[1 : grid.nr]
    # u(t, 0) = d_r v(t, 0), second-order one-sided with v(t,0) = 0
    u[:, 0] = (4.0 * v[:, 1] - v[:, 2]) / (2.0 * dr)
    return RadialField(grid, u, support_radius=support_radius, n=3)


def dalembertian(field: RadialField) -> np.ndarray:
    """Centered discrete box u on interior nodes, via v = r u.

    Returns an array of shape (nt-2, nr-2) holding
    (v_tt - v_rr)/r at t_1..t_{nt-2}, r_1..r_{nr-2}.
    """
    g = field.grid
    v = g.r[None, :] * field.values
    vtt = (v[2:, 1:-1] - 2.0 * v[1:-1, 1:-1] + v[:-2, 1:-1]) / (g.dt * g.dt)
    vrr = (v[1:-1, 2:] - 2.0 * v[1:-1, 1:-1] + v[1:-1, :-2]) / (g.dr * g.dr)
    return (vtt - vrr) / g.r[None, 1:-1]


def residual_l2(field: RadialField, forcing_values: np.ndarray,
                r_min: float = 0.0, t_pad: float = 0.0) -> float:
    """Relative L2 mismatch between box u and F over interior nodes.

    forcing_values must be sampled on the field's full grid; r_min drops
    the columns nearest the axis where the 1/r division is noisy, t_pad
    drops initial/final time rows.
    """
    g = field.grid
    box = dalembertian(field)
    f_int = np.asarray(forcing_values, dtype=float)[1:-1, 1:-1]
    mask = np.ones_like(box, dtype=bool)
    if r_min > 0:
        mask &= g.r[None, 1:-1] >= r_min
    if t_pad > 0:
        tcol = g.t[1:-1, None]
        mask &= (tcol >= t_pad) & (tcol <= g.t_max - t_pad)
    diff = np.where(mask, box - f_int, 0.0)
    ref = np.where(mask, f_int, 0.0)
    num = np.sqrt(np.sum(diff**2))
    den = np.sqrt(np.sum(ref**2))
    if den == 0.0:
        return num
    return float(num / den)


def relative_l2(a: RadialField, b: RadialField) -> float:
    """||a - b||_2 / ||b||_2 over the common grid."""
    if a.grid != b.grid:
        raise ValueError("fields live on different grids")
    den = np.sqrt(np.sum(b.values**2))
    if den == 0.0:
        return float(np.sqrt(np.sum((a.values - b.values) ** 2)))
    return float(np.sqrt(np.sum((a.values - b.values) ** 2)) / den)


def convergence_order(errors: list[float], floor: float = 1e-12) -> float:
    """Observed order from successive errors at 2x refinements.

    Returns inf when the errors sit at the exactness floor (the quadrature
    reproduced the reference to machine precision).
    """
    errors = [float(e) for e in errors]
    if len(errors) < 2:
        raise ValueError("need at least two refinement levels")
    if max(errors) <= floor:
        return float("inf")
    rates = []
    for e0, e1 in zip(errors[:-1], errors[1:]):
        if e1 <= floor:
            rates.append(float("inf"))
        else:
            rates.append(np.log2(e0 / e1))
    return float(min(rates))

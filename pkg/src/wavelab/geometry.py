"""Light-cone geometry predicates and sphere-tangency angle bounds.

The two quantitative results here control the angle between the unit
vectors x/|x| and y/|y| for points constrained by the support of the
forward wave kernel:

* ``tangent_sphere_angle_bound``: with (t, x) within unit distance of the
  light cone, s comparable to t and y within unit distance of the sphere
  |y| = s, kernel support |x - y| <= t - s forces the angle to be
  O(1/sqrt(t)); the admissible constant is derived explicitly from the
  chain of inequalities in ``tangent_sphere_constant``.

* ``internal_tangency_angle_window``: when x lies within delta/2 of the
  sphere of radius t - |y| around y (internally tangent to the sphere of
  radius t), and t - |x| is comparable to delta, the angle is pinned to a
  two-sided window ~ sqrt(delta).  The absolute constant C0 is calibrated
  once on a pilot sample (``calibrate_internal_tangency_constant``) and
  then frozen.

Both proofs run through the exact identity
|x - y|^2 = (|x| - |y|)^2 + |x| |y| |x/|x| - y/|y||^2, exposed as
``angle_identity_residual`` for direct verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

#: frozen calibration of the internal-tangency window constant (pilot
#: sample max/min of angle/sqrt(delta) over the admissible set, +10%)
INTERNAL_TANGENCY_C0 = 2.4

#: delta must stay below this threshold in the internal-tangency lemma
INTERNAL_TANGENCY_DELTA_MAX = 0.05


@dataclass(frozen=True)
class LightConePoint:
    t: float
    x: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        if self.t < 0:
            raise ValueError("t must be >= 0")

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.x))

    def in_forward_cone(self) -> bool:
        return self.radius <= self.t


def huygens_support_check(t, s, x, y) -> bool:
    """True iff |x - y| <= t - s (closed kernel support convention)."""
    if t < s:
        raise ValueError("requires t >= s")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return bool(np.linalg.norm(x - y) <= t - s)


def unit_angle(x, y) -> float:
    """|x/|x| - y/|y||."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    return float(np.linalg.norm(x / np.linalg.norm(x) - y / np.linalg.norm(y)))


def angle_identity_residual(x, y) -> float:
    """Relative residual of |x-y|^2 = (|x|-|y|)^2 + |x||y| angle^2."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    lhs = float(np.dot(x - y, x - y))
    rhs = (nx - ny) ** 2 + nx * ny * unit_angle(x, y) ** 2
    scale = max(abs(lhs), abs(rhs), 1e-300)
    return abs(lhs - rhs) / scale


def tangent_sphere_constant(t: float) -> float:
    """Explicit admissible constant for the tangent-sphere angle bound.

    From angle^2 <= (t-|x|)(t+|x|)/(|x||y|) <= 1*(2t)/((t-1)(t/10-1)),
    so angle <= C/sqrt(t) with C = sqrt(2 t^2 / ((t-1)(t/10-1))).
    """
    if t <= 10:
        raise ValueError("constant derivation needs t > 10")
    return math.sqrt(2.0 * t * t / ((t - 1.0) * (t / 10.0 - 1.0)))


@dataclass(frozen=True)
class AngleBoundResult:
    angle: float
    bound_ok: bool
    constant: float
    identity_residual: float


def tangent_sphere_angle_bound(t, x, s, y, constant: float | None = None,
                               tol: float = 1e-9) -> AngleBoundResult:
    """Angle |x/|x| - y/|y|| under the kernel-support hypotheses.

    Hypotheses (rejected on violation): t >= 20, 0 <= t-|x| <= 1,
    t/10 <= s <= t, s-1 <= |y| <= s, |x-y| <= t-s.  Returns the angle,
    whether it satisfies angle <= C/sqrt(t) for the derived constant, and
    the relative residual of the exact angle identity.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if t < 20:
        raise ValueError("requires t >= 20")
    if not (-tol <= t - nx <= 1 + tol):
        raise ValueError(f"requires 0 <= t-|x| <= 1, got {t - nx}")
    if not (t / 10 - tol <= s <= t + tol):
        raise ValueError(f"requires t/10 <= s <= t, got s = {s}")
    if not (s - 1 - tol <= ny <= s + tol):
        raise ValueError(f"requires s-1 <= |y| <= s, got |y| = {ny}")
    if float(np.linalg.norm(x - y)) > t - s + tol:
        raise ValueError("point outside kernel support |x-y| <= t-s")
    if constant is None:
        constant = tangent_sphere_constant(t)
    angle = unit_angle(x, y)
    return AngleBoundResult(
        angle=angle,
        bound_ok=angle <= constant / math.sqrt(t),
        constant=constant,
        identity_residual=angle_identity_residual(x, y),
    )


def sample_tangent_sphere(t: float, count: int, rng: np.random.Generator,
                          dim: int = 3) -> list[tuple[np.ndarray, float, np.ndarray]]:
    """Admissible (x, s, y) tuples for the tangent-sphere bound at time t.

    Rejection sampling: |x| = t - U[0,1], s = U[t/10, t], |y| = s - U[0,1],
    then the angle between x and y is drawn uniformly over the cone allowed
    by |x - y| <= t - s (tuples with an empty cone are redrawn).
    """
    out = []
    while len(out) < count:
        nx = t - rng.uniform(0.0, 1.0)
        s = rng.uniform(t / 10.0, t)
        ny = s - rng.uniform(0.0, 1.0)
        if ny <= 0:
            continue
        # |x-y|^2 = nx^2+ny^2-2 nx ny cos(theta) <= (t-s)^2
        cos_min = (nx * nx + ny * ny - (t - s) ** 2) / (2.0 * nx * ny)
        if cos_min > 1.0:
            continue
        c = rng.uniform(max(cos_min, -1.0), 1.0)
        x_dir = _random_unit(rng, dim)
        y_dir = _rotate_towards(x_dir, c, rng, dim)
        out.append((nx * x_dir, s, ny * y_dir))
    return out


def internal_tangency_angle_window(t, x, y, delta,
                                   c0: float = INTERNAL_TANGENCY_C0,
                                   tol: float = 1e-9):
    """Angle window [C0^-1 sqrt(delta), C0 sqrt(delta)] membership.

    Hypotheses (rejected on violation): t > 5, 1 <= |y| <= 2,
    | |x-y| - (t-|y|) | <= delta/2, delta <= t-|x| <= 2 delta, and delta
    below the fixed threshold.  Returns (angle, in_window, identity
    residual) as an AngleBoundResult with constant c0.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    nx = float(np.linalg.norm(x))
    ny = float(np.linalg.norm(y))
    if not t > 5:
        raise ValueError("requires t > 5")
    if not (1 - tol <= ny <= 2 + tol):
        raise ValueError(f"requires 1 <= |y| <= 2, got {ny}")
    if delta > INTERNAL_TANGENCY_DELTA_MAX + tol:
        raise ValueError(f"delta must be <= {INTERNAL_TANGENCY_DELTA_MAX}")
    if abs(float(np.linalg.norm(x - y)) - (t - ny)) > 0.5 * delta + tol:
        raise ValueError("x not within delta/2 of the internally tangent sphere")
    if not (delta - tol <= t - nx <= 2 * delta + tol):
        raise ValueError(f"requires delta <= t-|x| <= 2 delta, got {t - nx}")
    angle = unit_angle(x, y)
    lo = math.sqrt(delta) / c0
    hi = math.sqrt(delta) * c0
    return AngleBoundResult(
        angle=angle,
        bound_ok=lo <= angle <= hi,
        constant=c0,
        identity_residual=angle_identity_residual(x, y),
    )


def sample_internal_tangency(t: float, delta: float, count: int,
                             rng: np.random.Generator, dim: int = 3):
    """Admissible (x, y) pairs for the internal-tangency window."""
    out = []
    while len(out) < count:
        ny = rng.uniform(1.0, 2.0)
        nx = t - rng.uniform(delta, 2.0 * delta)
        d = rng.uniform(t - ny - 0.5 * delta, t - ny + 0.5 * delta)
        # solve for the x-y angle giving |x-y| = d
        c = (nx * nx + ny * ny - d * d) / (2.0 * nx * ny)
        if not -1.0 <= c <= 1.0:
            continue
        y_dir = _random_unit(rng, dim)
        x_dir = _rotate_towards(y_dir, c, rng, dim)
        out.append((nx * x_dir, ny * y_dir))
    return out


def tangent_ray_configuration(t: float, delta: float, y=None, dim: int = 3):
    """Near-collinear admissible pair: x along y/|y| at the window's low edge.

    Takes |x| = t - delta and |x - y| = t - |y| - delta/2, the admissible
    configuration with the smallest sphere separation; the resulting angle
    sits near the lower edge of the window.
    """
    if y is None:
        y = np.zeros(dim)
        y[0] = 1.5
    y = np.asarray(y, dtype=float)
    ny = float(np.linalg.norm(y))
    nx = t - delta
    d = t - ny - 0.5 * delta
    c = (nx * nx + ny * ny - d * d) / (2.0 * nx * ny)
    if not -1.0 <= c <= 1.0:
        raise ValueError("no admissible tangent-ray configuration at these scales")
    # rotate in a fixed coordinate plane for determinism
    e1 = y / ny
    e2 = np.zeros(dim)
    e2[int(np.argmin(np.abs(e1)))] = 1.0
    e2 = e2 - np.dot(e2, e1) * e1
    e2 /= np.linalg.norm(e2)
    x = nx * (c * e1 + math.sqrt(max(1.0 - c * c, 0.0)) * e2)
    return x, y


def calibrate_internal_tangency_constant(count: int = 20000, seed: int = 7,
                                         margin: float = 0.10) -> float:
    """Pilot-sample calibration of the window constant C0.

    Sweeps t and delta over the admissible ranges, records
    angle/sqrt(delta), and returns (1+margin) * max(worst_high, 1/worst_low).
    """
    rng = np.random.default_rng(seed)
    hi = 0.0
    lo = math.inf
    for t in (5.5, 10.0, 40.0, 200.0):
        for delta in (0.05, 0.01, 0.002):
            pairs = sample_internal_tangency(t, delta, count // 12, rng)
            for x, y in pairs:
                ratio = unit_angle(x, y) / math.sqrt(delta)
                hi = max(hi, ratio)
                lo = min(lo, ratio)
    return (1.0 + margin) * max(hi, 1.0 / lo)


def _random_unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim)
    return v / np.linalg.norm(v)


def _rotate_towards(direction: np.ndarray, cos_angle: float,
                    rng: np.random.Generator, dim: int) -> np.ndarray:
    """Unit vector at the given cosine from `direction`, random azimuth."""
    perp = rng.normal(size=dim)
    perp -= np.dot(perp, direction) * direction
    norm = np.linalg.norm(perp)
    if norm < 1e-12:
        return direction
    perp /= norm
    sin_angle = math.sqrt(max(1.0 - cos_angle * cos_angle, 0.0))
    return cos_angle * direction + sin_angle * perp

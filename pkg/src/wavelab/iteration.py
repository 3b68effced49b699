"""Small-amplitude Picard iteration for the radial semilinear wave equation.

The recursion u_m = u_0 + box^{-1} F_p(u_{m-1}) (zero-data Duhamel solve of
the previous nonlinearity) is run on a truncated grid, recording the
weighted norms

    A_m = || ((t+R)^2 - r^2)^gamma u_m ||_{L^{p+1}}
    B_m = || ((t+R)^2 - r^2)^gamma (u_m - u_{m-1}) ||_{L^{p+1}}

with B_0 = A_0 (u_{-1} = 0 by convention).  Contraction holds when
A_m <= 2 A_0 and 2 B_{m+1} <= B_m throughout; the module provides the
iteration driver, an amplitude-threshold bisection, a blowup growth
indicator for subcritical powers, and the sup-weighted pointwise ratio
check used at n = 3.

All norms are over the truncated domain only; thresholds depend on the
truncation and are reported as such.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from wavelab import fd
from wavelab.exponents import critical_power, weight_window
from wavelab.grids import Grid, RadialField
from wavelab.norms import Region, WeightSpec, weighted_norm
from wavelab.radial import RadialForcing, SupportBox, duhamel_radial, free_radial_n3

CONTRACTION_SLACK = 1.0 + 1e-9


@dataclass(frozen=True)
class Nonlinearity:
    """Power-type nonlinearity with derivative-bound constants.

    The evaluator must satisfy |F(u)| <= c0 |u|^p and |F'(u)| <= c1 |u|^{p-1}
    (spot-checked by verify_bounds on random samples).
    """

    p: float
    fn: object
    c0: float
    c1: float
    name: str = ""

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"power must be > 1, got {self.p}")

    def __call__(self, u):
        return self.fn(u)

    @classmethod
    def abs_power(cls, p: float) -> "Nonlinearity":
        """Model case F(u) = |u|^p (c0 = 1, c1 = p)."""
        return cls(p=p, fn=lambda u: np.abs(u) ** p, c0=1.0, c1=p, name="abs_power")

    @classmethod
    def signed_power(cls, p: float) -> "Nonlinearity":
        """Signed variant F(u) = |u|^{p-1} u."""
        return cls(
            p=p,
            fn=lambda u: np.abs(u) ** (p - 1.0) * u,
            c0=1.0,
            c1=p,
            name="signed_power",
        )

    @classmethod
    def zero(cls, p: float) -> "Nonlinearity":
        return cls(p=p, fn=lambda u: np.zeros_like(np.asarray(u, float)),
                   c0=0.0, c1=0.0, name="zero")

    def verify_bounds(self, rng: np.random.Generator, count: int = 2000,
                      u_max: float = 10.0, tol: float = 1e-6) -> dict:
        """Sampled check of the growth and derivative bounds."""
        u = rng.uniform(-u_max, u_max, count)
        u = u[np.abs(u) > 1e-3]
        fv = np.asarray(self(u))
        growth_ok = bool(np.all(np.abs(fv) <= self.c0 * np.abs(u) ** self.p + tol))
        h = 1e-6 * np.maximum(np.abs(u), 1.0)
        deriv = (np.asarray(self(u + h)) - np.asarray(self(u - h))) / (2 * h)
        deriv_ok = bool(
            np.all(np.abs(deriv) <= self.c1 * np.abs(u) ** (self.p - 1.0) * (1 + 1e-3) + tol)
        )
        return {"growth_ok": growth_ok, "derivative_ok": deriv_ok}


@dataclass(frozen=True)
class CauchyProblem:
    """Radial small-amplitude Cauchy problem on a truncated grid (n = 3)."""

    epsilon: float
    f: object
    g: object
    support_radius: float
    nonlinearity: Nonlinearity
    gamma: float | None
    grid: Grid
    n: int = 3

    def __post_init__(self):
        if self.n != 3:
            raise ValueError("the nonlinear iteration runs at n = 3 only")
        if self.epsilon < 0:
            raise ValueError("amplitude must be >= 0")
        if self.support_radius < 1:
            raise ValueError("support radius must be >= 1")
        if self.grid.r_max < self.support_radius - 1:
            raise ValueError("grid does not resolve the data support")

    @property
    def p(self) -> float:
        return self.nonlinearity.p

    def weight(self) -> WeightSpec:
        gamma = 0.0 if self.gamma is None else self.gamma
        return WeightSpec(gamma=gamma, shift=self.support_radius, q=self.p + 1.0)

    def with_epsilon(self, epsilon: float) -> "CauchyProblem":
        from dataclasses import replace

        return replace(self, epsilon=epsilon)

    @classmethod
    def build(cls, epsilon, f, g, support_radius, nonlinearity, gamma,
              t_max, step) -> "CauchyProblem":
        """Aligned grid with r_max = t_max + R so the support cone fits."""
        grid = Grid.aligned(t_max, t_max + support_radius, step)
        return cls(epsilon=epsilon, f=f, g=g, support_radius=support_radius,
                   nonlinearity=nonlinearity, gamma=gamma, grid=grid)


@dataclass
class IterationTrace:
    """Per-step weighted norms and contraction bookkeeping."""

    a: list[float] = field(default_factory=list)
    b: list[float] = field(default_factory=list)
    status: str = "max_steps"
    residual: float | None = None
    decay_constant: float = 0.0

    @property
    def steps(self) -> int:
        return len(self.a) - 1

    @property
    def ratios(self) -> list[float]:
        return [
            self.b[m + 1] / self.b[m] if self.b[m] > 0 else math.nan
            for m in range(len(self.b) - 1)
        ]

    @property
    def contraction_ok(self) -> bool:
        """A_m <= 2 A_0 and 2 B_{m+1} <= B_m over all recorded steps."""
        if not self.a:
            return False
        a0 = self.a[0]
        if any(am > 2.0 * a0 * CONTRACTION_SLACK for am in self.a):
            return False
        return all(
            2.0 * self.b[m + 1] <= self.b[m] * CONTRACTION_SLACK
            for m in range(len(self.b) - 1)
        )

    @property
    def converged(self) -> bool:
        return self.status == "converged"

    def rows(self):
        out = []
        for m in range(len(self.a)):
            ratio = self.b[m + 1] / self.b[m] if (
                m + 1 < len(self.b) and self.b[m] > 0
            ) else math.nan
            out.append((m, self.a[m], self.b[m], ratio))
        return out


def _iterate(prob: CauchyProblem, weight: WeightSpec, max_steps: int, tol: float,
             divergence_factor: float, keep_fields: bool):
    """Shared Picard driver; returns (last_finite_field, trace, history)."""
    grid = prob.grid
    region = Region.full(grid)
    u0, decay = free_radial_n3(prob.f, prob.g, prob.epsilon, grid,
                               prob.support_radius)

    def wnorm(fld):
        return weighted_norm(fld, weight, region)

    trace = IterationTrace(decay_constant=decay)
    a0 = wnorm(u0)
    trace.a.append(a0)
    trace.b.append(a0)  # B_0 = A_0 since u_{-1} = 0
    history = [u0] if keep_fields else None
    if a0 == 0.0:
        trace.status = "converged"
        return u0, trace, history

    box = SupportBox(s_lo=0.0, s_hi=grid.t_max,
                     d_lo=1.0 - prob.support_radius, d_hi=math.inf)
    u_curr = u0
    for _ in range(1, max_steps + 1):
        f_vals = np.asarray(prob.nonlinearity(u_curr.values), dtype=float)
        if not np.all(np.isfinite(f_vals)):
            trace.status = "diverged"
            break
        forcing = RadialForcing.from_field(
            RadialField(grid, f_vals, prob.support_radius), box
        )
        w = duhamel_radial(forcing, 3, grid, enforce_cone=False)
        u_next = u0 + w
        if not np.all(np.isfinite(u_next.values)):
            trace.status = "diverged"
            break
        bm = wnorm(u_next - u_curr)
        am = wnorm(u_next)
        trace.a.append(am)
        trace.b.append(bm)
        if keep_fields:
            history.append(u_next)
        u_curr = u_next
        if am > divergence_factor * a0:
            trace.status = "diverged"
            break
        if bm < tol * a0:
            trace.status = "converged"
            break
    return u_curr, trace, history


def picard_iterate(prob: CauchyProblem, max_steps: int = 12, tol: float = 1e-6,
                   keep_fields: bool = False, compute_residual: bool = True):
    """Run the recursion, recording A_m, B_m over the truncated domain.

    Stops at B_m < tol * A_0 or after max_steps; signals "diverged" when
    A_m > 10 A_0.  The weight exponent must lie strictly inside the
    admissible window for the problem's power.  Returns (field, trace) or
    (field, trace, history) with keep_fields.
    """
    window = weight_window(prob.n, prob.p)
    if prob.gamma is None or not window.contains(prob.gamma):
        raise ValueError(
            f"gamma must lie strictly inside ({window.lower}, {window.upper}); "
            f"got {prob.gamma}"
        )
    u, trace, history = _iterate(prob, prob.weight(), max_steps, tol,
                                 divergence_factor=10.0, keep_fields=keep_fields)
    violation = u.support_violation()
    if violation > 1e-8 * max(u.max_abs(), 1e-300):
        raise RuntimeError(
            f"iterate leaks outside the support cone (|u| up to {violation:.3e})"
        )
    if compute_residual and trace.status != "diverged" and prob.epsilon > 0:
        f_vals = np.asarray(prob.nonlinearity(u.values), dtype=float)
        trace.residual = fd.residual_l2(u, f_vals, r_min=2 * prob.grid.dr,
                                        t_pad=prob.grid.dt)
    if keep_fields:
        return u, trace, history
    return u, trace


@dataclass(frozen=True)
class ContractionConstants:
    """Fitted iteration constants K = C1 C2^{p-1} from two runs."""

    k_first: float
    k_second: float

    @property
    def ratio(self) -> float:
        return self.k_first / self.k_second

    @property
    def consistent(self) -> bool:
        return 0.5 <= self.ratio <= 2.0

    @property
    def within_20pct(self) -> bool:
        return 0.8 <= self.ratio <= 1.25


def fitted_iteration_constant(trace: IterationTrace, p: float) -> float:
    """Smallest K with B_{m+1} <= K (A_m + A_{m-1})^{p-1} B_m on the trace."""
    best = 0.0
    for m in range(len(trace.b) - 1):
        if trace.b[m] <= 0:
            continue
        a_sum = trace.a[m] + (trace.a[m - 1] if m >= 1 else 0.0)
        if a_sum <= 0:
            continue
        best = max(best, trace.b[m + 1] / (a_sum ** (p - 1.0) * trace.b[m]))
    return best


def contraction_constant_check(prob: CauchyProblem, amplitude_ratio: float = 2.0,
                               max_steps: int = 8, tol: float = 1e-8
                               ) -> ContractionConstants:
    """Fit the iteration constant at epsilon and amplitude_ratio * epsilon.

    Both runs must contract; the fitted constants are expected to be
    amplitude independent (ratio within 20% typically, factor 2 hard limit).
    """
    _, tr1 = picard_iterate(prob, max_steps=max_steps, tol=tol)
    _, tr2 = picard_iterate(prob.with_epsilon(amplitude_ratio * prob.epsilon),
                            max_steps=max_steps, tol=tol)
    if tr1.status == "diverged" or tr2.status == "diverged":
        raise RuntimeError("constant fit requires both runs to stay bounded")
    return ContractionConstants(
        k_first=fitted_iteration_constant(tr1, prob.p),
        k_second=fitted_iteration_constant(tr2, prob.p),
    )


@dataclass(frozen=True)
class ThresholdResult:
    eps_lo: float
    eps_hi: float
    status: str  # bracketed | monotone_regime | no_contraction
    evaluations: tuple

    @property
    def estimate(self) -> float:
        return 0.5 * (self.eps_lo + self.eps_hi)


def epsilon_threshold_search(prob: CauchyProblem, eps_lo: float, eps_hi: float,
                             resolution: float, max_steps: int = 8,
                             tol: float = 1e-9) -> ThresholdResult:
    """Bisect the largest amplitude with a fully contracting trace.

    Contraction must hold at eps_lo; if it also holds at eps_hi the range
    is flagged "monotone_regime" and the upper endpoint returned.  The
    returned bracket has width <= resolution.  Thresholds are properties
    of the truncated domain, not universal constants.
    """
    evaluations = []

    def contracts(eps):
        if eps == 0.0:
            return True
        _, trace = picard_iterate(prob.with_epsilon(eps), max_steps=max_steps,
                                  tol=tol)
        ok = trace.contraction_ok and trace.status != "diverged"
        evaluations.append((eps, ok))
        return ok

    if not contracts(eps_lo):
        return ThresholdResult(eps_lo, eps_hi, "no_contraction", tuple(evaluations))
    if contracts(eps_hi):
        return ThresholdResult(eps_hi, eps_hi, "monotone_regime", tuple(evaluations))
    lo, hi = eps_lo, eps_hi
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if contracts(mid):
            lo = mid
        else:
            hi = mid
    return ThresholdResult(lo, hi, "bracketed", tuple(evaluations))


@dataclass(frozen=True)
class BlowupReport:
    flag: bool | None  # True growth, False bounded, None inconclusive
    curve: tuple  # (T_k, norm_k) pairs
    status: str
    steps: int


def blowup_indicator(prob: CauchyProblem, growth_factor: float = 10.0,
                     max_steps: int = 8, n_windows: int = 8) -> BlowupReport:
    """Growth of the running L^{p+1} norm on expanding time windows.

    Runs the same recursion without the contraction-regime stop (iterates
    may grow many orders of magnitude; the last finite iterate is kept) and
    compares the unweighted L^{p+1} norm on [0, T_k] windows.  The blowup
    flag is set when the full-window norm exceeds growth_factor times the
    first-window norm; a bounded contracting run clears the flag; anything
    else is inconclusive.
    """
    weight = WeightSpec(gamma=0.0, shift=prob.support_radius, q=prob.p + 1.0)
    u, trace, _ = _iterate(prob, weight, max_steps, tol=1e-9,
                           divergence_factor=1e12, keep_fields=False)
    t_ladder = np.linspace(prob.grid.t_max / n_windows, prob.grid.t_max, n_windows)
    curve = []
    for t_hi in t_ladder:
        nk = weighted_norm(u, weight, Region.time_window(float(t_hi)))
        curve.append((float(t_hi), nk))
    first = curve[0][1]
    last = curve[-1][1]
    if prob.epsilon == 0.0 or last == 0.0:
        flag = False
    elif first > 0 and last > growth_factor * first:
        flag = True
    elif trace.status != "diverged" and trace.contraction_ok:
        flag = False
    else:
        flag = None
    return BlowupReport(flag=flag, curve=tuple(curve), status=trace.status,
                        steps=trace.steps)


@dataclass(frozen=True)
class JohnReport:
    ratio: float
    numerator: float
    denominator: float
    undefined: bool


def john_pointwise_check(w: RadialField, forcing: RadialForcing, p: float
                         ) -> JohnReport:
    """Sup-weighted pointwise ratio ||t(t-r)^{p-2} w|| / ||t^p (t-r)^{p(p-2)} F||.

    Requires 1 + sqrt(2) < p <= 3 and forcing vanishing where t - r <= 1
    (both sups are taken over grid nodes with t - r >= 1, where the field
    produced by such forcing lives).  The ratio is expected to stay bounded
    under refinement and domain growth; F = 0 yields "undefined".
    """
    if not (1.0 + math.sqrt(2.0) < p <= 3.0):
        raise ValueError(f"p must lie in (1+sqrt(2), 3], got {p}")
    if not forcing.support.d_lo >= 1.0:
        raise ValueError("forcing must vanish where t - r <= 1 (d_lo >= 1)")
    grid = w.grid
    tt, rr = grid.meshes()
    mask = tt - rr >= 1.0
    f_vals = forcing.eval(tt, rr)
    depth = np.where(mask, tt - rr, 1.0)
    num = float(np.max(np.where(mask, tt * depth ** (p - 2.0) * np.abs(w.values), 0.0)))
    den = float(
        np.max(np.where(mask, tt**p * depth ** (p * (p - 2.0)) * np.abs(f_vals), 0.0))
    )
    if den == 0.0:
        return JohnReport(ratio=math.nan, numerator=num, denominator=den,
                          undefined=True)
    return JohnReport(ratio=num / den, numerator=num, denominator=den,
                      undefined=False)

"""Exponent arithmetic for power-type semilinear wave equations.

Everything here is pure arithmetic on the powers that govern the
small-amplitude theory: the critical power separating blowup from global
existence, the conformal power, the space-time Lebesgue exponent of the
unweighted estimate, the admissible weight interval, and the exponent
constraints of the radial weighted estimate.  Conformal and space-time
exponents are kept as exact rationals internally and converted to float
only at the caller's boundary, so degenerate windows are classified
exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational

#: floats closer than this to a window endpoint are classified "degenerate"
WINDOW_TOL = 1e-12


def critical_power(n: int) -> float:
    """Positive root > 1 of (n-1)p^2 - (n+1)p - 2 = 0.

    The root is computed with the quadratic formula; the residual of the
    quadratic at the returned value is at machine-precision level.
    """
    n = _check_dimension(n)
    disc = (n + 1) ** 2 + 8 * (n - 1)
    return ((n + 1) + math.sqrt(disc)) / (2 * (n - 1))


def critical_residual(n: int, p: float) -> float:
    """Value of (n-1)p^2 - (n+1)p - 2 at p."""
    n = _check_dimension(n)
    return (n - 1) * p * p - (n + 1) * p - 2.0


def conformal_power(n: int) -> Fraction:
    """(n+3)/(n-1) as an exact rational."""
    n = _check_dimension(n)
    return Fraction(n + 3, n - 1)


def strichartz_exponent(n: int) -> Fraction:
    """2(n+1)/(n-1) as an exact rational."""
    n = _check_dimension(n)
    return Fraction(2 * (n + 1), n - 1)


@dataclass(frozen=True)
class ExponentSet:
    """Derived powers for spatial dimension n.

    p_c is the critical power (float, irrational in general); p_conf and
    q_strichartz are exact rationals.
    """

    n: int
    p_c: float
    p_conf: Fraction
    q_strichartz: Fraction

    @classmethod
    def for_dimension(cls, n: int) -> "ExponentSet":
        n = _check_dimension(n)
        return cls(
            n=n,
            p_c=critical_power(n),
            p_conf=conformal_power(n),
            q_strichartz=strichartz_exponent(n),
        )

    def quadratic_residual(self) -> float:
        return critical_residual(self.n, self.p_c)


@dataclass(frozen=True)
class WeightWindow:
    """Open interval of admissible weight exponents for a power p.

    lower = 1/(p(p+1)), upper = ((n-1)p - (n+1))/(2(p+1)).  The window is
    nonempty exactly when p exceeds the critical power; at the critical
    power the endpoints coincide and the window is "degenerate".
    """

    lower: float
    upper: float

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def classify(self, tol: float = WINDOW_TOL) -> str:
        if self.upper - self.lower > tol:
            return "nonempty"
        if self.lower - self.upper > tol:
            return "empty"
        return "degenerate"

    def is_nonempty(self, tol: float = WINDOW_TOL) -> bool:
        return self.classify(tol) == "nonempty"

    def contains(self, gamma: float) -> bool:
        """Strict interior membership."""
        return self.lower < gamma < self.upper


def weight_window(n: int, p: float) -> WeightWindow:
    """Admissible interval (1/(p(p+1)), ((n-1)p-(n+1))/(2(p+1)))."""
    n = _check_dimension(n)
    if not p > 1:
        raise ValueError(f"power must be > 1, got {p}")
    lower = 1.0 / (p * (p + 1.0))
    upper = ((n - 1.0) * p - (n + 1.0)) / (2.0 * (p + 1.0))
    return WeightWindow(lower=lower, upper=upper)


@dataclass(frozen=True)
class RadialEstimateParams:
    """Exponent bookkeeping for the odd-dimension radial weighted estimate.

    For Lebesgue exponent q in (2, 2(n+1)/(n-1)] the angular-kernel
    exponent is gamma = (n-1)(1/2 - 1/q), the inner weight must satisfy
    beta < 1/q, and the three exponents are tied by
    alpha + beta + gamma = 2/q.  Values are Fractions whenever q is
    rational, so the endpoint identities are exact.
    """

    n: int
    q: float | Fraction
    gamma: float | Fraction
    beta_max: float | Fraction
    exponent_sum: float | Fraction

    @property
    def alpha_plus_beta(self):
        """2/q - gamma; nonnegative exactly when q <= 2(n+1)/(n-1)."""
        return self.exponent_sum - self.gamma

    def as_floats(self) -> "RadialEstimateParams":
        return RadialEstimateParams(
            n=self.n,
            q=float(self.q),
            gamma=float(self.gamma),
            beta_max=float(self.beta_max),
            exponent_sum=float(self.exponent_sum),
        )


def radial_estimate_params(n: int, q) -> RadialEstimateParams:
    """Exponents (gamma, beta_max, alpha+beta+gamma) for odd n and given q.

    Rejects even n and q outside (2, 2(n+1)/(n-1)].
    """
    n = _check_dimension(n)
    if n % 2 == 0 or n < 3:
        raise ValueError(f"odd spatial dimension >= 3 required, got {n}")
    q_max = strichartz_exponent(n)
    exact = isinstance(q, Rational)
    qv = Fraction(q) if exact else float(q)
    if not (qv > 2 and qv <= q_max):
        raise ValueError(f"q must lie in (2, {q_max}], got {q}")
    half = Fraction(1, 2) if exact else 0.5
    gamma = (n - 1) * (half - 1 / qv)
    return RadialEstimateParams(
        n=n,
        q=qv,
        gamma=gamma,
        beta_max=1 / qv,
        exponent_sum=2 / qv,
    )


def _check_dimension(n) -> int:
    if int(n) != n:
        raise ValueError(f"spatial dimension must be an integer, got {n!r}")
    n = int(n)
    if n < 2:
        raise ValueError(f"spatial dimension must be >= 2, got {n}")
    return n

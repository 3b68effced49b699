"""Uniform space-time grids and sampled radial fields.

A Grid is a tensor product of uniform axes t in [0, t_max], r in [0, r_max].
A RadialField is a (nt, nr) array of samples u(t_i, r_j) on such a grid,
optionally carrying the support radius R of the originating Cauchy data so
that the propagation-cone predicate u = 0 for r > t + R - 1 can be checked.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np


@dataclass(frozen=True)
class Grid:
    t_max: float
    r_max: float
    nt: int
    nr: int

    def __post_init__(self):
        if self.nt < 2 or self.nr < 2:
            raise ValueError("grid needs at least 2 points per axis")
        if self.t_max <= 0 or self.r_max <= 0:
            raise ValueError("grid extents must be positive")

    @cached_property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.nt)

    @cached_property
    def r(self) -> np.ndarray:
        return np.linspace(0.0, self.r_max, self.nr)

    @property
    def dt(self) -> float:
        return self.t_max / (self.nt - 1)

    @property
    def dr(self) -> float:
        return self.r_max / (self.nr - 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nt, self.nr)

    @property
    def is_aligned(self) -> bool:
        """True when dt == dr, which puts all cone lines on grid nodes."""
        return abs(self.dt - self.dr) <= 1e-12 * max(self.dt, self.dr)

    @classmethod
    def aligned(cls, t_max: float, r_max: float, step: float) -> "Grid":
        """Grid with dt = dr = step (extents rounded to step multiples)."""
        nt = int(round(t_max / step)) + 1
        nr = int(round(r_max / step)) + 1
        return cls(t_max=step * (nt - 1), r_max=step * (nr - 1), nt=nt, nr=nr)

    def refine(self, factor: int = 2) -> "Grid":
        """Same extents with each step divided by factor."""
        return Grid(
            t_max=self.t_max,
            r_max=self.r_max,
            nt=factor * (self.nt - 1) + 1,
            nr=factor * (self.nr - 1) + 1,
        )

    def meshes(self) -> tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.t, self.r, indexing="ij")

    def cell_centers(self) -> tuple[np.ndarray, np.ndarray]:
        tc = 0.5 * (self.t[:-1] + self.t[1:])
        rc = 0.5 * (self.r[:-1] + self.r[1:])
        return np.meshgrid(tc, rc, indexing="ij")


@dataclass(frozen=True)
class RadialField:
    """Samples u(t_i, r_j) with optional data-support metadata."""

    grid: Grid
    values: np.ndarray
    support_radius: float | None = None
    n: int = 3

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != self.grid.shape:
            raise ValueError(
                f"value array shape {v.shape} does not match grid {self.grid.shape}"
            )
        object.__setattr__(self, "values", v)

    @classmethod
    def zeros(cls, grid: Grid, support_radius=None, n: int = 3) -> "RadialField":
        return cls(grid, np.zeros(grid.shape), support_radius, n)

    @classmethod
    def from_function(cls, grid: Grid, fn, support_radius=None, n: int = 3):
        tt, rr = grid.meshes()
        return cls(grid, np.asarray(fn(tt, rr), dtype=float), support_radius, n)

    def with_values(self, values: np.ndarray) -> "RadialField":
        return replace(self, values=values)

    def __add__(self, other: "RadialField") -> "RadialField":
        self._check_same_grid(other)
        return self.with_values(self.values + other.values)

    def __sub__(self, other: "RadialField") -> "RadialField":
        self._check_same_grid(other)
        return self.with_values(self.values - other.values)

    def __mul__(self, a: float) -> "RadialField":
        return self.with_values(self.values * float(a))

    __rmul__ = __mul__

    def _check_same_grid(self, other):
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def support_violation(self) -> float:
        """Largest |u| outside the cone r <= t + R - 1 (0 if R unknown).

        One cell of slack is allowed so that node rounding at the cone
        surface does not count as a violation.
        """
        if self.support_radius is None:
            return 0.0
        tt, rr = self.grid.meshes()
        outside = rr > tt + self.support_radius - 1.0 + self.grid.dr
        if not outside.any():
            return 0.0
        return float(np.max(np.abs(self.values[outside])))

    def interp(self, t, r) -> np.ndarray:
        """Bilinear interpolation; zero outside the grid rectangle."""
        from scipy.interpolate import RegularGridInterpolator

        rgi = RegularGridInterpolator(
            (self.grid.t, self.grid.r),
            self.values,
            bounds_error=False,
            fill_value=0.0,
        )
        pts = np.stack(np.broadcast_arrays(t, r), axis=-1)
        return rgi(pts)

"""wavelab: a desk-scale numerical laboratory for semilinear wave equations.

Building blocks: critical-exponent arithmetic, the odd-dimension radial
Duhamel propagator, weighted space-time norms, the small-amplitude Picard
iteration with contraction diagnostics, and a verification suite for the
1D/2D fractional-integral kernel inequalities that drive the weighted
estimates.
"""

__version__ = "0.1.0"

from wavelab.exponents import (
    ExponentSet,
    WeightWindow,
    critical_power,
    radial_estimate_params,
    weight_window,
)
from wavelab.grids import Grid, RadialField

__all__ = [
    "ExponentSet",
    "Grid",
    "RadialField",
    "WeightWindow",
    "critical_power",
    "radial_estimate_params",
    "weight_window",
]

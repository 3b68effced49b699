import numpy as np
import pytest

from wavelab.grids import Grid
from wavelab.profiles import cone_bump_forcing, radial_bump, zero_profile
from wavelab.radial import RadialForcing, SupportBox


@pytest.fixture
def small_grid():
    return Grid(t_max=2.0, r_max=2.0, nt=51, nr=51)


@pytest.fixture
def cone_forcing():
    """Smooth bump strictly inside the forward cone (d in [0.25, 0.5])."""
    fn = cone_bump_forcing(s_center=1.5, s_width=0.5, d_center=0.375, d_width=0.125)
    box = SupportBox(s_lo=1.0, s_hi=2.0, d_lo=0.25, d_hi=0.5)
    return RadialForcing.from_callable(fn, box, name="cone_bump")


@pytest.fixture
def bump_data():
    return radial_bump(1.0), zero_profile

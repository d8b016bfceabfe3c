import math

import numpy as np
import pytest

from spectilt import BandSpec, PlacementResult, SlopeSpec, design_tilt, make_analog_filter


@pytest.fixture
def default_design():
    """The stock audio design: alpha=-1/2, 20 pairs, skip 3, 20 Hz..20 kHz."""
    return design_tilt(-0.5)


@pytest.fixture
def unit_ladder():
    """alpha=-1/2 array with p0 = -1 and one pair per neper (r = e), N = 20."""
    spec = SlopeSpec(-0.5)
    placement = PlacementResult(f1_hz=1.0 / (2.0 * math.pi), r=math.e)
    return spec, placement, make_analog_filter(spec, placement, 20)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def random_band(rng, f_lo=(1.0, 1000.0), ratio=(3.0, 1e4)) -> BandSpec:
    f_min = float(rng.uniform(*f_lo))
    return BandSpec(f_min, f_min * float(rng.uniform(*ratio)))

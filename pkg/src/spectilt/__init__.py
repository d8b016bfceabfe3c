"""Spectral-tilt filters built from exponentially spaced real pole-zero pairs.

Design an analog prototype whose log-magnitude slope approximates any value
alpha in [-1, 1] over a chosen band, analyze the achieved slope, digitize the
prototype with a prewarped bilinear map, and stream samples through the
resulting cascade with live slope modulation and seeded noise synthesis.
"""

from .bode import (
    BodeGrid,
    SlopeReport,
    conjecture_convergence,
    freq_response,
    log_mag_slope,
    log_magnitude,
    slope_report,
    write_report_csv,
)
from .design import (
    AnalogFilter,
    BandSpec,
    PlacementResult,
    SlopeSpec,
    TiltDesign,
    design_from_json,
    design_tilt,
    design_to_json,
    load_design,
    make_analog_filter,
    normalize_gain,
    place_poles,
    save_design,
)
from .digitize import (
    DigitalFilter,
    DigitizationParams,
    ModulationContext,
    Section,
    bilinear,
    coefficients_from_json,
    coefficients_to_json,
    digital_response,
    digitize_design,
    load_coefficients,
    prewarp_break,
    prewarp_constant,
    prewarped_prototype,
    save_coefficients,
    truncate_to_nyquist,
)
from .errors import (
    AboveNyquistError,
    BadGoodBandError,
    DegenerateOrderError,
    EmptyDesignError,
    FilterDesignError,
    InvalidBandError,
    OutOfRangeError,
    PoleOnAxisError,
    UnstableMapError,
)
from .runtime import (
    AlphaMailbox,
    GaussianSource,
    StreamingFilter,
    colored_noise,
    pink_noise,
)

__version__ = "0.1.0"

__all__ = [
    "AboveNyquistError",
    "AlphaMailbox",
    "AnalogFilter",
    "BadGoodBandError",
    "BandSpec",
    "BodeGrid",
    "DegenerateOrderError",
    "DigitalFilter",
    "DigitizationParams",
    "EmptyDesignError",
    "FilterDesignError",
    "GaussianSource",
    "InvalidBandError",
    "ModulationContext",
    "OutOfRangeError",
    "PlacementResult",
    "PoleOnAxisError",
    "Section",
    "SlopeReport",
    "SlopeSpec",
    "StreamingFilter",
    "TiltDesign",
    "UnstableMapError",
    "bilinear",
    "coefficients_from_json",
    "coefficients_to_json",
    "colored_noise",
    "conjecture_convergence",
    "design_from_json",
    "design_tilt",
    "design_to_json",
    "digital_response",
    "digitize_design",
    "freq_response",
    "load_coefficients",
    "load_design",
    "log_mag_slope",
    "log_magnitude",
    "make_analog_filter",
    "normalize_gain",
    "pink_noise",
    "place_poles",
    "prewarp_break",
    "prewarp_constant",
    "prewarped_prototype",
    "save_coefficients",
    "save_design",
    "slope_report",
    "truncate_to_nyquist",
    "write_report_csv",
]

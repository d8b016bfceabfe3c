"""Closed-form analog prototypes for spectral-tilt (fractional-slope) filters.

A tilt filter approximates |H(jw)| ~ w^alpha over a band by alternating real
poles and zeros on the negative-real axis.  Poles sit at a constant ratio r
(uniform spacing ln r on a log-frequency axis) and the zero array is the pole
array slid by -alpha*ln r, so the average log-log magnitude slope equals
alpha.  Everything here is closed form: given the order, the skip count, and
the band, the first break frequency and the ratio come from a 2x2 log-linear
system, and the arrays follow by geometric recursion.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    DegenerateOrderError,
    InvalidBandError,
    OutOfRangeError,
    PoleOnAxisError,
)
from .serialize import emit_object, f17, float_list, parse_object

TWO_PI = 2.0 * math.pi

# Integer-part poles/zeros break two decades below the first array pole,
# keeping their transition region well outside the design band.
INTEGER_PART_BREAK_DIV = 100.0
MAX_INTEGER_PART = 4


@dataclass(frozen=True)
class SlopeSpec:
    """Target log-log magnitude slope, in nepers per neper.

    ``alpha`` is the fractional slope in [-1, 1]; ``integer_part`` adds whole
    slope units realized as repeated poles (negative) or zeros (positive)
    breaking far below the band.
    """

    alpha: float
    integer_part: int = 0

    def __post_init__(self) -> None:
        if not math.isfinite(self.alpha) or not -1.0 <= self.alpha <= 1.0:
            raise OutOfRangeError(f"alpha must lie in [-1, 1], got {self.alpha}")
        if abs(int(self.integer_part)) > MAX_INTEGER_PART:
            raise OutOfRangeError(
                f"|integer_part| must be <= {MAX_INTEGER_PART}, got {self.integer_part}"
            )
        object.__setattr__(self, "alpha", float(self.alpha))
        object.__setattr__(self, "integer_part", int(self.integer_part))

    @property
    def total_slope(self) -> float:
        return self.alpha + self.integer_part


@dataclass(frozen=True)
class BandSpec:
    """Frequency band of interest, in Hz."""

    f_min_hz: float
    f_max_hz: float

    def __post_init__(self) -> None:
        if not (0.0 < self.f_min_hz < self.f_max_hz) or not math.isfinite(self.f_max_hz):
            raise InvalidBandError(
                f"need 0 < f_min < f_max, got [{self.f_min_hz}, {self.f_max_hz}]"
            )
        object.__setattr__(self, "f_min_hz", float(self.f_min_hz))
        object.__setattr__(self, "f_max_hz", float(self.f_max_hz))

    @property
    def center_hz(self) -> float:
        """Log-geometric band center."""
        return math.sqrt(self.f_min_hz * self.f_max_hz)


@dataclass(frozen=True)
class PlacementResult:
    """First pole break frequency and pole ratio solved from the design system."""

    f1_hz: float
    r: float

    def __post_init__(self) -> None:
        if not (self.f1_hz > 0.0 and math.isfinite(self.f1_hz)):
            raise OutOfRangeError(f"f1 must be positive, got {self.f1_hz}")
        if not (self.r > 1.0 and math.isfinite(self.r)):
            raise OutOfRangeError(f"pole ratio must exceed 1, got {self.r}")
        object.__setattr__(self, "f1_hz", float(self.f1_hz))
        object.__setattr__(self, "r", float(self.r))

    @property
    def delta_p(self) -> float:
        """Pole spacing in nepers: ln r."""
        return math.log(self.r)

    def delta_z(self, alpha: float) -> float:
        """Zero offset from the pole array in nepers; -delta_z/delta_p is the slope."""
        return -alpha * self.delta_p

    def pole_break_hz(self, k: int) -> float:
        """Break frequency of the k-th pole (0-based)."""
        return self.f1_hz * self.r**k


def _as_readonly(values) -> np.ndarray:
    arr = np.asarray(values, dtype=np.float64).copy()
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class AnalogFilter:
    """s-plane prototype: negative-real poles and zeros plus a positive gain.

    Both arrays are ordered by increasing break frequency (magnitude).  For
    tilt designs the pole magnitudes form a geometric sequence with ratio r
    and the zeros satisfy z_k = p_k * r**(-alpha).
    """

    poles: np.ndarray
    zeros: np.ndarray
    gain: float = 1.0

    def __post_init__(self) -> None:
        poles = _as_readonly(self.poles)
        zeros = _as_readonly(self.zeros)
        for name, arr in (("pole", poles), ("zero", zeros)):
            if np.any(arr == 0.0):
                raise PoleOnAxisError(f"{name} at s = 0 is not representable")
            if np.any(arr >= 0.0) or not np.all(np.isfinite(arr)):
                raise OutOfRangeError(f"every {name} must be a finite negative real")
            if np.any(np.diff(-arr) < 0.0):
                raise OutOfRangeError(f"{name}s must be ordered by increasing magnitude")
        if not (self.gain > 0.0 and math.isfinite(self.gain)):
            raise OutOfRangeError(f"gain must be positive and finite, got {self.gain}")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "zeros", zeros)
        object.__setattr__(self, "gain", float(self.gain))

    def log_magnitude(self, omega) -> np.ndarray:
        """ln |H(j omega)|, accumulated factor by factor (no overflow for any order).

        Zero and pole terms are interleaved so that for interlaced arrays the
        running sum stays O(1) instead of O(order), which keeps rounding noise
        far below the ripple being measured.
        """
        w = np.asarray(omega, dtype=np.float64)
        out = np.full(w.shape, math.log(self.gain))
        w2 = w * w
        for k in range(max(len(self.zeros), len(self.poles))):
            if k < len(self.zeros):
                z = self.zeros[k]
                out += 0.5 * np.log(w2 + z * z)
            if k < len(self.poles):
                p = self.poles[k]
                out -= 0.5 * np.log(w2 + p * p)
        return out

    def phase(self, omega) -> np.ndarray:
        """arg H(j omega); each real-axis factor contributes an angle in [0, pi)."""
        w = np.asarray(omega, dtype=np.float64)
        out = np.zeros(w.shape)
        for k in range(max(len(self.zeros), len(self.poles))):
            if k < len(self.zeros):
                out += np.arctan2(w, -self.zeros[k])
            if k < len(self.poles):
                out -= np.arctan2(w, -self.poles[k])
        return out


def place_poles(n: int, k_skip: int, band: BandSpec) -> PlacementResult:
    """Solve for the first pole frequency f1 and ratio r.

    The k_skip-th pole breaks at f_min and the (n-1-k_skip)-th at f_max::

        ln f1 + k_skip       * ln r = ln f_min
        ln f1 + (n-1-k_skip) * ln r = ln f_max

    Raises DegenerateOrderError when n - 1 - 2*k_skip <= 0 (the system is
    singular or would give r <= 1).
    """
    n = int(n)
    k_skip = int(k_skip)
    if n < 2:
        raise DegenerateOrderError(f"need at least 2 poles, got n={n}")
    if k_skip < 0:
        raise OutOfRangeError(f"skip count must be >= 0, got {k_skip}")
    dof = n - 1 - 2 * k_skip
    if dof <= 0:
        raise DegenerateOrderError(
            f"n - 1 - 2*k_skip = {dof} <= 0: no interval left for the band"
        )
    ln_r = math.log(band.f_max_hz / band.f_min_hz) / dof
    f1 = band.f_min_hz * math.exp(-k_skip * ln_r)
    return PlacementResult(f1_hz=f1, r=math.exp(ln_r))


def make_analog_filter(spec: SlopeSpec, placement: PlacementResult, n: int) -> AnalogFilter:
    """Build the pole and zero arrays for a placement.

    Poles: p_k = -2*pi*f1 * r**k for k = 0..n-1, computed by cumulative
    products so that successive values are exact single multiplications.
    Zeros: z_k = p_k * r**(-alpha).  A nonzero integer part adds repeated
    poles (negative part) or zeros (positive part) breaking at f1/100.
    Gain is left at 1; see normalize_gain.
    """
    n = int(n)
    if n < 1:
        raise OutOfRangeError(f"need at least one pole, got n={n}")
    r = placement.r
    steps = np.full(n, r)
    steps[0] = -TWO_PI * placement.f1_hz
    # Cumulative product: p[k+1] is exactly fl(p[k] * r), so the alpha = -1
    # zero set z[k] = fl(p[k] * r) telescopes onto the pole set bit for bit.
    poles = np.cumprod(steps)
    zeros = poles * r ** (-spec.alpha)

    if spec.integer_part != 0:
        extra = np.full(abs(spec.integer_part), -TWO_PI * placement.f1_hz / INTEGER_PART_BREAK_DIV)
        if spec.integer_part < 0:
            poles = np.concatenate([extra, poles])
        else:
            zeros = np.sort(np.concatenate([extra, zeros]))[::-1]

    return AnalogFilter(poles=poles, zeros=zeros, gain=1.0)


def normalize_gain(filt: AnalogFilter, band: BandSpec) -> AnalogFilter:
    """Scale the gain so |H| is exactly 1 at the log-geometric band center.

    Zero and pole terms are interleaved, so a fully canceling array
    (alpha = 0) yields a gain of exactly one.
    """
    wc = TWO_PI * band.center_hz
    wc2 = wc * wc
    log_mag = 0.0
    for k in range(max(len(filt.zeros), len(filt.poles))):
        if k < len(filt.zeros):
            z = filt.zeros[k]
            log_mag += 0.5 * math.log(wc2 + z * z)
        if k < len(filt.poles):
            p = filt.poles[k]
            log_mag -= 0.5 * math.log(wc2 + p * p)
    return replace(filt, gain=math.exp(-log_mag))


@dataclass(frozen=True)
class TiltDesign:
    """A complete design record: inputs, solved placement, and the prototype."""

    spec: SlopeSpec
    band: BandSpec
    n: int
    k_skip: int
    placement: PlacementResult
    filt: AnalogFilter

    def __post_init__(self) -> None:
        object.__setattr__(self, "n", int(self.n))
        object.__setattr__(self, "k_skip", int(self.k_skip))

    @property
    def geometric_poles(self) -> np.ndarray:
        """The n constant-ratio poles, excluding any integer-part extras."""
        n_extra = len(self.filt.poles) - self.n
        return self.filt.poles[n_extra:]


def design_tilt(
    alpha: float,
    order: int = 20,
    skip: int = 3,
    f_min_hz: float = 20.0,
    f_max_hz: float = 20000.0,
    integer_part: int = 0,
) -> TiltDesign:
    """Place, build, and gain-normalize a tilt filter in one call."""
    spec = SlopeSpec(alpha=alpha, integer_part=integer_part)
    band = BandSpec(f_min_hz=f_min_hz, f_max_hz=f_max_hz)
    placement = place_poles(order, skip, band)
    filt = normalize_gain(make_analog_filter(spec, placement, order), band)
    return TiltDesign(spec=spec, band=band, n=order, k_skip=skip, placement=placement, filt=filt)


_DESIGN_FIELDS = (
    "alpha",
    "integer_part",
    "n",
    "k_skip",
    "f_min_hz",
    "f_max_hz",
    "f1_hz",
    "r",
    "poles_rad_s",
    "zeros_rad_s",
    "gain",
)


def design_to_json(design: TiltDesign) -> str:
    """Render the design file (fixed field order, 17-digit reals)."""
    return emit_object(
        [
            ("alpha", f17(design.spec.alpha)),
            ("integer_part", str(design.spec.integer_part)),
            ("n", str(design.n)),
            ("k_skip", str(design.k_skip)),
            ("f_min_hz", f17(design.band.f_min_hz)),
            ("f_max_hz", f17(design.band.f_max_hz)),
            ("f1_hz", f17(design.placement.f1_hz)),
            ("r", f17(design.placement.r)),
            ("poles_rad_s", float_list(design.filt.poles)),
            ("zeros_rad_s", float_list(design.filt.zeros)),
            ("gain", f17(design.filt.gain)),
        ]
    )


def design_from_json(text: str) -> TiltDesign:
    """Parse a design file back into an exact in-memory design."""
    obj = parse_object(text, _DESIGN_FIELDS)
    spec = SlopeSpec(alpha=obj["alpha"], integer_part=obj["integer_part"])
    band = BandSpec(f_min_hz=obj["f_min_hz"], f_max_hz=obj["f_max_hz"])
    placement = PlacementResult(f1_hz=obj["f1_hz"], r=obj["r"])
    filt = AnalogFilter(
        poles=np.asarray(obj["poles_rad_s"], dtype=np.float64),
        zeros=np.asarray(obj["zeros_rad_s"], dtype=np.float64),
        gain=float(obj["gain"]),
    )
    return TiltDesign(
        spec=spec,
        band=band,
        n=int(obj["n"]),
        k_skip=int(obj["k_skip"]),
        placement=placement,
        filt=filt,
    )


def save_design(design: TiltDesign, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(design_to_json(design))


def load_design(path) -> TiltDesign:
    with open(path, "r", encoding="utf-8") as fh:
        return design_from_json(fh.read())

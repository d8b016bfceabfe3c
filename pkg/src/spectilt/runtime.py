"""Streaming sample processing, live slope modulation, and 1/f-family noise.

Each first-order section runs in transposed direct form with a single state
value, so coefficients can be swapped between blocks without disturbing the
stored state.  Because the poles of a tilt design never move, changing the
slope only rewrites the numerator coefficients (and the block-level gain):
the denominators are bit-identical across any modulation schedule.
"""

from __future__ import annotations

import threading

import numpy as np
from scipy.signal import lfilter
from scipy.special import ndtri

from .design import BandSpec, TiltDesign, design_tilt
from .digitize import DigitalFilter, ModulationContext, digitize_design
from .errors import OutOfRangeError

DEFAULT_BAND = BandSpec(20.0, 20000.0)
DEFAULT_ORDER = 20
DEFAULT_SKIP = 3

# Samples per control block when a slope schedule is applied.
CONTROL_BLOCK = 64


class GaussianSource:
    """Deterministic standard-normal stream: counter-based uniforms through
    the inverse normal CDF.  The same seed always yields the same samples."""

    def __init__(self, seed: int):
        self.seed = int(seed)
        self._rng = np.random.Generator(np.random.Philox(key=self.seed & (2**64 - 1)))

    def block(self, n: int) -> np.ndarray:
        """Next n samples; consecutive calls continue the stream."""
        u = (self._rng.integers(0, 1 << 53, size=int(n), dtype=np.int64) + 0.5) * 2.0**-53
        return ndtri(u)


class StreamingFilter:
    """Stateful cascade of first-order sections with one unit delay each.

    One instance is owned by one processing context at a time; hand the whole
    object between threads, never share it.  Slope updates arrive between
    blocks, either directly via set_alpha or from another thread through an
    AlphaMailbox drained by the caller.
    """

    def __init__(self, digital: DigitalFilter, modulation: ModulationContext | None = None):
        self._b0 = np.array([s.b0 for s in digital.sections])
        self._b1 = np.array([s.b1 for s in digital.sections])
        self._a1 = np.array([s.a1 for s in digital.sections])
        self._gain = digital.gain
        self._state = np.zeros(len(digital.sections))
        self._fs = digital.sample_rate_hz
        self._mod = modulation

    @classmethod
    def for_design(cls, design: TiltDesign, fs_hz: float) -> "StreamingFilter":
        """Build from a design, keeping the context needed for set_alpha."""
        digital, context = digitize_design(design, fs_hz)
        out = cls(digital, modulation=context)
        # Route the initial coefficients through the modulation path so a
        # later set_alpha(design alpha) is a bit-exact no-op.
        out.set_alpha(design.spec.alpha)
        return out

    @property
    def sample_rate_hz(self) -> float:
        return self._fs

    @property
    def gain(self) -> float:
        return self._gain

    @property
    def denominators(self) -> np.ndarray:
        return self._a1.copy()

    def process(self, block) -> np.ndarray:
        """Run one block through the cascade; gain is applied once per block.

        Output is independent of how the input is chunked: section states
        carry the recursion across calls exactly.
        """
        x = np.asarray(block, dtype=np.float64)
        if x.ndim != 1:
            raise ValueError("expected a one-dimensional block of samples")
        if x.size == 0:
            return x.copy()
        if not np.all(np.isfinite(x)):
            raise ValueError("input block contains NaN or Inf")
        y = x
        for i in range(len(self._b0)):
            y, zi = lfilter(
                [self._b0[i], self._b1[i]], [1.0, self._a1[i]], y, zi=self._state[i : i + 1]
            )
            self._state[i] = zi[0]
        return self._gain * y

    def set_alpha(self, alpha: float) -> None:
        """Slide the zero array to a new slope; poles and states are untouched."""
        if self._mod is None:
            raise OutOfRangeError("this filter was built from bare coefficients; "
                                  "slope modulation needs the design context")
        b0, b1, gain = self._mod.rebuild(float(alpha))
        self._b0 = b0
        self._b1 = b1
        self._gain = gain


class AlphaMailbox:
    """Single-slot, thread-safe handoff of a pending slope value.

    A newer post replaces an unconsumed one (at most one update is pending);
    the processing thread drains it between blocks with take().
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._value: float | None = None

    def post(self, alpha: float) -> None:
        with self._lock:
            self._value = float(alpha)

    def take(self) -> float | None:
        with self._lock:
            value = self._value
            self._value = None
            return value


def colored_noise(
    alpha: float,
    seed: int,
    n_samples: int,
    fs_hz: float,
    band: BandSpec = DEFAULT_BAND,
    order: int = DEFAULT_ORDER,
    skip: int = DEFAULT_SKIP,
) -> np.ndarray:
    """Unit-variance white noise shaped by the slope-alpha design for the band."""
    if int(n_samples) < 1:
        raise OutOfRangeError(f"need at least one sample, got {n_samples}")
    design = design_tilt(alpha, order=order, skip=skip,
                         f_min_hz=band.f_min_hz, f_max_hz=band.f_max_hz)
    filt = StreamingFilter.for_design(design, fs_hz)
    white = GaussianSource(seed).block(int(n_samples))
    return filt.process(white)


def pink_noise(seed: int, n_samples: int, fs_hz: float, band: BandSpec = DEFAULT_BAND) -> np.ndarray:
    """1/f noise: power falls 3 dB per octave across the band."""
    return colored_noise(-0.5, seed, n_samples, fs_hz, band=band)

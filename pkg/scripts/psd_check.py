#!/usr/bin/env python3
"""Verify the spectral slope of synthesized colored noise.

Generates a seeded noise stream for a chosen color, estimates its power
spectral density with Welch averaging, fits a log-log line over a clean
in-band range, and reports the fitted power exponent (pink noise: -1, i.e.
-3.01 dB per octave).
"""

import argparse
import math

import numpy as np
from scipy.signal import welch

from spectilt import BandSpec, colored_noise


def fitted_power_slope(x, fs, fit_lo, fit_hi, nperseg=8192):
    f, p = welch(x, fs=fs, window="hann", nperseg=nperseg, noverlap=nperseg // 2)
    mask = (f >= fit_lo) & (f <= fit_hi)
    a = np.vstack([np.ones(mask.sum()), np.log(f[mask])]).T
    coef, *_ = np.linalg.lstsq(a, np.log(p[mask]), rcond=None)
    return float(coef[1])


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--color", type=float, default=-0.5,
                        help="magnitude slope alpha; PSD exponent is 2*alpha")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--samples", type=int, default=1 << 20)
    parser.add_argument("--fs", type=float, default=48000.0)
    parser.add_argument("--fit", type=float, nargs=2, default=[100.0, 5000.0],
                        metavar=("LO", "HI"))
    args = parser.parse_args()

    x = colored_noise(args.color, seed=args.seed, n_samples=args.samples,
                      fs_hz=args.fs, band=BandSpec(20.0, 20000.0))
    slope = fitted_power_slope(x, args.fs, *args.fit)
    target = 2.0 * args.color
    print(f"color alpha        : {args.color:+.3f}")
    print(f"fitted PSD exponent: {slope:+.4f}  (target {target:+.2f})")
    print(f"dB per octave      : {10.0 * slope * math.log10(2.0):+.3f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

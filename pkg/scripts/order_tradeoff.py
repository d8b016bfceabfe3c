#!/usr/bin/env python3
"""Map the worst in-band slope error over an (order, skip) grid.

Writes a CSV with one row per (alpha, n, k) cell.  Useful for picking the
cheapest design that meets an error budget over a given band.
"""

import argparse
import sys
from dataclasses import dataclass

from spectilt import design_tilt, slope_report


@dataclass
class GridConfig:
    alphas: tuple[float, ...] = (-0.5, -0.2, 0.5)
    orders: range = range(8, 33, 2)
    skips: tuple[int, ...] = (0, 1, 2, 3)
    f_min_hz: float = 20.0
    f_max_hz: float = 20000.0
    points_per_interval: int = 64


def run(cfg: GridConfig, out=sys.stdout) -> None:
    out.write("alpha,n,k,max_abs_slope_error\n")
    for alpha in cfg.alphas:
        for n in cfg.orders:
            for k in cfg.skips:
                if n - 1 - 2 * k <= 0:
                    continue
                design = design_tilt(alpha, order=n, skip=k,
                                     f_min_hz=cfg.f_min_hz, f_max_hz=cfg.f_max_hz)
                rep = slope_report(design.filt, design.spec, design.placement, n, k,
                                   points_per_interval=cfg.points_per_interval)
                out.write(f"{alpha},{n},{k},{rep.max_abs_error_in_band:.6e}\n")


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--fmin", type=float, default=20.0)
    parser.add_argument("--fmax", type=float, default=20000.0)
    parser.add_argument("--alphas", type=float, nargs="+", default=[-0.5, -0.2, 0.5])
    args = parser.parse_args()
    run(GridConfig(alphas=tuple(args.alphas), f_min_hz=args.fmin, f_max_hz=args.fmax))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

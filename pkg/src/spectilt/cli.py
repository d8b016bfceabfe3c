"""Command-line front end: design, analyze, digitize, stream, synthesize.

Subcommands mirror the library layers.  Sample streams are raw little-endian
float64 with no header; the sample rate always comes from a flag.  Exit codes:
0 success, 2 usage or validation error, 1 internal error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import __version__
from .bode import DEFAULT_POINTS_PER_INTERVAL, slope_report, write_report_csv
from .design import (
    BandSpec,
    TiltDesign,
    design_tilt,
    design_to_json,
    load_design,
)
from .digitize import (
    DigitizationParams,
    bilinear,
    coefficients_to_json,
    load_coefficients,
)
from .errors import FilterDesignError
from .runtime import CONTROL_BLOCK, StreamingFilter, colored_noise

USAGE_ERROR = 2
INTERNAL_ERROR = 1

STREAM_CHUNK = 1 << 16


def _add_band_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fmin", type=float, default=20.0,
                   help="lower edge of the roll-off band in Hz (default 20)")
    p.add_argument("--fmax", type=float, default=20000.0,
                   help="upper edge of the roll-off band in Hz (default 20000); "
                        "a lower edge f0 with bandwidth bw maps to --fmin f0 --fmax f0+bw")


def _write_text(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)


def _parse_range(text: str, what: str) -> range:
    """Parse 'start:stop[:step]' (inclusive stop) into a range."""
    parts = text.split(":")
    if len(parts) not in (2, 3):
        raise FilterDesignError(f"{what} must look like start:stop[:step], got {text!r}")
    start, stop = int(parts[0]), int(parts[1])
    step = int(parts[2]) if len(parts) == 3 else 1
    if step < 1 or stop < start:
        raise FilterDesignError(f"{what} range {text!r} is empty or descending")
    return range(start, stop + 1, step)


def cmd_design(args) -> int:
    design = design_tilt(
        args.alpha,
        order=args.order,
        skip=args.skip,
        f_min_hz=args.fmin,
        f_max_hz=args.fmax,
        integer_part=args.integer_part,
    )
    _write_text(args.output, design_to_json(design))
    return 0


def _design_metadata(design: TiltDesign) -> dict[str, str]:
    return {
        "alpha": repr(design.spec.alpha),
        "integer_part": str(design.spec.integer_part),
        "n": str(design.n),
        "k_skip": str(design.k_skip),
        "f_min_hz": repr(design.band.f_min_hz),
        "f_max_hz": repr(design.band.f_max_hz),
        "f1_hz": repr(design.placement.f1_hz),
        "r": repr(design.placement.r),
        "gain": repr(design.filt.gain),
    }


def cmd_bode(args) -> int:
    design = load_design(args.design)
    report = slope_report(
        design.filt,
        design.spec,
        design.placement,
        design.n,
        design.k_skip,
        points_per_interval=args.points_per_interval,
    )
    write_report_csv(report, _design_metadata(design), sys.stdout)
    return 0


def cmd_digitize(args) -> int:
    design = load_design(args.design)
    if args.fs <= 2.0 * design.band.f_min_hz:
        raise FilterDesignError(
            f"sample rate {args.fs} Hz must exceed twice f_min ({design.band.f_min_hz} Hz)"
        )
    params = DigitizationParams.for_design(design.placement.f1_hz, args.fs)
    dfilt = bilinear(design.filt, params, design.band)
    dropped = len(design.filt.poles) - len(dfilt.sections)
    print(
        f"kept {len(dfilt.sections)} of {len(design.filt.poles)} analog sections "
        f"({dropped} truncated at fs={args.fs:g} Hz)",
        file=sys.stderr,
    )
    _write_text(args.output, coefficients_to_json(dfilt))
    return 0


def _stream_blocks(fh_in, fh_out, filt: StreamingFilter, schedule=None, fs: float = 0.0) -> None:
    """Pump raw float64 samples through the filter, updating the slope per
    control block when a schedule is given."""
    block = CONTROL_BLOCK if schedule is not None else STREAM_CHUNK
    pos = 0
    while True:
        raw = fh_in.read(block * 8)
        if not raw:
            break
        x = np.frombuffer(raw, dtype="<f8")
        if schedule is not None:
            filt.set_alpha(schedule(pos / fs))
        y = filt.process(x)
        fh_out.write(y.astype("<f8").tobytes())
        pos += len(x)
    fh_out.flush()


def cmd_apply(args) -> int:
    if (args.coeffs is None) == (args.design is None):
        raise FilterDesignError("give exactly one of --coeffs FILE or --design FILE")
    if args.design is not None and args.fs is None:
        raise FilterDesignError("--design needs --fs")

    schedule = None
    fs = args.fs or 0.0
    if args.design is not None:
        design = load_design(args.design)
        filt = StreamingFilter.for_design(design, args.fs)
    else:
        if args.alpha_sweep is not None:
            raise FilterDesignError("--alpha-sweep needs --design (bare coefficients "
                                    "carry no pole-zero context)")
        dfilt = load_coefficients(args.coeffs)
        filt = StreamingFilter(dfilt)
        fs = dfilt.sample_rate_hz

    if args.alpha_sweep is not None:
        parts = args.alpha_sweep.split(":")
        if len(parts) != 3:
            raise FilterDesignError("--alpha-sweep must look like a0:a1:seconds")
        a0, a1, seconds = (float(p) for p in parts)
        if seconds <= 0.0:
            raise FilterDesignError("sweep duration must be positive")

        def schedule(t: float, a0=a0, a1=a1, seconds=seconds) -> float:
            return a0 + (a1 - a0) * min(t / seconds, 1.0)

    fh_in = open(args.input, "rb") if args.input not in (None, "-") else sys.stdin.buffer
    fh_out = open(args.output, "wb") if args.output not in (None, "-") else sys.stdout.buffer
    try:
        _stream_blocks(fh_in, fh_out, filt, schedule, fs)
    finally:
        if fh_in is not sys.stdin.buffer:
            fh_in.close()
        if fh_out is not sys.stdout.buffer:
            fh_out.close()
    return 0


def cmd_noise(args) -> int:
    samples = colored_noise(
        args.color,
        seed=args.seed,
        n_samples=args.samples,
        fs_hz=args.fs,
        band=BandSpec(args.fmin, args.fmax),
    )
    fh_out = open(args.output, "wb") if args.output not in (None, "-") else sys.stdout.buffer
    try:
        fh_out.write(samples.astype("<f8").tobytes())
        fh_out.flush()
    finally:
        if fh_out is not sys.stdout.buffer:
            fh_out.close()
    return 0


def cmd_sweep(args) -> int:
    orders = _parse_range(args.orders, "--orders")
    skips = _parse_range(args.skips, "--skips")
    grid = [(n, k) for n in orders for k in skips]
    if not grid:
        raise FilterDesignError("empty (order, skip) grid")
    for n, k in grid:
        if n - 1 - 2 * k <= 0:
            raise FilterDesignError(f"order {n} with skip {k} leaves no band interval")
    sys.stdout.write("n,k,max_abs_slope_error\n")
    for n, k in grid:
        design = design_tilt(args.alpha, order=n, skip=k,
                             f_min_hz=args.fmin, f_max_hz=args.fmax)
        report = slope_report(design.filt, design.spec, design.placement, n, k,
                              points_per_interval=args.points_per_interval)
        sys.stdout.write(f"{n},{k},{report.max_abs_error_in_band!r}\n")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spectilt",
        description="Spectral-tilt filter toolkit: closed-form fractional-slope "
                    "designs from exponentially spaced real pole-zero pairs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("design", help="solve a tilt design and write the design file")
    p.add_argument("--alpha", type=float, required=True,
                   help="target log-log magnitude slope in [-1, 1], nepers per neper")
    p.add_argument("--order", type=int, default=20, help="number of pole-zero pairs (default 20)")
    p.add_argument("--skip", type=int, default=3,
                   help="pairs placed outside each band edge (default 3)")
    p.add_argument("--integer-part", type=int, default=0,
                   help="extra whole slope units, |n| <= 4 (default 0)")
    _add_band_flags(p)
    p.add_argument("--output", "-o", default=None, help="design file path (default stdout)")
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("bode", help="slope-error CSV for a design file")
    p.add_argument("--design", required=True, help="design file from the design subcommand")
    p.add_argument("--points-per-interval", type=int, default=DEFAULT_POINTS_PER_INTERVAL,
                   help="grid points per pole interval (default 64)")
    p.set_defaults(func=cmd_bode)

    p = sub.add_parser("digitize", help="map a design to digital sections via the "
                                        "prewarped bilinear transform")
    p.add_argument("--design", required=True, help="design file")
    p.add_argument("--fs", type=float, required=True, help="sample rate in Hz")
    p.add_argument("--output", "-o", default=None, help="coefficient file path (default stdout)")
    p.set_defaults(func=cmd_digitize)

    p = sub.add_parser("apply", help="filter a raw float64 sample stream")
    p.add_argument("--coeffs", default=None, help="coefficient file (static filtering)")
    p.add_argument("--design", default=None, help="design file (enables slope modulation)")
    p.add_argument("--fs", type=float, default=None, help="sample rate in Hz (with --design)")
    p.add_argument("--alpha-sweep", default=None, metavar="A0:A1:SECONDS",
                   help="linear slope sweep applied per 64-sample control block")
    p.add_argument("--input", "-i", default=None, help="input raw float64 file (default stdin)")
    p.add_argument("--output", "-o", default=None, help="output raw float64 file (default stdout)")
    p.set_defaults(func=cmd_apply)

    p = sub.add_parser("noise", help="deterministic colored noise (raw float64)")
    p.add_argument("--color", type=float, default=-0.5,
                   help="magnitude slope alpha; -0.5 is pink (default)")
    p.add_argument("--seed", type=int, default=0, help="64-bit generator seed (default 0)")
    p.add_argument("--samples", type=int, required=True, help="number of samples")
    p.add_argument("--fs", type=float, default=48000.0, help="sample rate in Hz (default 48000)")
    _add_band_flags(p)
    p.add_argument("--output", "-o", default=None, help="output file (default stdout)")
    p.set_defaults(func=cmd_noise)

    p = sub.add_parser("sweep", help="max in-band slope error over an (order, skip) grid")
    p.add_argument("--alpha", type=float, required=True, help="target slope in [-1, 1]")
    _add_band_flags(p)
    p.add_argument("--orders", default="8:24:2", metavar="N0:N1[:STEP]",
                   help="inclusive order range (default 8:24:2)")
    p.add_argument("--skips", default="0:3", metavar="K0:K1[:STEP]",
                   help="inclusive skip range (default 0:3)")
    p.add_argument("--points-per-interval", type=int, default=DEFAULT_POINTS_PER_INTERVAL,
                   help="grid points per pole interval (default 64)")
    p.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except FilterDesignError as exc:
        print(f"spectilt: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (OSError, ValueError) as exc:
        print(f"spectilt: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:  # pragma: no cover - defensive
        print(f"spectilt: internal error: {exc}", file=sys.stderr)
        return INTERNAL_ERROR


if __name__ == "__main__":
    raise SystemExit(main())

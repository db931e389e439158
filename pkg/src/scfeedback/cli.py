"""Command-line entry point: ``scfeedback sweep ...``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from .errors import InvalidParameterError
from .simulation import CSV_HEADER, SweepIOError, SweepSpec, _row, run_sweep

SCHEME_NAMES = {"prop-sca": "prop_sca", "prop-biht": "prop_biht", "tdm": "tdm"}


def parse_snr_grid(text: str) -> tuple[float, ...]:
    """``start:step:stop`` (stop inclusive) or a comma-separated list."""
    try:
        if ":" in text:
            start, step, stop = (float(t) for t in text.split(":"))
            if step <= 0 or stop < start:
                raise ValueError
            count = int(np.floor((stop - start) / step + 1e-9)) + 1
            return tuple(round(start + i * step, 10) for i in range(count))
        values = tuple(float(t) for t in text.split(",") if t.strip())
        if not values:
            raise ValueError
        return values
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad SNR grid {text!r}") from None


def _uint(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scfeedback")
    sub = parser.add_subparsers(dest="command", required=True)
    sw = sub.add_parser("sweep", help="run a Monte-Carlo sweep and write CSV")
    sw.add_argument("--scheme", action="append", choices=sorted(SCHEME_NAMES),
                    help="scheme to simulate (repeatable; default all three)")
    sw.add_argument("--snr-db", type=parse_snr_grid, default=(0.0, 2.0, 4.0, 6.0, 8.0, 10.0),
                    help="start:step:stop or comma list (default 0:2:10)")
    sw.add_argument("--rho", type=float, action="append", help="power share of the feedback (default 0.2)")
    sw.add_argument("--c", type=float, action="append", help="sampling rate M/N (default 2.0)")
    sw.add_argument("--n", type=int, default=64)
    sw.add_argument("--p", type=int, default=1024)
    sw.add_argument("--sparsity", type=int, default=8)
    sw.add_argument("--trials", type=int, default=2000)
    sw.add_argument("--seed", type=_uint, default=1)
    sw.add_argument("--itermax", type=int, default=100)
    sw.add_argument("--normalize-spread", action="store_true",
                    help="scale spread chips by 1/sqrt(L)")
    sw.add_argument("--uplink-variance", type=float, default=None,
                    help="per-antenna uplink gain variance (default 1/n)")
    sw.add_argument("--workers", type=int, default=1)
    sw.add_argument("--out", type=Path, help="CSV path (default stdout)")
    sw.add_argument("-v", "--verbose", action="store_true")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(message)s")
    try:
        spec = SweepSpec(
            schemes=tuple(SCHEME_NAMES[s] for s in (args.scheme or SCHEME_NAMES)),
            snr_db=args.snr_db,
            rho=tuple(args.rho or (0.2,)),
            c=tuple(args.c or (2.0,)),
            trials=args.trials,
            seed=args.seed,
            n=args.n,
            p=args.p,
            sparsity=args.sparsity,
            itermax=args.itermax,
            normalize_spread=args.normalize_spread,
            uplink_variance=args.uplink_variance,
            out=args.out,
        )
        # fail fast on configurations the grid cannot run
        for _ in spec.points():
            pass
        records = run_sweep(spec, workers=max(args.workers, 1))
    except InvalidParameterError as exc:
        print(f"scfeedback: {exc}", file=sys.stderr)
        return 2
    except SweepIOError as exc:
        print(f"scfeedback: {exc} ({len(exc.records)} points completed)", file=sys.stderr)
        return 3
    if args.out is None:
        print(CSV_HEADER)
        for rec in records:
            print(",".join(_row(rec)))
    return 0


if __name__ == "__main__":
    sys.exit(main())

#!/usr/bin/env python3
"""Spectral-map deviation and largest eigenvalue gap on a grid of cutoffs.

    python3 scripts/density_grid.py --space sphere --grid 50 100 200 400
"""

import argparse
import sys

from fuzzy_spectra.analysis import density_metrics
from fuzzy_spectra.analysis.report import to_csv_text
from fuzzy_spectra.core import make_params

COLUMNS = ["lambda", "size", "sup_dev", "max_gap", "hw_lhs", "hw_rhs", "frobenius", "spectral"]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--space", choices=("circle", "sphere"), default="circle")
    ap.add_argument("--m", type=int, default=0, help="sphere block (default 0)")
    ap.add_argument("--grid", type=int, nargs="+", default=[50, 100, 200, 400, 800])
    args = ap.parse_args(argv)
    rows = [density_metrics(make_params(lam, kind=args.space), args.m).as_row() for lam in args.grid]
    sys.stdout.write(to_csv_text(COLUMNS, rows))


if __name__ == "__main__":
    main()

#!/usr/bin/env python3
"""Dispersion of the most localized state times Λ², circle and sphere."""

import argparse
import sys

from fuzzy_spectra.analysis.localization import CIRCLE_C, SPHERE_C, localization_row
from fuzzy_spectra.analysis.report import to_csv_text


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--lambda-max", type=int, default=60)
    args = ap.parse_args(argv)
    rows = []
    for lam in range(2, args.lambda_max + 1):
        c = localization_row("circle", lam)
        s = localization_row("sphere", lam)
        rows.append({
            "lambda": lam,
            "circle_disp_lam2": c["dispersion"] * lam**2,
            "circle_ratio": c["ratio"],
            "sphere_disp_lam2": s["dispersion"] * lam**2,
            "sphere_ratio": s["ratio"],
        })
    sys.stdout.write(to_csv_text(list(rows[0]), rows))
    print(f"constants: circle {CIRCLE_C:.6f}, sphere {SPHERE_C:.6f}", file=sys.stderr)


if __name__ == "__main__":
    main()

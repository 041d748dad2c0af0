#!/usr/bin/env python3
"""Top eigenvalue of the circle or sphere (m = 0) coordinate against Λ.

Writes the sweep as CSV and prints the report verdicts on stderr.
"""

import argparse
import sys

from fuzzy_spectra.analysis import K_RULES, top_eig_monotonicity_circle, top_eig_monotonicity_sphere


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--space", choices=("circle", "sphere"), default="circle")
    ap.add_argument("--k-rule", choices=sorted(K_RULES), default=None)
    ap.add_argument("--lambda-max", type=int, default=200)
    args = ap.parse_args(argv)
    if args.space == "circle":
        rep = top_eig_monotonicity_circle(args.lambda_max, args.k_rule or "default")
    else:
        rep = top_eig_monotonicity_sphere(args.lambda_max, args.k_rule or "lambda6")
    sys.stdout.write(rep.to_csv())
    for item, ok in rep.items.items():
        print(f"{item}: {'pass' if ok else 'FAIL'}", file=sys.stderr)
    for key, val in rep.notes.items():
        print(f"{key}: {val}", file=sys.stderr)


if __name__ == "__main__":
    main()

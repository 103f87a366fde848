#!/usr/bin/env python3
"""Measure how fast the infinite product approaches its closed form.

For each modulus the script fits the slope of log |F/F_closed - 1| against
1/z along the ray q = e^{-z} and compares it with the generic rate -4 pi^2/m.
The m = 4 residues are the known degenerate case: their leading correction
vanishes and the fitted slope comes out doubled.
"""

import argparse
import sys

from congruence_stacks.analytic import product_decay_fit
from congruence_stacks.params import StackParams


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--moduli", default="3,4,5,6,7", help="comma-separated moduli")
    parser.add_argument("-r", "--residue", type=int, default=1)
    parser.add_argument(
        "--z-values",
        default="0.30,0.25,0.20,0.16,0.13,0.10",
        help="ray points, smallest sets the required precision",
    )
    args = parser.parse_args(argv)

    try:
        moduli = [int(v) for v in args.moduli.split(",") if v.strip()]
        zs = tuple(float(v) for v in args.z_values.split(",") if v.strip())
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(f"{'family':>18}  {'fitted':>10}  {'generic':>10}  {'ratio':>7}  {'points':>6}")
    for m in moduli:
        try:
            params = StackParams.from_residue(args.residue, m)
        except ValueError as exc:
            print(f"{f'(r={args.residue}, m={m})':>18}  skipped: {exc}")
            continue
        fit = product_decay_fit(params, z_values=zs)
        used = len(fit.points) - fit.excluded
        label = f"(r={params.r}, m={params.m})"
        print(
            f"{label:>18}  {fit.slope:>10.4f}  {fit.expected:>10.4f}  "
            f"{fit.slope / fit.expected:>7.4f}  {used:>6}"
        )
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

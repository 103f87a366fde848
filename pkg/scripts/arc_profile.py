#!/usr/bin/env python3
"""Scan the integrand magnitude around the circle |q| = e^{-kappa}.

Samples log |F(q) L(q) q^{-n}| on a uniform angular grid, reports where the
maximum sits relative to the major arc, lists the secondary bumps at the
other roots of unity, and optionally dumps the whole profile as CSV.
"""

import argparse
import sys

from congruence_stacks.analytic import circle_profile
from congruence_stacks.asymptotics import ArcContext
from congruence_stacks.params import StackParams


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("-r", "--residue", type=int, default=1)
    parser.add_argument("-m", "--modulus", type=int, default=3)
    parser.add_argument("-n", type=int, default=500, help="coefficient index")
    parser.add_argument("--rho", type=float, default=0.5, help="major arc half-width, units of kappa")
    parser.add_argument("--grid", type=int, default=720, help="angular sample count")
    parser.add_argument("--csv", metavar="PATH", help="write nu, log magnitude rows")
    args = parser.parse_args(argv)

    try:
        params = StackParams.from_residue(args.residue, args.modulus)
        ctx = ArcContext.build(params, args.n, rho=args.rho, dps=12)
        profile = circle_profile(ctx, grid=args.grid)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    print(f"family {params}, n = {args.n}, kappa = {float(ctx.kappa):.6f}")
    print(
        f"maximum at nu = {profile.argmax_nu:+.4f} "
        f"(major arc |nu| <= {args.rho * float(ctx.kappa):.4f}: "
        f"{'inside' if profile.major_arc_contains_max else 'OUTSIDE'})"
    )
    print(f"principal log magnitude {profile.principal_log:.3f}")
    for ell, (nu, height) in sorted(profile.root_of_unity_peaks().items()):
        print(
            f"  peak near 2 pi {ell}/{params.m}: nu = {nu:+.4f}, "
            f"log magnitude {height:.3f} ({profile.principal_log - height:.3f} below)"
        )
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(profile.to_csv())
        print(f"wrote {args.csv}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

"""Command line front end.

Subcommands:

    count    exact number of stacks of a given size, optionally with witnesses
    table    exact counts against the asymptotic main term over a range of sizes
    asym     asymptotic estimates (main term, refined term, full expansion) for one size
    verify   numerical verification suites for the analytic machinery

Exit codes: 0 success, 1 a verification check failed, 2 invalid input.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

import mpmath as mp

from . import __version__
from .analytic import (
    circle_profile,
    cubic_remainder_check,
    dedekind_eta,
    eta_inversion_residual,
    false_theta_series_residual,
    major_arc_integral,
    product_decay_fit,
    theta_product,
    theta_sum,
    theta_transform_residual,
)
from .asymptotics import (
    ArcContext,
    asymptotic_sum,
    bessel_i,
    comparison_table,
    growth_scale,
    main_term,
    records_to_csv,
    records_to_json,
    refined_main_term,
    saddle_point,
    singular_expansion_coeffs,
)
from .oracle import ENUMERATION_CAP, count_stacks, enumerate_stacks, witnesses_to_json
from .params import StackParams, Variant
from .qseries import stack_gf, verify_decomposition

MIN_PRECISION = 30
DEFAULT_SEED = 20260815
VERIFY_TARGETS = frozenset(
    ["decomposition", "theta", "transform", "eta", "falsetheta", "bessel", "contour", "oracle"]
)


def _default_precision() -> int:
    env = os.environ.get("CSTACKS_PRECISION")
    if env is None:
        return 50
    try:
        return int(env)
    except ValueError:
        raise ValueError(f"CSTACKS_PRECISION must be an integer, got {env!r}")


def _resolve_params(args: argparse.Namespace) -> StackParams:
    if args.variant == "auto":
        return StackParams.from_residue(args.r, args.m)
    return StackParams(args.r, args.m, Variant(args.variant))


def _resolve_precision(args: argparse.Namespace) -> int:
    dps = args.precision if args.precision is not None else _default_precision()
    if dps < MIN_PRECISION:
        raise ValueError(f"precision must be at least {MIN_PRECISION} digits, got {dps}")
    return dps


def _emit(text: str, args: argparse.Namespace) -> None:
    if getattr(args, "output", None):
        with open(args.output, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("-r", "--r", type=int, default=1, help="residue class of left parts and peak (default 1)")
    parser.add_argument("-m", "--m", type=int, default=3, help="modulus (default 3)")
    parser.add_argument(
        "--variant",
        choices=["auto", "standard", "gap"],
        default="auto",
        help="series variant; auto infers it from whether 2r < m",
    )
    parser.add_argument(
        "-P",
        "--precision",
        type=int,
        default=None,
        help=f"working decimal precision (default env CSTACKS_PRECISION or 50, minimum {MIN_PRECISION})",
    )
    parser.add_argument("--output", help="write the result to this file instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cstacks",
        description="Unimodal stacks with congruence conditions: exact counts and asymptotics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_count = sub.add_parser("count", help="exact count of stacks of size n")
    _add_common(p_count)
    p_count.add_argument("-n", "--size", type=int, required=True, help="stack size to count")
    p_count.add_argument(
        "--witnesses",
        action="store_true",
        help=f"also list the stacks themselves (only for n <= {ENUMERATION_CAP})",
    )
    p_count.add_argument("--format", choices=["text", "json"], default="text")
    p_count.set_defaults(func=cmd_count)

    p_table = sub.add_parser("table", help="exact counts against the asymptotic main term")
    _add_common(p_table)
    p_table.add_argument(
        "--values",
        default="10,50,100,500,1000",
        help="comma separated sizes (default 10,50,100,500,1000)",
    )
    p_table.add_argument("--format", choices=["text", "csv", "json"], default="text")
    p_table.set_defaults(func=cmd_table)

    p_asym = sub.add_parser("asym", help="asymptotic estimates for one size")
    _add_common(p_asym)
    p_asym.add_argument("-n", "--size", type=int, required=True)
    p_asym.add_argument(
        "--full",
        action="store_true",
        help="include the refined term and the multi-term expansion",
    )
    p_asym.add_argument("--terms", type=int, default=4, help="terms in the full expansion (default 4)")
    p_asym.add_argument("--exact", action="store_true", help="also compute the exact count for comparison")
    p_asym.add_argument("--format", choices=["text", "json"], default="text")
    p_asym.set_defaults(func=cmd_asym)

    p_verify = sub.add_parser("verify", help="numerical verification suites")
    _add_common(p_verify)
    p_verify.add_argument(
        "targets",
        nargs="*",
        metavar="TARGET",
        help=f"suites to run: {', '.join(sorted(VERIFY_TARGETS))}, or all (default all)",
    )
    p_verify.add_argument("--order", type=int, default=400, help="series order for the decomposition check")
    p_verify.add_argument("-n", "--size", type=int, default=200, help="size used by the contour check")
    p_verify.add_argument("--rho", type=float, default=0.9, help="major arc fraction for the contour check")
    p_verify.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for sampled test points")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def cmd_count(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    n = args.size
    if n < 0:
        raise ValueError("size must be nonnegative")
    count = count_stacks(n, params)
    witnesses = None
    if args.witnesses:
        witnesses = enumerate_stacks(n, params)
    if args.format == "json":
        payload = {
            "r": params.r,
            "m": params.m,
            "variant": params.variant.value,
            "n": n,
            "count": str(count),
        }
        if witnesses is not None:
            payload["witnesses"] = json.loads(witnesses_to_json(witnesses))
        _emit(json.dumps(payload, indent=2), args)
    else:
        lines = [f"stacks of size {n} with parts {params}: {count}"]
        if witnesses is not None:
            for w in witnesses:
                parts = [str(x) for x in w.left] + [f"[{w.peak}]"] + [str(x) for x in w.right]
                lines.append("  " + " ".join(parts))
        _emit("\n".join(lines), args)
    return 0


def cmd_table(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    dps = _resolve_precision(args)
    try:
        ns = [int(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise ValueError(f"--values must be comma separated integers, got {args.values!r}")
    if not ns or any(n < 1 for n in ns):
        raise ValueError("sizes must be positive integers")
    records = comparison_table(params, ns, dps=dps)
    if args.format == "csv":
        _emit(records_to_csv(records), args)
    elif args.format == "json":
        _emit(records_to_json(records), args)
    else:
        lines = [f"{params}", f"{'n':>8}  {'exact':>28}  {'main term':>14}  {'rel error':>12}"]
        for rec in records:
            exact = str(rec.exact)
            if len(exact) > 28:
                exact = exact[:10] + "..." + exact[-10:]
            lines.append(
                f"{rec.n:>8}  {exact:>28}  {rec.estimate.format(5):>14}  {mp.nstr(rec.relative_error, 5):>12}"
            )
        _emit("\n".join(lines), args)
    return 0


def cmd_asym(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    dps = _resolve_precision(args)
    n = args.size
    if n < 1:
        raise ValueError("size must be positive")
    x = main_term(params, n, dps=dps)
    rows: list[tuple[str, str]] = [("main term", x.format(6))]
    data: dict[str, object] = {
        "r": params.r,
        "m": params.m,
        "variant": params.variant.value,
        "n": n,
        "main_term": x.format(10),
    }
    if args.full:
        kappa = saddle_point(params, n, dps=dps)
        scale = growth_scale(params, n, dps=dps)
        rows.append(("saddle radius", mp.nstr(kappa, 8)))
        rows.append(("growth scale", mp.nstr(scale, 8)))
        data["saddle_radius"] = mp.nstr(kappa, 12)
        data["growth_scale"] = mp.nstr(scale, 12)
        refined = refined_main_term(params, n, dps=dps)
        rows.append(("refined term", refined.value.format(6)))
        rows.append(("bessel form", refined.bessel_form.format(6)))
        data["refined_term"] = refined.value.format(10)
        data["bessel_form"] = refined.bessel_form.format(10)
        full = asymptotic_sum(params, n, terms=args.terms, dps=dps)
        rows.append((f"expansion ({args.terms} terms)", full.format(6)))
        data["expansion"] = full.format(10)
        data["expansion_terms"] = args.terms
        alphas = singular_expansion_coeffs(params, max_order=args.terms - 1)
        rows.append(("expansion coefficients", ", ".join(str(a) for a in alphas)))
        data["expansion_coefficients"] = [str(a) for a in alphas]
    if args.exact:
        exact = count_stacks(n, params)
        rows.append(("exact count", str(exact)))
        data["exact"] = str(exact)
        rel = x.relative_error_against(exact)
        rows.append(("rel error of main term", mp.nstr(rel, 6)))
        data["main_term_relative_error"] = mp.nstr(rel, 12)
        if args.full:
            full = asymptotic_sum(params, n, terms=args.terms, dps=dps)
            rel_full = full.relative_error_against(exact)
            rows.append(("rel error of expansion", mp.nstr(rel_full, 6)))
            data["expansion_relative_error"] = mp.nstr(rel_full, 12)
    if args.format == "json":
        _emit(json.dumps(data, indent=2), args)
    else:
        width = max(len(label) for label, _ in rows)
        lines = [f"{params}, n = {n}"]
        lines += [f"  {label:<{width}}  {value}" for label, value in rows]
        _emit("\n".join(lines), args)
    return 0


class _Suite:
    """Collects PASS/FAIL lines for the verify subcommand."""

    def __init__(self) -> None:
        self.lines: list[str] = []
        self.failures = 0

    def check(self, name: str, measured, tolerance, detail: str = "") -> None:
        ok = measured <= tolerance
        if not ok:
            self.failures += 1
        status = "PASS" if ok else "FAIL"
        extra = f"  ({detail})" if detail else ""
        self.lines.append(
            f"{status}  {name}: measured {mp.nstr(mp.mpf(measured), 4)}"
            f" vs tolerance {mp.nstr(mp.mpf(tolerance), 4)}{extra}"
        )

    def check_flag(self, name: str, ok: bool, detail: str = "") -> None:
        if not ok:
            self.failures += 1
        status = "PASS" if ok else "FAIL"
        extra = f"  ({detail})" if detail else ""
        self.lines.append(f"{status}  {name}{extra}")


def _sample_tau(rng: random.Random) -> mp.mpc:
    return mp.mpc(rng.uniform(-0.4, 0.4), rng.uniform(0.08, 0.6))


def _sample_w(rng: random.Random) -> mp.mpc:
    return mp.mpc(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5))


def cmd_verify(args: argparse.Namespace) -> int:
    params = _resolve_params(args)
    dps = _resolve_precision(args)
    targets = set(args.targets or ["all"])
    unknown = targets - VERIFY_TARGETS - {"all"}
    if unknown:
        raise ValueError(f"unknown verify target(s): {', '.join(sorted(unknown))}")
    if "all" in targets:
        targets = set(VERIFY_TARGETS)
    rng = random.Random(args.seed)
    suite = _Suite()
    tol = mp.mpf(10) ** (-dps)

    if "decomposition" in targets:
        report = verify_decomposition(params, args.order)
        suite.check_flag(
            f"decomposition {params} to order {args.order}",
            report.ok,
            f"{len(report.mismatches)} mismatched coefficients"
            if not report.ok
            else "coefficients agree exactly",
        )

    if "theta" in targets:
        worst_pair = mp.mpf(0)
        worst_odd = mp.mpf(0)
        for _ in range(4):
            tau = _sample_tau(rng)
            w = _sample_w(rng)
            worst_pair = max(worst_pair, abs(theta_sum(w, tau, dps) - theta_product(w, tau, dps)))
            worst_odd = max(worst_odd, abs(theta_sum(-w, tau, dps) + theta_sum(w, tau, dps)))
        suite.check("theta sum vs triple product (4 samples)", worst_pair, tol)
        suite.check("theta oddness in the elliptic variable", worst_odd, tol)

    if "transform" in targets:
        worst = mp.mpf(0)
        for _ in range(4):
            worst = max(worst, theta_transform_residual(_sample_w(rng), _sample_tau(rng), dps))
        suite.check("theta modular transform (4 samples)", worst, tol)

    if "eta" in targets:
        worst = mp.mpf(0)
        for _ in range(4):
            worst = max(worst, eta_inversion_residual(_sample_tau(rng), dps))
        suite.check("eta inversion (4 samples)", worst, tol)
        with mp.workdps(dps + 15):
            special = abs(
                dedekind_eta(mp.mpc(0, 1), dps) - mp.gamma(mp.mpf(1) / 4) / (2 * mp.pi ** mp.mpf("0.75"))
            )
        suite.check("eta at the fixed point of the inversion", special, tol)

    if "falsetheta" in targets:
        worst = mp.mpf(0)
        for y in ("0.10", "0.14", "0.18"):
            tau = mp.mpc("0.01", y)
            worst = max(worst, false_theta_series_residual(params, tau, dps))
        suite.check("false theta vs integer series (3 points)", worst, tol)
        a, b = params.m, -(params.m + 4 * params.r)
        ok = True
        worst_ratio = mp.mpf(0)
        for y in ("0.05", "0.12", "0.20"):
            for xfrac in (mp.mpf(0), mp.mpf("0.5"), mp.mpf(-1)):
                tau = mp.mpc(mp.mpf(y) * xfrac, mp.mpf(y))
                chk = cubic_remainder_check(a, b, tau, dps)
                ok = ok and chk.ok
                worst_ratio = max(worst_ratio, chk.delta / chk.bound)
        suite.check(
            f"cubic remainder bound for indices ({a}, {b}) over 9 points",
            worst_ratio,
            mp.mpf(1),
            "delta over bound",
        )

    if "bessel" in targets:
        worst_series = mp.mpf(0)
        for order in range(4):
            for x in ("0.5", "3", "12", "30"):
                xv = mp.mpf(x)
                with mp.workdps(dps + 15):
                    ref = mp.besseli(order, xv)
                    worst_series = max(worst_series, abs(bessel_i(order, xv, dps=dps) / ref - 1))
        suite.check("modified bessel series vs reference (orders 0..3)", worst_series, mp.mpf(10) ** (-(dps - 10)))
        worst_hankel = mp.mpf(0)
        for order in range(4):
            xv = mp.mpf(30)
            with mp.workdps(dps + 15):
                a_val = bessel_i(order, xv, method="hankel", dps=dps)
                s_val = bessel_i(order, xv, method="series", dps=dps)
                worst_hankel = max(worst_hankel, abs(a_val / s_val - 1))
        suite.check("asymptotic bessel route at x = 30", worst_hankel, mp.mpf("1e-8"))

    if "contour" in targets:
        ctx = ArcContext.build(params, args.size, rho=args.rho, dps=dps)
        h0 = major_arc_integral(ctx, s=0)
        refined = refined_main_term(params, args.size, dps=dps)
        with mp.workdps(dps + 15):
            bessel_value = mp.exp(refined.bessel_form.ln_value)
            gap = abs(h0 / bessel_value - 1)
        suite.check(
            f"restricted contour vs bessel closed form at n = {args.size}, rho = {args.rho}",
            gap,
            mp.mpf("1e-3"),
        )
        prof = circle_profile(ArcContext.build(params, args.size, rho=args.rho, dps=12), grid=720)
        suite.check_flag(
            "integrand maximum lies on the major arc",
            prof.major_arc_contains_max,
            f"argmax nu = {prof.argmax_nu:.4f}",
        )

    if "oracle" in targets:
        pairs = [
            StackParams.from_residue(1, 3),
            StackParams.from_residue(1, 4),
            StackParams.from_residue(2, 5),
            StackParams.from_residue(3, 4),
            StackParams.from_residue(3, 5),
        ]
        ok = True
        for pp in pairs:
            series = stack_gf(pp, 40)
            for n in range(41):
                if series[n] != count_stacks(n, pp):
                    ok = False
        suite.check_flag("generating function vs direct enumeration to n = 40 (5 parameter pairs)", ok)

    text = "\n".join(suite.lines + [f"{suite.failures} failure(s)" if suite.failures else "all checks passed"])
    _emit(text, args)
    return 1 if suite.failures else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Asymptotic main terms for stack counts and their supporting machinery.

The saddle-point analysis of S(q) on the circle |q| = e^{-kappa} leads to

    kappa = pi / sqrt(3r(m-r)/2 - m^2/4 + 3mn),
    N     = pi^2 / (3 m kappa) = pi sqrt(r(m-r)/(6m^2) - 1/36 + n/(3m)),

and the count s(n) is approximated by a sum of Bessel-type terms

    h_s = (csc(pi r/m)/2) kappa^(s+1) I_{s+1}(2N),

weighted by the Taylor coefficients alpha_s of the false theta factor at the
dominant singularity (alpha_0 = 1/2).  The headline closed form

    X(n) = csc(pi r/m) / (8 3^(1/4) m^(1/4) n^(3/4)) * exp(2 pi sqrt(n/(3m)))

is the leading Hankel approximation of alpha_0 h_0 with N reduced to its
large-n limit.  refined_main_term keeps N intact and two Hankel correction
terms, which is noticeably closer at accessible n.

All magnitudes are returned as LogValue10 because they overflow doubles
quickly; relative errors are ordinary mpf values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath as mp

from .bigfloat import LogValue10
from .params import StackParams
from .qseries import stack_gf

DEFAULT_DPS = 50


def _saddle_radicand(params: StackParams, n: int) -> Fraction:
    r, m = params.r, params.m
    return Fraction(3 * r * (m - r), 2) - Fraction(m * m, 4) + 3 * m * n


def saddle_point(params: StackParams, n: int, dps: int = DEFAULT_DPS) -> mp.mpf:
    """Decay rate kappa of the evaluation circle |q| = e^{-kappa}."""
    rad = _saddle_radicand(params, n)
    if rad <= 0:
        raise ValueError(
            f"saddle radicand {rad} is not positive for {params}, n={n}; n is too small"
        )
    with mp.workdps(dps):
        return mp.pi / mp.sqrt(mp.mpf(rad.numerator) / rad.denominator)


def growth_scale(params: StackParams, n: int, dps: int = DEFAULT_DPS) -> mp.mpf:
    """Scale N with kappa * N = pi^2/(3m); the main term grows like e^{2N}."""
    kappa = saddle_point(params, n, dps=dps)
    with mp.workdps(dps):
        return mp.pi ** 2 / (3 * params.m * kappa)


@dataclass(frozen=True)
class ArcContext:
    """Shared state for contour work at fixed (params, n)."""

    params: StackParams
    n: int
    kappa: mp.mpf
    scale: mp.mpf
    rho: float
    dps: int

    @classmethod
    def build(
        cls,
        params: StackParams,
        n: int,
        rho: float = 0.9,
        dps: int = DEFAULT_DPS,
    ) -> "ArcContext":
        if not 0 < rho < 1:
            raise ValueError(f"rho must lie in (0, 1), got {rho}")
        return cls(
            params=params,
            n=n,
            kappa=saddle_point(params, n, dps=dps),
            scale=growth_scale(params, n, dps=dps),
            rho=float(rho),
            dps=dps,
        )


def bessel_i(order: int, x, method: str = "series", dps: int = DEFAULT_DPS, hankel_rtol: float = 1e-8) -> mp.mpf:
    """Modified Bessel function I_order(x) for integer order and x >= 0.

    method="series" sums the ascending series (all terms positive, no
    cancellation); method="hankel" uses the large-x asymptotic expansion
    truncated at its smallest term.  Negative orders reduce through
    I_{-k} = I_k.  The hankel route raises when the smallest term is still
    above hankel_rtol, i.e. the asymptotic regime is violated.
    """
    k = abs(int(order))
    if method == "series":
        return _bessel_series(k, x, dps)
    if method == "hankel":
        return _bessel_hankel(k, x, dps, hankel_rtol)
    raise ValueError(f"unknown method {method!r}, expected 'series' or 'hankel'")


def _bessel_series(k: int, x, dps: int) -> mp.mpf:
    with mp.workdps(dps + 10):
        x = mp.mpf(x)
        if x < 0:
            raise ValueError("x must be nonnegative")
        if x == 0:
            return mp.mpf(1) if k == 0 else mp.mpf(0)
        half = x / 2
        term = half ** k / mp.factorial(k)
        total = term
        j = 0
        eps = mp.mpf(10) ** (-(dps + 5))
        while True:
            j += 1
            term *= half * half / (j * (j + k))
            total += term
            if term < eps * total:
                break
        return +total


def _bessel_hankel(k: int, x, dps: int, rtol: float) -> mp.mpf:
    with mp.workdps(dps + 10):
        x = mp.mpf(x)
        if x <= 0:
            raise ValueError("hankel expansion needs x > 0")
        mu = mp.mpf(4 * k * k)
        term = mp.mpf(1)
        total = mp.mpf(1)
        smallest = mp.mpf(1)
        j = 0
        while True:
            j += 1
            nxt = -term * (mu - (2 * j - 1) ** 2) / (8 * j * x)
            if abs(nxt) >= smallest:
                break
            term = nxt
            total += term
            smallest = abs(term)
            if j > 4 * int(x) + 20:
                break
        if smallest > rtol:
            raise ValueError(
                f"asymptotic regime violated: smallest Hankel term {mp.nstr(smallest, 3)} "
                f"exceeds rtol {rtol} at x={mp.nstr(x, 6)}, order {k}"
            )
        return mp.exp(x) / mp.sqrt(2 * mp.pi * x) * total


def main_term(params: StackParams, n: int, dps: int = DEFAULT_DPS) -> LogValue10:
    """Closed-form leading asymptotic X(n)."""
    if n < 1:
        raise ValueError("n must be positive")
    r, m = params.r, params.m
    with mp.workdps(dps):
        csc = 1 / mp.sin(mp.pi * r / m)
        ln = (
            mp.log(csc)
            - mp.log(8 * mp.power(3, mp.mpf(1) / 4) * mp.power(m, mp.mpf(1) / 4))
            - mp.mpf(3) / 4 * mp.log(n)
            + 2 * mp.pi * mp.sqrt(mp.mpf(n) / (3 * m))
        )
        return LogValue10.from_ln(ln)


@dataclass(frozen=True)
class RefinedEstimate:
    """Refined main term and the Bessel form it approximates."""

    value: LogValue10        # e^{2N} prefactor with two Hankel corrections
    bessel_form: LogValue10  # (csc/4) kappa I_1(2N), no Hankel truncation
    kappa: mp.mpf
    scale: mp.mpf


def refined_main_term(params: StackParams, n: int, dps: int = DEFAULT_DPS) -> RefinedEstimate:
    """Keep the full N in the exponent and two Hankel correction terms.

    value = csc(pi r/m) / (24 m u^(3/4)) e^{2N} [1 - 3/(16N) - 15/(2 (16N)^2)]
    with u = r(m-r)/(6m^2) - 1/36 + n/(3m) and N = pi sqrt(u).  Requires
    2N >= 10 so the truncated bracket stays meaningful.
    """
    r, m = params.r, params.m
    kappa = saddle_point(params, n, dps=dps)
    scale = growth_scale(params, n, dps=dps)
    with mp.workdps(dps):
        if 2 * scale < 10:
            raise ValueError(
                f"refined estimate needs 2N >= 10, got 2N = {mp.nstr(2 * scale, 6)}; increase n"
            )
        csc = 1 / mp.sin(mp.pi * r / m)
        u = (scale / mp.pi) ** 2
        bracket = 1 - mp.mpf(3) / (16 * scale) - mp.mpf(15) / (2 * (16 * scale) ** 2)
        ln_value = (
            mp.log(csc)
            - mp.log(24 * m)
            - mp.mpf(3) / 4 * mp.log(u)
            + 2 * scale
            + mp.log(bracket)
        )
        ln_bessel = (
            mp.log(csc / 4) + mp.log(kappa) + mp.log(bessel_i(1, 2 * scale, dps=dps))
        )
        return RefinedEstimate(
            value=LogValue10.from_ln(ln_value),
            bessel_form=LogValue10.from_ln(ln_bessel),
            kappa=kappa,
            scale=scale,
        )


def auluck_main_term(n: int, dps: int = DEFAULT_DPS) -> LogValue10:
    """Classical leading asymptotic for plain (unrestricted) stacks."""
    if n < 1:
        raise ValueError("n must be positive")
    with mp.workdps(dps):
        ln = (
            2 * mp.pi * mp.sqrt(mp.mpf(n) / 3)
            - mp.log(8 * mp.power(3, mp.mpf(3) / 4))
            - mp.mpf(5) / 4 * mp.log(n)
        )
        return LogValue10.from_ln(ln)


_EXP_COEFFS = (Fraction(1), Fraction(-1), Fraction(1, 2), Fraction(-1, 6))


def singular_expansion_coeffs(params: StackParams, max_order: int = 3) -> tuple[Fraction, ...]:
    """Exact Taylor coefficients alpha_s of L(e^{-z}) at z = 0, s <= 3.

    Derived by composing the cubic small-z expansion of the false theta series
    f_{a,b} (a = m, b = -(m+4r)) with the exponential shift e^{-2rz}:
    L(e^{-z}) = -e^{-2rz} f_{m,-(m+4r)}(e^{-z}).  Only four coefficients of
    the cubic are available, hence max_order <= 3.
    """
    if not 0 <= max_order <= 3:
        raise ValueError("max_order must be between 0 and 3")
    r, m = params.r, params.m
    a, b = m, -(m + 4 * r)
    minus_f = (
        Fraction(1, 2),
        -Fraction(b, 8),
        -Fraction(a * b, 32),
        -Fraction(b * (6 * a * a - b * b), 384),
    )
    shift = tuple(_EXP_COEFFS[i] * (2 * r) ** i for i in range(4))  # e^{-2rz}
    out = []
    for s in range(max_order + 1):
        out.append(sum(shift[i] * minus_f[s - i] for i in range(s + 1)))
    return tuple(out)


def asymptotic_sum(
    params: StackParams, n: int, terms: int = 4, dps: int = DEFAULT_DPS
) -> LogValue10:
    """Sum of the first `terms` Bessel-weighted expansion terms.

    sum_{s < terms} alpha_s (csc(pi r/m)/2) kappa^(s+1) I_{s+1}(2N); with
    terms = 4 this tracks exact counts to relative O(kappa^4).
    """
    if not 1 <= terms <= 4:
        raise ValueError("terms must be between 1 and 4")
    alphas = singular_expansion_coeffs(params, max_order=terms - 1)
    kappa = saddle_point(params, n, dps=dps)
    scale = growth_scale(params, n, dps=dps)
    with mp.workdps(dps):
        csc = 1 / mp.sin(mp.pi * params.r / params.m)
        total = mp.mpf(0)
        for s, alpha in enumerate(alphas):
            weight = mp.mpf(alpha.numerator) / alpha.denominator
            total += weight * (csc / 2) * kappa ** (s + 1) * bessel_i(s + 1, 2 * scale, dps=dps)
        if total <= 0:
            raise ValueError("expansion sum is not positive; n is too small for this use")
        return LogValue10.from_ln(mp.log(total))


@dataclass(frozen=True)
class ComparisonRecord:
    """Exact count against asymptotic estimate at one n."""

    n: int
    exact: int
    estimate: LogValue10
    relative_error: mp.mpf


def comparison_table(
    params: StackParams,
    ns: Sequence[int],
    dps: int = DEFAULT_DPS,
    counts: dict[int, int] | None = None,
) -> list[ComparisonRecord]:
    """Exact counts vs main_term at each n (one series evaluation overall).

    counts may supply precomputed exact values keyed by n; otherwise a single
    stack_gf call at order max(ns) provides them.
    """
    if not ns:
        return []
    if any(n < 1 for n in ns):
        raise ValueError("all n must be positive")
    if counts is None:
        series = stack_gf(params, max(ns))
        counts = {n: series[n] for n in ns}
    records = []
    for n in ns:
        exact = counts[n]
        if exact == 0:
            raise ValueError(
                f"no stacks of size {n} exist for {params}; "
                "the relative error is undefined, drop this size"
            )
        estimate = main_term(params, n, dps=dps)
        rel = estimate.relative_error_against(exact, dps=dps)
        records.append(ComparisonRecord(n=n, exact=exact, estimate=estimate, relative_error=rel))
    return records


CSV_HEADER = "n,exact,asymptotic_mantissa,asymptotic_exp10,relative_error"


def records_to_csv(records: Iterable[ComparisonRecord], digits: int = 10) -> str:
    """CSV rows with exact counts as decimal strings and a mantissa/exponent split."""
    lines = [CSV_HEADER]
    for rec in records:
        mant, e = rec.estimate.decompose()
        lines.append(
            f"{rec.n},{rec.exact},{mp.nstr(mant, digits, strip_zeros=False)},{e},"
            f"{mp.nstr(rec.relative_error, digits)}"
        )
    return "\n".join(lines) + "\n"


def records_to_json(records: Iterable[ComparisonRecord], digits: int = 10) -> str:
    rows = []
    for rec in records:
        mant, e = rec.estimate.decompose()
        rows.append(
            {
                "n": rec.n,
                "exact": str(rec.exact),
                "asymptotic_mantissa": mp.nstr(mant, digits, strip_zeros=False),
                "asymptotic_exp10": e,
                "relative_error": mp.nstr(rec.relative_error, digits),
            }
        )
    return json.dumps(rows)

"""Exact q-series arithmetic for stack counting.

Everything here is integer-exact: a truncated power series is a tuple of
Python ints c[0..order], and all constructors build the series

    S(q)  = sum_{k>=0} q^{km+r} / ((q^r; q^m)_{k+1} (q^{m-r}; q^m)_{k})

for the standard variant (right Pochhammer depth k+1 for the gap variant),
together with the three pieces of its decomposition

    S = F * L + R,

where F is the partition product 1/((q^r; q^m)_inf (q^{m-r}; q^m)_inf),
L(q) = sum_{j>=0} (-1)^j q^{m j(j+1)/2 - 2rj} is a false theta series, and R
is a sparse correction with coefficients in {-1, 0, +1}.  The decomposition
is an identity of the standard variant; verify_decomposition reports the
residual honestly for any parameters.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator

from .params import StackParams, Variant


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series modulo q^(order+1) with exact integer coefficients."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) == 0:
            raise ValueError("series needs at least the constant coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        if not 0 <= n <= self.order:
            raise IndexError(f"coefficient index {n} outside [0, {self.order}]")
        return self.coeffs[n]

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return series_mul(self, other)

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self.coeffs[i] + other.coeffs[i] for i in range(order + 1))
        )

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        order = min(self.order, other.order)
        return TruncatedSeries(
            tuple(self.coeffs[i] - other.coeffs[i] for i in range(order + 1))
        )

    def truncate(self, order: int) -> "TruncatedSeries":
        if order > self.order:
            raise ValueError(f"cannot extend order {self.order} to {order}")
        return TruncatedSeries(self.coeffs[: order + 1])

    def nonzero_terms(self) -> Iterator[tuple[int, int]]:
        """(exponent, coefficient) pairs of nonzero terms, ascending."""
        return ((i, c) for i, c in enumerate(self.coeffs) if c != 0)


def one(order: int) -> TruncatedSeries:
    return TruncatedSeries((1,) + (0,) * order)


def monomial(exponent: int, order: int, coeff: int = 1) -> TruncatedSeries:
    c = [0] * (order + 1)
    if 0 <= exponent <= order:
        c[exponent] = coeff
    return TruncatedSeries(tuple(c))


def series_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    """Cauchy product truncated to min(a.order, b.order)."""
    order = min(a.order, b.order)
    out = [0] * (order + 1)
    for i, ai in enumerate(a.coeffs[: order + 1]):
        if ai:
            for j, bj in enumerate(b.coeffs[: order + 1 - i]):
                if bj:
                    out[i + j] += ai * bj
    return TruncatedSeries(tuple(out))


def mul_inv_one_minus(a: TruncatedSeries, d: int) -> TruncatedSeries:
    """Multiply by 1/(1 - q^d) via the running-sum recurrence c[i] += c[i-d]."""
    if d <= 0:
        raise ValueError(f"exponent d must be positive, got {d}")
    c = list(a.coeffs)
    _inv_one_minus_inplace(c, d, a.order)
    return TruncatedSeries(tuple(c))


def _inv_one_minus_inplace(c: list[int], d: int, hi: int) -> None:
    # forward pass: after it, c is the old c times 1/(1-q^d), valid through hi
    for i in range(d, hi + 1):
        c[i] += c[i - d]


def stack_gf(params: StackParams, order: int) -> TruncatedSeries:
    """Generating function of stack counts, coefficients through q^order.

    The k-th summand is accumulated from a running product over the inverse
    factors (1 - q^e)^(-1); factors and accumulation are capped at the
    shrinking window order - peak(k), which keeps the whole construction at
    O(order^2 / m) integer additions.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    acc = [0] * (order + 1)
    prod = [0] * (order + 1)
    prod[0] = 1
    k = 0
    while params.peak(k) <= order:
        peak = params.peak(k)
        hi = order - peak
        _inv_one_minus_inplace(prod, peak, hi)
        if params.variant is Variant.STANDARD:
            if k >= 1:
                _inv_one_minus_inplace(prod, k * params.m - params.r, hi)
        else:
            _inv_one_minus_inplace(prod, (k + 1) * params.m - params.r, hi)
        for i in range(hi + 1):
            if prod[i]:
                acc[i + peak] += prod[i]
        k += 1
    return TruncatedSeries(tuple(acc))


def congruence_partition_gf(params: StackParams, order: int) -> TruncatedSeries:
    """Partitions into parts congruent to r or -r mod m (the product F)."""
    if order < 0:
        raise ValueError("order must be nonnegative")
    c = [0] * (order + 1)
    c[0] = 1
    for start in (params.r, params.m - params.r):
        e = start
        while e <= order:
            _inv_one_minus_inplace(c, e, order)
            e += params.m
    return TruncatedSeries(tuple(c))


def false_theta_gf(params: StackParams, order: int) -> TruncatedSeries:
    """Alternating series L(q) = sum_j (-1)^j q^(m j(j+1)/2 - 2rj)."""
    c = [0] * (order + 1)
    for e, sign in _false_theta_terms(params, order):
        c[e] += sign
    return TruncatedSeries(tuple(c))


def _false_theta_terms(params: StackParams, order: int) -> Iterator[tuple[int, int]]:
    # exponents increase strictly from j = 1 on; only the gap regime can push
    # the j = 1 exponent below zero, and such terms fall outside a power series
    j = 0
    while True:
        e = params.m * j * (j + 1) // 2 - 2 * params.r * j
        if e > order:
            return
        if e >= 0:
            yield e, (-1) ** j
        j += 1


def correction_gf(params: StackParams, order: int) -> TruncatedSeries:
    """Sparse correction R(q) closing the gap between S and F*L.

    R = sum_{j>=0} (-1)^(j-1) q^(m j(3j+1)/2 - 3rj) (1 - q^((2j+1)m - 2r)).
    """
    c = [0] * (order + 1)
    for e, sign in _correction_terms(params, order):
        c[e] += sign
    return TruncatedSeries(tuple(c))


def _correction_terms(params: StackParams, order: int) -> Iterator[tuple[int, int]]:
    m, r = params.m, params.r
    j = 0
    while True:
        e1 = m * j * (3 * j + 1) // 2 - 3 * r * j
        if e1 > order:
            return
        if e1 >= 0:
            yield e1, -((-1) ** j)
        e2 = e1 + (2 * j + 1) * m - 2 * r
        if 0 <= e2 <= order:
            yield e2, (-1) ** j
        j += 1


def correction_support(params: StackParams, order: int) -> tuple[tuple[int, int], ...]:
    """Sorted (exponent, sign) support of the correction series.

    Exponents where the two term families would collide to a coefficient of
    absolute value >= 2 raise ValueError; exact cancellations are dropped.
    """
    support: dict[int, int] = {}
    for e, sign in _correction_terms(params, order):
        support[e] = support.get(e, 0) + sign
    for e, v in support.items():
        if abs(v) >= 2:
            raise ValueError(
                f"correction terms collide at exponent {e} with coefficient {v} for {params}"
            )
    return tuple((e, v) for e, v in sorted(support.items()) if v != 0)


@dataclass(frozen=True)
class DecompositionReport:
    """Residual of S - (F*L + R) through a given order."""

    params: StackParams
    order: int
    mismatches: tuple[int, ...]
    max_abs_residual: int

    @property
    def ok(self) -> bool:
        return not self.mismatches


def verify_decomposition(params: StackParams, order: int) -> DecompositionReport:
    """Compare stack_gf against F*L + R coefficientwise."""
    s = stack_gf(params, order)
    f = congruence_partition_gf(params, order)
    ell = false_theta_gf(params, order)
    corr = correction_gf(params, order)
    residual = s - (series_mul(f, ell) + corr)
    mismatches = tuple(i for i, c in residual.nonzero_terms())
    max_abs = max((abs(c) for _, c in residual.nonzero_terms()), default=0)
    return DecompositionReport(params, order, mismatches, max_abs)


def series_to_json(params: StackParams, series: TruncatedSeries) -> str:
    """Serialize with coefficients as decimal strings (arbitrary size)."""
    payload = {
        "r": params.r,
        "m": params.m,
        "variant": params.variant.value,
        "order": series.order,
        "coeffs": [str(c) for c in series.coeffs],
    }
    return json.dumps(payload)


def series_from_json(text: str) -> tuple[StackParams, TruncatedSeries]:
    payload = json.loads(text)
    params = StackParams(int(payload["r"]), int(payload["m"]), Variant(payload["variant"]))
    coeffs = tuple(int(c) for c in payload["coeffs"])
    series = TruncatedSeries(coeffs)
    if series.order != int(payload["order"]):
        raise ValueError(
            f"declared order {payload['order']} does not match {len(coeffs) - 1} coefficients"
        )
    return params, series


def evaluate(series: TruncatedSeries, q):
    """Numerically evaluate the truncated polynomial at q (Horner form)."""
    acc = 0
    for c in reversed(series.coeffs):
        acc = acc * q + c
    return acc

"""High-precision numerical checks of the modular and contour machinery.

Conventions, fixed once for the whole module:

    q = e^{2 pi i tau},  Im(tau) > 0;
    theta(w; tau) = sum over nu in 1/2 + Z of e^{pi i nu^2 tau + 2 pi i nu (w + 1/2)};
    eta(tau) = e^{pi i tau / 12} prod_{k>=1} (1 - q^k);
    F(tau) = 1 / ((q^r; q^m)_inf (q^{m-r}; q^m)_inf)  for validated (r, m);
    f_{a,b}(tau) = sum_{n>=1} (-1)^n q^{(a n^2 + b n)/2},  a > 0.

Every function takes a decimal working precision `dps` and performs the whole
computation inside a single mpmath context with guard digits, including the
construction of derived points like -1/tau.  Truncation cutoffs are derived
from the requested precision: Gaussian tail bounds for theta sums, geometric
bounds for the products.  Residual checks return mpf values; fits and profile
reports come back as small dataclasses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath as mp

from .asymptotics import ArcContext
from .params import StackParams
from .qseries import false_theta_gf

DEFAULT_DPS = 50
GUARD = 15


def _require_upper_half(tau) -> None:
    if not mp.im(tau) > 0:
        raise ValueError(f"tau must lie in the upper half plane, got {tau}")


def theta_sum(w, tau, dps: int = DEFAULT_DPS) -> mp.mpc:
    """Jacobi theta as a half-integer index sum.

    The term at index nu has magnitude e^{-pi nu^2 y - 2 pi nu Im(w)}, so the
    cutoff solves pi y nu^2 - 2 pi |Im w| nu = (dps + GUARD) log 10.
    """
    with mp.workdps(dps + GUARD):
        w = mp.mpc(w)
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        y = mp.im(tau)
        iw = abs(mp.im(w))
        target = (dps + GUARD) * mp.log(10)
        nu_max = (iw + mp.sqrt(iw * iw + y * target / mp.pi)) / y + 2
        k_max = int(mp.ceil(nu_max))
        total = mp.mpc(0)
        for k in range(-k_max - 1, k_max + 1):
            nu = k + mp.mpf(1) / 2
            total += mp.exp(mp.pi * 1j * nu * nu * tau + 2 * mp.pi * 1j * nu * (w + mp.mpf(1) / 2))
        return total


def theta_product(w, tau, dps: int = DEFAULT_DPS, trunc: int | None = None) -> mp.mpc:
    """Jacobi theta via the triple product

    -i q^{1/8} e^{-pi i w} (q; q)_inf (e^{2 pi i w}; q)_inf (e^{-2 pi i w} q; q)_inf.
    """
    with mp.workdps(dps + GUARD):
        w = mp.mpc(w)
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        y = mp.im(tau)
        if trunc is None:
            # factor k deviates from 1 by at most e^{2 pi |Im w|} |q|^k
            target = (dps + GUARD) * mp.log(10) + 2 * mp.pi * abs(mp.im(w)) - mp.log(1 - mp.exp(-2 * mp.pi * y))
            trunc = int(mp.ceil(target / (2 * mp.pi * y))) + 2
        q = mp.exp(2 * mp.pi * 1j * tau)
        zp = mp.exp(2 * mp.pi * 1j * w)
        zm = mp.exp(-2 * mp.pi * 1j * w)
        prod = 1 - zp
        qk = mp.mpc(1)
        for _ in range(1, trunc + 1):
            qk *= q
            prod *= (1 - qk) * (1 - zp * qk) * (1 - zm * qk)
        return -1j * mp.power(q, mp.mpf(1) / 8) * mp.exp(-mp.pi * 1j * w) * prod


def theta_transform_residual(w, tau, dps: int = DEFAULT_DPS) -> mp.mpf:
    """Residual of theta(w/tau; -1/tau) = -i sqrt(-i tau) e^{pi i w^2/tau} theta(w; tau).

    Relative when the right side is away from zero, absolute otherwise.
    """
    with mp.workdps(dps + GUARD):
        w = mp.mpc(w)
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        lhs = theta_sum(w / tau, -1 / tau, dps=dps)
        rhs = -1j * mp.sqrt(-1j * tau) * mp.exp(mp.pi * 1j * w * w / tau) * theta_sum(w, tau, dps=dps)
        diff = abs(lhs - rhs)
        scale = abs(rhs)
        if scale < mp.mpf(10) ** (-dps):
            return diff
        return diff / scale


def dedekind_eta(tau, dps: int = DEFAULT_DPS, trunc: int | None = None) -> mp.mpc:
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        y = mp.im(tau)
        if trunc is None:
            target = (dps + GUARD) * mp.log(10) - mp.log(1 - mp.exp(-2 * mp.pi * y))
            trunc = int(mp.ceil(target / (2 * mp.pi * y))) + 2
        q = mp.exp(2 * mp.pi * 1j * tau)
        prod = mp.mpc(1)
        qk = mp.mpc(1)
        for _ in range(1, trunc + 1):
            qk *= q
            prod *= 1 - qk
        return mp.exp(mp.pi * 1j * tau / 12) * prod


def eta_inversion_residual(tau, dps: int = DEFAULT_DPS) -> mp.mpf:
    """Relative residual of eta(-1/tau) = sqrt(-i tau) eta(tau)."""
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        lhs = dedekind_eta(-1 / tau, dps=dps)
        rhs = mp.sqrt(-1j * tau) * dedekind_eta(tau, dps=dps)
        return abs(lhs - rhs) / abs(rhs)


def congruence_product(params: StackParams, tau, dps: int = DEFAULT_DPS, trunc: int | None = None) -> mp.mpc:
    """F(tau): inverse product over exponents congruent to r and m - r mod m."""
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        y = mp.im(tau)
        if trunc is None:
            target = (dps + GUARD) * mp.log(10) - mp.log(1 - mp.exp(-2 * mp.pi * y))
            trunc = int(mp.ceil(target / (2 * mp.pi * y))) + params.m
        q = mp.exp(2 * mp.pi * 1j * tau)
        prod = mp.mpc(1)
        for start in (params.r, params.m - params.r):
            e = start
            qe = mp.power(q, start)
            qm = mp.power(q, params.m)
            while e <= trunc:
                prod *= 1 - qe
                qe *= qm
                e += params.m
        return 1 / prod


def congruence_product_main(params: StackParams, tau, dps: int = DEFAULT_DPS) -> mp.mpc:
    """Closed-form main factor of F under tau -> -1/(m tau) inversion:

    csc(pi r/m)/2 * e^{pi i tau (m/6 - r + r^2/m) + pi i/(6 m tau)}.
    """
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        r, m = params.r, params.m
        csc = 1 / mp.sin(mp.pi * r / m)
        expo = mp.pi * 1j * tau * (mp.mpf(m) / 6 - r + mp.mpf(r * r) / m) + mp.pi * 1j / (6 * m * tau)
        return csc / 2 * mp.exp(expo)


def product_residual(params: StackParams, tau, dps: int = DEFAULT_DPS) -> mp.mpf:
    """|F / closed form - 1| at tau, computed in one precision context."""
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        ratio = congruence_product(params, tau, dps=dps) / congruence_product_main(params, tau, dps=dps)
        return abs(ratio - 1)


@dataclass(frozen=True)
class DecayFit:
    """Least-squares fit of log residual against 1/z along tau = iz/(2 pi)."""

    params: StackParams
    slope: float
    expected: float          # -4 pi^2 / m, the modulus-level decay rate
    points: tuple[tuple[float, float], ...]   # (1/z, log residual)
    excluded: int            # points at the numerical noise floor, if any
    dps: int


def product_decay_fit(
    params: StackParams,
    z_values: Sequence = (0.30, 0.25, 0.20, 0.16, 0.13, 0.10),
    dps: int | None = None,
) -> DecayFit:
    """Fit the decay rate of the closed-form residual along the imaginary ray.

    The residual behaves like a power of e^{-4 pi^2/(m z)}, so log residual is
    close to linear in 1/z.  Working precision must grow like 1/z_min; the
    default is sized from the smallest z with a two-power margin so the m = 4
    case (where the leading power vanishes) still clears the noise floor.
    """
    if len(z_values) < 2:
        raise ValueError("need at least two sample points to fit a slope")
    zmin = min(float(z) for z in z_values)
    if zmin <= 0:
        raise ValueError("z values must be positive")
    if dps is None:
        dps = int(8 * math.pi ** 2 / (params.m * zmin) / math.log(10)) + 40
    xs: list[float] = []
    ys: list[float] = []
    excluded = 0
    floor = -(dps - 8) * math.log(10)
    for z in z_values:
        with mp.workdps(dps + GUARD):
            zv = mp.mpf(str(z)) if not isinstance(z, mp.mpf) else z
            tau = 1j * zv / (2 * mp.pi)
            res = product_residual(params, tau, dps=dps)
            logres = float(mp.log(res)) if res > 0 else floor
        if logres <= floor:
            excluded += 1
            continue
        xs.append(1.0 / float(zv))
        ys.append(logres)
    if len(xs) < 2:
        raise ValueError("all sample points sit at the noise floor; raise dps")
    slope = _least_squares_slope(xs, ys)
    return DecayFit(
        params=params,
        slope=slope,
        expected=-4 * math.pi ** 2 / params.m,
        points=tuple(zip(xs, ys)),
        excluded=excluded,
        dps=dps,
    )


def _least_squares_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    n = len(xs)
    xbar = sum(xs) / n
    ybar = sum(ys) / n
    num = sum((x - xbar) * (y - ybar) for x, y in zip(xs, ys))
    den = sum((x - xbar) ** 2 for x in xs)
    return num / den


def false_theta(a: int, b: int, tau, dps: int = DEFAULT_DPS) -> mp.mpc:
    """f_{a,b}(tau) = sum_{n>=1} (-1)^n q^{(a n^2 + b n)/2}, a > 0."""
    if a <= 0:
        raise ValueError("a must be positive")
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        y = mp.im(tau)
        target = (dps + GUARD) * mp.log(10)
        disc = b * b + 4 * a * target / (mp.pi * y)
        n_max = int(mp.ceil((-b + mp.sqrt(disc)) / (2 * a))) + 2
        q = mp.exp(2 * mp.pi * 1j * tau)
        total = mp.mpc(0)
        for n in range(1, n_max + 1):
            total += (-1) ** n * mp.power(q, mp.mpf(a * n * n + b * n) / 2)
        return total


def cubic_model(a: int, b: int, z) -> mp.mpc:
    """Small-z cubic approximation of f_{a,b} with z = -2 pi i tau."""
    z = mp.mpc(z)
    return (
        -mp.mpf(1) / 2
        + mp.mpf(b) / 8 * z
        + mp.mpf(a * b) / 32 * z ** 2
        + mp.mpf(b * (6 * a * a - b * b)) / 384 * z ** 3
    )


@dataclass(frozen=True)
class RemainderCheck:
    a: int
    b: int
    tau: complex
    delta: mp.mpf
    bound: mp.mpf

    @property
    def ok(self) -> bool:
        return self.delta < self.bound

    @property
    def margin(self) -> mp.mpf:
        return self.bound / self.delta if self.delta > 0 else mp.inf


def cubic_remainder_check(a: int, b: int, tau, dps: int = DEFAULT_DPS) -> RemainderCheck:
    """Check |f_{a,b}(tau) - cubic| < c y^4 with c = 105 pi^4 a^4 b^14 e^{pi sqrt(3) b^2/(32a)}.

    Valid on |Re tau| <= Im tau <= sqrt(3)/8; arguments outside raise.
    """
    with mp.workdps(dps + GUARD):
        tau_c = mp.mpc(tau)
        _require_upper_half(tau_c)
        x, y = mp.re(tau_c), mp.im(tau_c)
        if not abs(x) <= y:
            raise ValueError(f"need |Re tau| <= Im tau, got {tau}")
        if not y <= mp.sqrt(3) / 8:
            raise ValueError(f"need Im tau <= sqrt(3)/8 ~ 0.2165, got {tau}")
        z = -2 * mp.pi * 1j * tau_c
        delta = abs(false_theta(a, b, tau_c, dps=dps) - cubic_model(a, b, z))
        c = 105 * mp.pi ** 4 * mp.mpf(a) ** 4 * mp.mpf(b) ** 14 * mp.exp(mp.pi * mp.sqrt(3) * b * b / (32 * a))
        bound = c * y ** 4
        return RemainderCheck(a=a, b=b, tau=complex(tau_c), delta=delta, bound=bound)


def false_theta_series_residual(params: StackParams, tau, dps: int = DEFAULT_DPS) -> mp.mpf:
    """Cross-check L(q) = -q^{2r} f_{m, -(m+4r)}(q) against the exact expansion.

    The left side comes from the analytic false theta evaluator, the right
    from summing the integer series termwise at q.  Returns the relative gap.
    """
    with mp.workdps(dps + GUARD):
        tau = mp.mpc(tau)
        _require_upper_half(tau)
        q = mp.exp(2 * mp.pi * 1j * tau)
        via_false_theta = -mp.power(q, 2 * params.r) * false_theta(
            params.m, -(params.m + 4 * params.r), tau, dps=dps
        )
        y = mp.im(tau)
        order = int(mp.ceil((dps + GUARD) * mp.log(10) / (2 * mp.pi * y))) + 1
        series = false_theta_gf(params, order)
        direct = mp.mpc(0)
        for e, sign in series.nonzero_terms():
            direct += sign * mp.power(q, e)
        return abs(via_false_theta - direct) / abs(direct)


def simpson_refine(
    f: Callable[[mp.mpf], mp.mpf],
    a,
    b,
    rel_tol: float = 1e-10,
    min_doublings: int = 4,
    max_doublings: int = 18,
) -> tuple[mp.mpf, tuple[mp.mpf, ...]]:
    """Composite Simpson with panel doubling until successive estimates agree.

    Returns (value, history of estimates).  Raises when max_doublings panels
    cannot reach rel_tol; the integrands used here are analytic, so failure
    indicates a misconfigured interval rather than roughness.
    """
    a = mp.mpf(a)
    b = mp.mpf(b)
    history: list[mp.mpf] = []
    fa, fb = f(a), f(b)
    # interior sums are reused: odd points of level k become even points of k+1
    even_sum = mp.mpf(0)
    panels = 1
    prev = None
    for level in range(max_doublings + 1):
        panels = 2 ** level
        h = (b - a) / panels
        odd_sum = mp.mpf(0)
        for i in range(1, panels, 2):
            odd_sum += f(a + i * h)
        estimate = h / 3 * (fa + fb + 2 * even_sum + 4 * odd_sum)
        history.append(estimate)
        if prev is not None and level >= min_doublings:
            if abs(estimate - prev) <= mp.mpf(rel_tol) * abs(estimate):
                return estimate, tuple(history)
        prev = estimate
        even_sum += odd_sum
    raise ValueError(f"Simpson refinement did not converge after {panels} panels")


def major_arc_integral(ctx: ArcContext, s: int = 0, rel_tol: float = 1e-10) -> mp.mpf:
    """Numeric contour piece h_s over the restricted arc |nu| <= rho kappa.

    Evaluates (csc(pi r/m)/(8 pi)) int (kappa + i nu)^s
    e^{B (kappa + i nu) + A/(kappa + i nu)} d nu with A = pi^2/(3m) and
    B = r(m-r)/(2m) - m/12 + n, whose full-circle limit is the Bessel form
    (csc(pi r/m)/4) kappa^(s+1) I_{s+1}(2N).
    """
    params, n = ctx.params, ctx.n
    r, m = params.r, params.m
    b_exact = Fraction(r * (m - r), 2 * m) - Fraction(m, 12) + n
    with mp.workdps(ctx.dps + GUARD):
        kappa = +ctx.kappa
        A = mp.pi ** 2 / (3 * m)
        B = mp.mpf(b_exact.numerator) / b_exact.denominator
        csc = 1 / mp.sin(mp.pi * mp.mpf(r) / m)

        def integrand(nu):
            zz = mp.mpc(kappa, nu)
            return mp.re(zz ** s * mp.exp(B * zz + A / zz))

        # even in nu, so integrate the half arc
        half, _ = simpson_refine(integrand, mp.mpf(0), ctx.rho * kappa, rel_tol=rel_tol)
        return csc / (8 * mp.pi) * 2 * half


@dataclass(frozen=True)
class CircleProfile:
    """Log magnitude of F(q) L(q) q^{-n} sampled on |q| = e^{-kappa}."""

    params: StackParams
    n: int
    kappa: float
    rho: float
    nus: tuple[float, ...]
    log_magnitudes: tuple[float, ...]

    @property
    def argmax_nu(self) -> float:
        i = max(range(len(self.nus)), key=lambda j: self.log_magnitudes[j])
        return self.nus[i]

    @property
    def principal_log(self) -> float:
        return max(self.log_magnitudes)

    @property
    def major_arc_contains_max(self) -> bool:
        return abs(self.argmax_nu) <= self.rho * self.kappa

    def window_max(self, center: float, halfwidth: float) -> tuple[float, float]:
        """(nu, log magnitude) of the sampled maximum within the window."""
        pairs = [
            (nu, val)
            for nu, val in zip(self.nus, self.log_magnitudes)
            if abs(nu - center) <= halfwidth
        ]
        if not pairs:
            raise ValueError(f"window around {center} contains no grid points")
        return max(pairs, key=lambda t: t[1])

    def root_of_unity_peaks(self, halfwidth: float = 0.35) -> dict[int, tuple[float, float]]:
        """Sampled peak near nu = 2 pi l / m for each l = 1 .. m - 1."""
        out = {}
        for ell in range(1, self.params.m):
            center = 2 * math.pi * ell / self.params.m
            if center > math.pi:
                center -= 2 * math.pi
            out[ell] = self.window_max(center, halfwidth)
        return out

    def to_csv(self) -> str:
        lines = ["nu,log_magnitude"]
        for nu, val in zip(self.nus, self.log_magnitudes):
            lines.append(f"{nu:.10f},{val:.6f}")
        return "\n".join(lines) + "\n"


def circle_profile(ctx: ArcContext, grid: int = 720) -> CircleProfile:
    """Sample log |F L q^{-n}| at grid+1 angles nu = -pi + 2 pi j/grid.

    grid must be even so nu = 0 is sampled exactly.  Work happens at
    ctx.dps, which for profile purposes can sit well below the default
    verification precision.
    """
    if grid < 8 or grid % 2:
        raise ValueError("grid must be even and at least 8")
    params, n = ctx.params, ctx.n
    with mp.workdps(ctx.dps + 5):
        kappa = +ctx.kappa
        cutoff = int((ctx.dps + 5) * mp.log(10) / kappa) + params.m
        l_terms = list(false_theta_gf(params, cutoff + 1).nonzero_terms())
        nus: list[float] = []
        logs: list[float] = []
        for j in range(grid + 1):
            nu = -mp.pi + 2 * mp.pi * j / grid
            q = mp.exp(mp.mpc(-kappa, nu))
            log_f = mp.mpf(0)
            for start in (params.r, params.m - params.r):
                e = start
                qe = mp.power(q, start)
                qm = mp.power(q, params.m)
                while e <= cutoff:
                    log_f -= mp.log(abs(1 - qe))
                    qe *= qm
                    e += params.m
            l_val = mp.mpc(0)
            for e, sign in l_terms:
                l_val += sign * mp.power(q, e)
            mag = abs(l_val)
            if mag == 0:
                logs.append(float("-inf"))
            else:
                logs.append(float(log_f + mp.log(mag) + n * kappa))
            nus.append(float(nu))
    return CircleProfile(
        params=params,
        n=n,
        kappa=float(kappa),
        rho=ctx.rho,
        nus=tuple(nus),
        log_magnitudes=tuple(logs),
    )

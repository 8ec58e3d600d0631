"""Equipoints, medians and means of the beta distribution, the analytic
bounds relating them, and the one-step-monotone cumulative functions.

The equipoint of shapes (s, t) is the unique e in [0, 1] with

    I_e(s, t+1) + I_e(s+1, t) = 1,

a central-tendency point sitting between (s+1)/(s+t+2) and the mean s/(s+t).
For integer shapes it coincides with the point where a Bin(s+t, p) variable
is as likely to land at >= s as at <= s.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError
from .rootfind import bisect_monotone
from .specfun import ln_beta, reg_inc_beta, reg_inc_beta_inv, _reg_inc_beta

EQUIPOINT_BISECT_WIDTH = 1e-13
EQUIPOINT_RESIDUAL_TOL = 1e-11
MEDIAN_RESIDUAL_TOL = 1e-11


@dataclass(frozen=True)
class BetaShape:
    """Pair of beta shape parameters; t_frak = 0 is allowed only so the
    degenerate equipoint convention e_{s,0} = 1 has a carrier."""

    s_frak: float
    t_frak: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.s_frak) and self.s_frak > 0.0):
            raise DomainError(f"s_frak must be finite and > 0, got {self.s_frak}")
        if not (math.isfinite(self.t_frak) and self.t_frak >= 0.0):
            raise DomainError(f"t_frak must be finite and >= 0, got {self.t_frak}")

    @property
    def d_frak(self) -> float:
        return self.s_frak + self.t_frak

    @property
    def mean(self) -> float:
        if self.d_frak == 0.0:
            raise DomainError("mean undefined for zero total shape")
        return self.s_frak / self.d_frak


def _equipoint_residual(s: float, t: float, x: float) -> float:
    """I_x(s, t+1) + I_x(s+1, t) - 1; strictly increasing in x.

    Evaluated through the contiguous-shape rearrangement
    2 I_x(s, t) + (s - t) x^s (1-x)^t / (s t B(s, t)) - 1, which costs one
    incomplete-beta call instead of two.  The test suite checks the
    returned root against the two-call defining sum directly.
    """
    if x <= 0.0:
        return -1.0
    if x >= 1.0:
        return 1.0
    correction = (s - t) * math.exp(
        s * math.log(x) + t * math.log1p(-x) - ln_beta(s, t)
    ) / (s * t)
    return 2.0 * _reg_inc_beta(s, t, x) + correction - 1.0


def equipoint(shape: BetaShape) -> float:
    """The equipoint e of the shape pair.

    Solved by bisection to bracket width 1e-13: the residual is strictly
    increasing, so convergence is guaranteed for every admissible shape.
    The analytic bracket [(s+1)/(d+2), s/d] is tried first; when the sign
    change is not confirmed there the search falls back to the adjacent
    piece of [0, 1], so the returned value is the true root even where the
    analytic bounds fail.  The degenerate case t = 0 returns 1 by
    convention (the residual is I_e(s, 1) - 1, whose root is 1).
    """
    s, t = shape.s_frak, shape.t_frak
    if t == 0.0:
        return 1.0
    d = s + t

    def residual(x: float) -> float:
        return _equipoint_residual(s, t, x)

    lo_c = (s + 1.0) / (d + 2.0)
    hi_c = s / d
    if lo_c > hi_c:
        lo_c, hi_c = hi_c, lo_c
    r_lo = residual(lo_c)
    r_hi = residual(hi_c)
    if r_lo <= 0.0 <= r_hi:
        lo, hi = lo_c, hi_c
    elif r_lo > 0.0:
        lo, hi = 0.0, lo_c
    else:
        lo, hi = hi_c, 1.0
    return bisect_monotone(residual, lo, hi, xtol=EQUIPOINT_BISECT_WIDTH)


def median(shape: BetaShape) -> float:
    """Median m of Beta(s, t): the root of I_m(s, t) = 1/2."""
    if shape.t_frak == 0.0:
        raise DomainError("median requires t_frak > 0")
    return reg_inc_beta_inv(0.5, shape.s_frak, shape.t_frak)


def median_bounds(shape: BetaShape) -> tuple[float, float]:
    """Mean lower bound and the sharpened upper bound on the median.

    Valid for 1 <= t <= s with s + t >= 3; returns
    (s/(s+t), s/(s+t) + (s-t)/(s+t)^2).  The sandwich
    lower <= median <= upper is asserted by the test suite, not here.
    """
    s, t = shape.s_frak, shape.t_frak
    if not (1.0 <= t <= s and s + t >= 3.0):
        raise DomainError(f"median_bounds requires 1 <= t <= s and s+t >= 3, got ({s}, {t})")
    mu = s / (s + t)
    return mu, mu + (s - t) / (s + t) ** 2


def median_old_upper_bound(shape: BetaShape) -> float:
    """The classical mode upper bound (s-1)/(s+t-2), for comparison tables."""
    s, t = shape.s_frak, shape.t_frak
    if s + t <= 2.0:
        raise DomainError("old upper bound requires s + t > 2")
    return (s - 1.0) / (s + t - 2.0)


def equipoint_bounds(shape: BetaShape) -> tuple[float, float]:
    """Analytic bounds ((s+1)/(s+t+2), s/(s+t)) for the equipoint.

    The lower bound holds for all real 0 < t <= s; the upper bound is proven
    only for half-integer shapes (and conjectured in general), which is why
    the test suite restricts the upper-bound assertion to that grid.
    """
    s, t = shape.s_frak, shape.t_frak
    if not (0.0 < t <= s):
        raise DomainError(f"equipoint_bounds requires 0 < t <= s, got ({s}, {t})")
    return (s + 1.0) / (s + t + 2.0), s / (s + t)


def phi_functions(s_frak: float, d_frak: float) -> tuple[float, float]:
    """The cumulative pair (Phi, Phi_hat) at s for fixed total d.

    Phi(s) evaluates the Beta(s, d-s+1) CDF at the equipoint of (s, d-s);
    Phi_hat(s) evaluates it at the mean s/d.  Both are one-step monotone in
    s on d/2 <= s < d-1 (Phi on the half-integer grid).
    """
    if not (0.0 < s_frak < d_frak):
        raise DomainError(f"phi_functions requires 0 < s < d, got s={s_frak}, d={d_frak}")
    t = d_frak - s_frak
    e = equipoint(BetaShape(s_frak, t))
    phi = reg_inc_beta(s_frak, t + 1.0, e)
    phi_hat = reg_inc_beta(s_frak, t + 1.0, s_frak / d_frak)
    return phi, phi_hat


def phi_hat(s_frak: float, d_frak: float) -> float:
    """Just the mean-evaluated cumulative Phi_hat(s), skipping the
    equipoint solve that phi_functions also performs."""
    if not (0.0 < s_frak < d_frak):
        raise DomainError(f"phi_hat requires 0 < s < d, got s={s_frak}, d={d_frak}")
    return reg_inc_beta(s_frak, d_frak - s_frak + 1.0, s_frak / d_frak)


def binom_tail(p: float, s: int, d: int) -> float:
    """P(S >= s) for S ~ Bin(d, p), via I_p(s, d-s+1)."""
    if d < 1 or not (0 <= s <= d):
        raise DomainError(f"binom_tail requires 0 <= s <= d with d >= 1, got s={s}, d={d}")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"binom_tail requires p in [0, 1], got {p}")
    if s == 0:
        return 1.0
    return reg_inc_beta(float(s), float(d - s + 1), p)


# ---------------------------------------------------------------------------
# Verification sweeps.  Each returns a list of violation records (dicts) and
# never raises on a violation; the CLI and test suite decide severity.
# ---------------------------------------------------------------------------


def simmons_sweep(d_max: int = 400) -> list[dict]:
    """Check e_{s/2,t/2} <= s/d and (s'+1)/(d'+2) <= e over all integer
    splits d/2 <= s < d for d <= d_max (s' = s/2, d' = d/2)."""
    return simmons_sweep_range(2, d_max)


def simmons_sweep_range(d_lo: int, d_hi: int) -> list[dict]:
    """The simmons_sweep checks restricted to d in [d_lo, d_hi]."""
    violations = []
    for d in range(max(2, d_lo), d_hi + 1):
        for s in range((d + 1) // 2, d):
            t = d - s
            sf, tf = s / 2.0, t / 2.0
            e = equipoint(BetaShape(sf, tf))
            lower, upper = equipoint_bounds(BetaShape(sf, tf))
            if e > upper + 1e-12:
                violations.append({"check": "simmons_upper", "s": s, "t": t, "e": e, "bound": upper})
            if e < lower - 1e-12:
                violations.append({"check": "equipoint_lower", "s": s, "t": t, "e": e, "bound": lower})
    return violations


def equipoint_lower_sweep(s_max: float = 100.0, step: float = 0.5) -> list[dict]:
    """Real-parameter lower bound (s+1)/(s+t+2) <= e for 1 <= t <= s <= s_max."""
    violations = []
    n = int(round((s_max - 1.0) / step))
    for i in range(n + 1):
        s = 1.0 + i * step
        j = 0
        while (t := 1.0 + j * step) <= s:
            e = equipoint(BetaShape(s, t))
            lower = (s + 1.0) / (s + t + 2.0)
            if e < lower - 1e-12:
                violations.append({"check": "equipoint_lower", "s": s, "t": t, "e": e, "bound": lower})
            j += 1
    return violations


def simmons_conjecture_sweep(s_max: float = 30.0, step: float = 0.5) -> list[dict]:
    """Report-only sweep of the conjectured real-parameter upper bound
    e_{s,t} <= s/(s+t); findings are informational, never asserted."""
    reports = []
    n = int(round((s_max - 0.5) / step))
    for i in range(n + 1):
        s = 0.5 + i * step
        j = 0
        while (t := 0.5 + j * step) <= s:
            e = equipoint(BetaShape(s, t))
            upper = s / (s + t)
            if e > upper + 1e-12:
                reports.append({"check": "simmons_conjecture", "s": s, "t": t, "e": e, "bound": upper})
            j += 1
    return reports


def median_bounds_sweep(shapes: list[tuple[float, float]]) -> list[dict]:
    """Sandwich lower <= median <= upper on the given (s, t) shapes."""
    violations = []
    for s, t in shapes:
        shape = BetaShape(s, t)
        lower, upper = median_bounds(shape)
        m = median(shape)
        if not (lower - 1e-12 <= m <= upper + 1e-12):
            violations.append({"check": "median_bounds", "s": s, "t": t, "m": m,
                               "lower": lower, "upper": upper})
    return violations


def ordering_sweep(shapes: list[tuple[float, float]]) -> list[dict]:
    """Chain e_{s,t} <= m_{s,t} (0 < t <= s) and m_{s+1,t+1} <= e_{s,t}
    (0 < t < s) over the given shapes."""
    violations = []
    for s, t in shapes:
        if not 0.0 < t <= s:
            continue
        e = equipoint(BetaShape(s, t))
        m = median(BetaShape(s, t))
        if e > m + 1e-12:
            violations.append({"check": "e_le_m", "s": s, "t": t, "e": e, "m": m})
        if t < s:
            m_up = median(BetaShape(s + 1.0, t + 1.0))
            if m_up > e + 1e-12:
                violations.append({"check": "m_up_le_e", "s": s, "t": t, "e": e, "m_up": m_up})
    return violations


def phi_hat_monotone_sweep(d_max: float = 100.0, step: float = 0.25) -> list[dict]:
    """One-step monotonicity of Phi_hat on the real grid d/2 <= s < d-1."""
    violations = []
    d = 2.0 + step
    while d <= d_max + 1e-9:
        s = d / 2.0
        while s < d - 1.0 - 1e-9:
            ph0 = phi_hat(s, d)
            ph1 = phi_hat(s + 1.0, d)
            if ph0 > ph1 + 1e-12:
                violations.append({"check": "phi_hat_monotone", "s": s, "d": d,
                                   "phi_hat_s": ph0, "phi_hat_s1": ph1})
            s += step
        d += step
    return violations


def phi_monotone_sweep(d_max: float = 100.0) -> list[dict]:
    """One-step monotonicity of Phi for half-integer s, d on d/2 <= s < d-1."""
    violations = []
    d = 2.5
    while d <= d_max + 1e-9:
        # smallest half-integer >= d/2
        s = math.ceil(d) / 2.0
        while s < d - 1.0 - 1e-9:
            p0, _ = phi_functions(s, d)
            p1, _ = phi_functions(s + 1.0, d)
            if p0 > p1 + 1e-12:
                violations.append({"check": "phi_monotone", "s": s, "d": d,
                                   "phi_s": p0, "phi_s1": p1})
            s += 0.5
        d += 0.5
    return violations

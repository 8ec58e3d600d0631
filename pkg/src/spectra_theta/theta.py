"""The optimization core: signed sphere moments alpha/beta, the split
objective kappa(s,t;a,b), its per-split optimum kappa_star(s,t), and the
relaxation constant theta(d) with closed forms and odd-d bounds.

For a sign-pattern diagonal matrix J(s,t;a,b) = a I_s (+) (-b) I_t the
sphere integral of |xi* J xi| evaluates, through the regularized incomplete
beta function, to

    kappa(s,t;a,b) = s a alpha + t b beta,
    alpha = (2 I_{a/(a+b)}(t/2, s/2+1) - 1) / d,
    beta  = (2 I_{b/(a+b)}(s/2, t/2+1) - 1) / d.

Minimizing over trace-normalized (a, b) happens exactly where alpha = beta;
minimizing further over the splits s + t = d gives 1/theta(d).  The module
computes the per-split optimum along two independent parameterizations (the
alpha = beta root in (a, b), and the interior minimizer sigma_{s,t} of the
profile function f_{s,t}) and cross-checks them against each other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, NumericError
from .rootfind import newton_bracketed
from .specfun import _reg_inc_beta, ln_beta, ln_gamma

KAPPA_CROSS_CHECK_TOL = 1e-9
CLOSED_FORM_TOL = 1e-8


@dataclass(frozen=True)
class SignDiag:
    """The diagonal matrix a I_s (+) (-b) I_t with s positive entries a and
    t negative entries -b."""

    s: int
    t: int
    a: float
    b: float

    def __post_init__(self) -> None:
        if not (isinstance(self.s, int) and self.s >= 1):
            raise DomainError(f"s must be a positive integer, got {self.s}")
        if not (isinstance(self.t, int) and self.t >= 0):
            raise DomainError(f"t must be a nonnegative integer, got {self.t}")
        if not (self.a >= 0.0 and self.b >= 0.0 and self.a + self.b > 0.0):
            raise DomainError(f"need a, b >= 0 with a + b > 0, got ({self.a}, {self.b})")

    @property
    def d(self) -> int:
        return self.s + self.t

    def is_trace_normalized(self, tol: float = 1e-12) -> bool:
        return abs(self.s * self.a + self.t * self.b - self.d) <= tol

    def diagonal(self) -> list[float]:
        return [self.a] * self.s + [-self.b] * self.t


def alpha_beta(J: SignDiag) -> tuple[float, float]:
    """Signed second moments of sphere coordinates against sgn(xi* J xi).

    alpha is the common value of the integral of sgn(xi* J xi) xi_j^2 over
    the positive block 1 <= j <= s, and beta its negative over the other
    block.  Both lie in [-1/d, 1/d].
    """
    if J.t == 0:
        raise DomainError("alpha_beta requires t >= 1")
    d = float(J.d)
    u = J.a / (J.a + J.b)
    alpha = (2.0 * _reg_inc_beta(J.t / 2.0, J.s / 2.0 + 1.0, u) - 1.0) / d
    beta = (2.0 * _reg_inc_beta(J.s / 2.0, J.t / 2.0 + 1.0, 1.0 - u) - 1.0) / d
    return alpha, beta


def kappa(J: SignDiag) -> float:
    """Sphere integral of |xi* J xi|, via s a alpha + t b beta.

    Equals 1 when J is (a multiple of) the identity pattern; for
    trace-normalized J the value lies in (0, 1].
    """
    if J.t == 0:
        # sgn is identically +1, so the integral is a * E[|xi|^2] = a.
        return J.a
    alpha, beta = alpha_beta(J)
    return J.s * J.a * alpha + J.t * J.b * beta


def sigma_st(s: int, t: int) -> float:
    """Interior minimizer sigma of the profile function f_{s,t}: the root of

        I_sigma(s/2, 1+t/2) = I_{1-sigma}(t/2, 1+s/2)

    inside the analytic bracket [(s+2)/(s+t+4), s/(s+t)] (valid for
    s >= t >= 1).  A bracket without a sign change signals an upstream bug
    and raises NumericError.
    """
    if not (isinstance(s, int) and isinstance(t, int) and s >= t >= 1):
        raise DomainError(f"sigma_st requires integers s >= t >= 1, got ({s}, {t})")
    d = s + t
    sh, th = s / 2.0, t / 2.0
    lo = (s + 2.0) / (d + 4.0)
    hi = s / float(d)
    if s == t:
        return 0.5
    ln_b1 = ln_beta(sh, th + 1.0)
    ln_b2 = ln_beta(th, sh + 1.0)

    def residual(x: float) -> float:
        return _reg_inc_beta(sh, th + 1.0, x) - _reg_inc_beta(th, sh + 1.0, 1.0 - x)

    def slope(x: float) -> float:
        lx, l1x = math.log(x), math.log1p(-x)
        return math.exp((sh - 1.0) * lx + th * l1x - ln_b1) + math.exp(
            (th - 1.0) * l1x + sh * lx - ln_b2
        )

    return newton_bracketed(residual, slope, lo, hi, xtol=1e-15)


def f_g_h(s: int, t: int, p: float) -> tuple[float, float, float]:
    """The three profile functions of the reformulated optimization at p.

    f is the full objective after the change of variables p = b/(a+b) under
    the trace normalization; g and h are its relaxations that share the
    value f(sigma_{s,t}) at the interior minimizer but are monotone on one
    side of it.  h collapses to the closed form
    Gamma(s/2+t/2+1) / (Gamma(s/2+1) Gamma(t/2+1)) p^(s/2) (1-p)^(t/2).
    """
    if not (isinstance(s, int) and isinstance(t, int) and s >= 1 and t >= 1):
        raise DomainError(f"f_g_h requires integers s, t >= 1, got ({s}, {t})")
    if not (0.0 <= p <= 1.0):
        raise DomainError(f"f_g_h requires p in [0, 1], got {p}")
    sh, th = s / 2.0, t / 2.0
    i_left = _reg_inc_beta(th, sh + 1.0, 1.0 - p)
    i_right = _reg_inc_beta(sh, th + 1.0, p)
    w = (1.0 - p) * s + p * t
    f = (2.0 * (1.0 - p) * s * i_left + 2.0 * p * t * i_right) / w - 1.0
    g = 2.0 * (s * i_left + t * i_right) / (s + t) - 1.0
    h = i_left + i_right - 1.0
    return f, g, h


def h_closed_form(s: int, t: int, p: float) -> float:
    """Gamma-form of h_{s,t}(p); see f_g_h."""
    if p <= 0.0 or p >= 1.0:
        return 0.0
    ln_c = ln_gamma(s / 2.0 + t / 2.0 + 1.0) - ln_gamma(s / 2.0 + 1.0) - ln_gamma(t / 2.0 + 1.0)
    return math.exp(ln_c + (s / 2.0) * math.log(p) + (t / 2.0) * math.log1p(-p))


def kappa_star(s: int, t: int) -> tuple[float, float, float]:
    """Per-split optimum kappa_*(s,t) and its optimal weights (a, b).

    Computed two independent ways and cross-asserted:

    1. root-finding for alpha = beta over the trace-normalized segment
       s a + t b = s + t, which yields (a_opt, b_opt) and d * alpha;
    2. the profile value f_{s,t}(sigma_{s,t}).

    Disagreement beyond 1e-9 raises NumericError.
    """
    if not (isinstance(s, int) and isinstance(t, int) and s >= 1 and t >= 1):
        raise DomainError(f"kappa_star requires integers s, t >= 1, got ({s}, {t})")
    d = s + t
    sh, th = s / 2.0, t / 2.0
    ln_b1 = ln_beta(th, sh + 1.0)
    ln_b2 = ln_beta(sh, th + 1.0)

    # Route 1: alpha(u) = beta(u) over u = a/(a+b) in (0, 1).
    def residual(u: float) -> float:
        return _reg_inc_beta(th, sh + 1.0, u) - _reg_inc_beta(sh, th + 1.0, 1.0 - u)

    def slope(u: float) -> float:
        lu, l1u = math.log(u), math.log1p(-u)
        return math.exp((th - 1.0) * lu + sh * l1u - ln_b1) + math.exp(
            (sh - 1.0) * l1u + th * lu - ln_b2
        )

    if s == t:
        u = 0.5
    else:
        # u = 1 - sigma lives between t/d and (t+2)/(d+4); which endpoint is
        # lower depends on the sign of s - t.
        lo, hi = sorted((t / float(d), (t + 2.0) / (d + 4.0)))
        u = newton_bracketed(residual, slope, lo, hi, xtol=1e-15)
    lam = d / (s * u + t * (1.0 - u))
    a_opt, b_opt = lam * u, lam * (1.0 - u)
    J = SignDiag(s, t, a_opt, b_opt)
    alpha, beta = alpha_beta(J)
    ks_root = d * 0.5 * (alpha + beta)

    # Route 2: profile value at the interior minimizer.
    sigma = sigma_st(s, t) if s >= t else 1.0 - sigma_st(t, s)
    f_val, _, _ = f_g_h(s, t, sigma)

    if abs(ks_root - f_val) > KAPPA_CROSS_CHECK_TOL:
        raise NumericError(
            f"kappa_star routes disagree for (s, t) = ({s}, {t}): "
            f"alpha=beta route {ks_root!r} vs profile route {f_val!r}"
        )
    return ks_root, a_opt, b_opt


@dataclass(frozen=True)
class ThetaReport:
    """theta(d) with the minimizing split, the optimal interior point, and
    (odd d >= 3) the analytic bounds (theta_minus, theta_plus, theta_plusplus)."""

    d: int
    theta: float
    kappa_star: float
    minimizer_s: int
    minimizer_t: int
    p_opt: float
    bounds_odd: tuple[float, float, float] | None = None


def theta_even_closed_form(d: int) -> float:
    """Gamma-quotient closed form of 1/theta(d) for even d."""
    if d % 2 != 0 or d < 2:
        raise DomainError(f"even d required, got {d}")
    return math.exp(ln_gamma(0.5 + d / 4.0) - ln_gamma(1.0 + d / 4.0)) / math.sqrt(math.pi)


def theta_odd_bounds(d: int) -> tuple[float, float, float]:
    """Analytic bounds (theta_minus, theta_plus, theta_plusplus) for odd d >= 3.

    theta_plusplus is the pure gamma-quotient bound; theta_minus multiplies
    it by the fourth-root prefactor (d^2d / ((d+1)^(d+1) (d-1)^(d-1)))^(1/4);
    theta_plus is the reciprocal of the two-term incomplete-beta expression
    evaluated at (d+-1)/(2d).
    """
    if d < 3 or d % 2 == 0:
        raise DomainError(f"theta_odd_bounds requires odd d >= 3, got {d}")
    theta_pp = math.sqrt(math.pi / 2.0) * math.exp(ln_gamma((d + 3) / 2.0) - ln_gamma(d / 2.0 + 1.0))
    prefactor = math.exp(
        0.25 * (2 * d * math.log(d) - (d + 1) * math.log(d + 1.0) - (d - 1) * math.log(d - 1.0))
    )
    theta_m = prefactor * theta_pp
    inv_theta_p = (
        (d - 1.0) / d * _reg_inc_beta((d + 1) / 4.0, (d + 3) / 4.0, (d + 1.0) / (2.0 * d))
        + (d + 1.0) / d * _reg_inc_beta((d - 1) / 4.0, (d + 5) / 4.0, (d - 1.0) / (2.0 * d))
        - 1.0
    )
    return theta_m, 1.0 / inv_theta_p, theta_pp


def theta(d: int) -> ThetaReport:
    """The relaxation constant theta(d) = 1 / min_{s+t=d} kappa_*(s, t).

    The minimum is found by scanning every split s >= ceil(d/2) rather than
    trusting the known minimizer, which is then asserted: (d/2, d/2) for
    even d, ((d+1)/2, (d-1)/2) for odd d (with ties broken toward smaller
    s).  For even d the two closed forms of 1/theta(d) are additionally
    required to agree to 1e-12, and the scan minimum must match the closed
    form to 1e-8; a mismatch raises NumericError.
    """
    if not (isinstance(d, int) and d >= 1):
        raise DomainError(f"theta requires a positive integer d, got {d!r}")
    best_ks = math.inf
    best_s = best_t = -1
    for s in range((d + 1) // 2, d + 1):
        t = d - s
        if t == 0:
            ks = 1.0  # identity pattern: the integrand is constant
        else:
            ks, _, _ = kappa_star(s, t)
        if ks < best_ks:
            best_ks, best_s, best_t = ks, s, t

    if d == 1:
        expect_s, expect_t = 1, 0
    elif d % 2 == 0:
        expect_s = expect_t = d // 2
    else:
        expect_s, expect_t = (d + 1) // 2, (d - 1) // 2
    if (best_s, best_t) != (expect_s, expect_t):
        raise NumericError(
            f"scan minimizer ({best_s}, {best_t}) differs from the proven split "
            f"({expect_s}, {expect_t}) for d={d}"
        )

    if d % 2 == 0:
        beta_form = 2.0 * _reg_inc_beta(d / 4.0, d / 4.0 + 1.0, 0.5) - 1.0
        gamma_form = theta_even_closed_form(d)
        if abs(beta_form - gamma_form) > 1e-12:
            raise NumericError(
                f"even-d closed forms disagree for d={d}: {beta_form!r} vs {gamma_form!r}"
            )
        if abs(best_ks - gamma_form) > CLOSED_FORM_TOL:
            raise NumericError(
                f"scan minimum {best_ks!r} differs from closed form {gamma_form!r} for d={d}"
            )
        p_opt = 0.5
    elif d == 1:
        p_opt = 1.0  # degenerate split (1, 0); matches the equipoint convention e_{s,0} = 1
    else:
        p_opt = sigma_st(best_s, best_t)

    bounds = theta_odd_bounds(d) if (d % 2 == 1 and d >= 3) else None
    th = 1.0 / best_ks
    if bounds is not None:
        t_minus, t_plus, t_pp = bounds
        if not (t_minus - 1e-9 <= th <= min(t_plus, t_pp) + 1e-9):
            raise NumericError(f"theta({d})={th!r} escapes its odd-d bounds {bounds!r}")
    return ThetaReport(
        d=d,
        theta=th,
        kappa_star=best_ks,
        minimizer_s=best_s,
        minimizer_t=best_t,
        p_opt=p_opt,
        bounds_odd=bounds,
    )

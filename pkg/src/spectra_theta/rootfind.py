"""Bracketed scalar root finders.

Both solvers require a sign-changing bracket and never leave it, so they
converge for any continuous monotone residual.  ``bisect_monotone`` is the
plain guaranteed method; ``newton_bracketed`` takes Newton steps when they
stay inside the current bracket and bisects otherwise.
"""

from __future__ import annotations

from typing import Callable

from .errors import NumericError


def bisect_monotone(
    f: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    xtol: float = 1e-13,
    max_iter: int = 200,
) -> float:
    """Root of an increasing function on [lo, hi] by bisection.

    Requires f(lo) <= 0 <= f(hi); the bracket is shrunk until its width is
    at most ``xtol`` and the midpoint is returned.
    """
    flo, fhi = f(lo), f(hi)
    if flo > 0.0 or fhi < 0.0:
        raise NumericError(f"not a sign-changing bracket: f({lo})={flo}, f({hi})={fhi}")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if hi - lo <= xtol or mid <= lo or mid >= hi:
            return mid
        if f(mid) < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def newton_bracketed(
    f: Callable[[float], float],
    fprime: Callable[[float], float],
    lo: float,
    hi: float,
    *,
    x0: float | None = None,
    xtol: float = 1e-14,
    rtol: float = 0.0,
    ftol: float = 0.0,
    max_iter: int = 200,
) -> float:
    """Safeguarded Newton iteration for an increasing function on [lo, hi].

    Newton steps that leave the current bracket (or have a vanishing
    derivative, or fail to shrink the previous step fast enough) are
    replaced with bisection steps, so convergence is guaranteed.  Stops when
    the residual magnitude drops to ``ftol``, when the bracket width drops
    to ``xtol + rtol * max(|lo|, |hi|)``, or when the bracket can no longer
    be split in floating point; raises NumericError when the bracket is
    invalid or the iteration budget runs out first.
    """
    flo, fhi = f(lo), f(hi)
    if flo > 0.0 or fhi < 0.0:
        raise NumericError(f"not a sign-changing bracket: f({lo})={flo}, f({hi})={fhi}")
    if flo == 0.0:
        return lo
    if fhi == 0.0:
        return hi
    x = 0.5 * (lo + hi) if x0 is None else min(max(x0, lo), hi)
    step_old = hi - lo
    step = step_old
    fx = f(x)
    dfx = fprime(x)
    for _ in range(max_iter):
        if abs(fx) <= ftol:
            return x
        if fx < 0.0:
            lo = x
        else:
            hi = x
        if hi - lo <= xtol + rtol * max(abs(lo), abs(hi)):
            return 0.5 * (lo + hi)
        # Reject the Newton step when it leaves the bracket or when it fails
        # to shrink the previous step fast enough (flat-tail creep); bisect.
        newton_ok = (
            dfx > 0.0
            and ((x - hi) * dfx - fx) * ((x - lo) * dfx - fx) < 0.0
            and abs(2.0 * fx) <= abs(step_old * dfx)
        )
        step_old = step
        if newton_ok:
            step = fx / dfx
            x -= step
        else:
            step = 0.5 * (hi - lo)
            x = lo + step
        if not (lo < x < hi):
            # rounding pushed the iterate onto the boundary: bisect instead,
            # and stop only if even the midpoint cannot separate the bracket
            x = 0.5 * (lo + hi)
            if not (lo < x < hi):
                return x
        fx = f(x)
        dfx = fprime(x)
    raise NumericError(f"root finder did not converge on [{lo}, {hi}]")

"""Adaptive Simpson quadrature for Python callables."""

import math

DEFAULT_TOL = 1e-12
DEFAULT_DEPTH = 40


def adaptive_simpson(f, a, b, tol=DEFAULT_TOL, max_depth=DEFAULT_DEPTH):
    """Integrate ``f`` over ``[a, b]`` to absolute tolerance ``tol``.

    Classic recursive Simpson bisection with the Richardson correction
    ``(S2 - S1) / 15``; the tolerance is halved at each split.
    """
    if a == b:
        return 0.0
    m = 0.5 * (a + b)
    fa, fm, fb = f(a), f(m), f(b)
    for v in (fa, fm, fb):
        if not math.isfinite(v):
            raise ValueError("integrand is not finite on the sampled points")
    whole = (b - a) * (fa + 4.0 * fm + fb) / 6.0
    return _step(f, a, m, b, fa, fm, fb, whole, tol, max_depth)


def _step(f, a, m, b, fa, fm, fb, whole, tol, depth):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = f(lm)
    frm = f(rm)
    left = (m - a) * (fa + 4.0 * flm + fm) / 6.0
    right = (b - m) * (fm + 4.0 * frm + fb) / 6.0
    delta = left + right - whole
    if depth <= 0 or abs(delta) <= 15.0 * tol:
        return left + right + delta / 15.0
    return (_step(f, a, lm, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
            + _step(f, m, rm, b, fm, frm, fb, right, 0.5 * tol, depth - 1))


def composite_simpson(y, dx):
    """Composite Simpson rule on an odd number of equally spaced samples."""
    n = len(y)
    if n < 3 or n % 2 == 0:
        raise ValueError("composite Simpson needs an odd number >= 3 of samples")
    total = y[0] + y[-1] + 4.0 * sum(y[1:-1:2]) + 2.0 * sum(y[2:-1:2])
    return float(total) * dx / 3.0

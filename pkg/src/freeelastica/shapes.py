"""Test and benchmark curve families sampled by arclength.

Closed-form arclength where it exists (circle, logarithmic spiral); other
parametric curves are resampled by integrating ``dt/ds = 1/|f'(t)|``.
Tangent and curvature always come from the analytic derivatives.
"""

from __future__ import annotations

import math
import warnings

import numpy as np
from scipy.integrate import IntegrationWarning, quad, solve_ivp
from scipy.interpolate import make_interp_spline

from .curve import ArclengthCurve


def circle(radius=1.0, center=(0.0, 0.0), n_samples=256, start_angle=0.0, arc=2.0 * math.pi):
    """Counterclockwise circle (or arc) traversed at unit speed."""
    s = np.linspace(0.0, radius * arc, n_samples)
    t = start_angle + s / radius
    pos = np.stack([center[0] + radius * np.cos(t), center[1] + radius * np.sin(t)], axis=1)
    tan = np.stack([-np.sin(t), np.cos(t)], axis=1)
    return ArclengthCurve(s, pos, tan, np.full(n_samples, 1.0 / radius))


def line(start=(0.0, 0.0), direction=(1.0, 0.0), length=1.0, n_samples=64):
    d = np.asarray(direction, dtype=float)
    d = d / np.hypot(*d)
    s = np.linspace(0.0, length, n_samples)
    pos = np.asarray(start, dtype=float) + s[:, None] * d
    return ArclengthCurve(s, pos, np.tile(d, (n_samples, 1)), np.zeros(n_samples))


def log_spiral(a=0.2, theta0=0.0, theta1=2.0 * math.pi, n_samples=None, ds=None):
    """Equiangular spiral ``r = exp(a theta)``, a != 0."""
    c = math.sqrt(1.0 + a * a)
    r0, r1 = math.exp(a * theta0), math.exp(a * theta1)
    length = c * (r1 - r0) / a
    s = _grid(abs(length), n_samples, ds)
    r = r0 + a * s / c
    th = np.log(r) / a
    ct, st = np.cos(th), np.sin(th)
    pos = np.stack([r * ct, r * st], axis=1)
    tan = np.stack([a * ct - st, a * st + ct], axis=1) / c
    return ArclengthCurve(s, pos, tan, 1.0 / (r * c))


def _grid(length, n_samples, ds):
    if ds is not None:
        n = int(math.floor(length / ds + 1e-9)) + 1
        return ds * np.arange(n)
    return np.linspace(0.0, length, n_samples)


def from_parametric(f, df, d2f, t0, t1, n_samples=None, ds=None, source="analytic"):
    """Arclength-resample the parametric curve ``f`` on ``[t0, t1]``.

    ``f``, ``df`` and ``d2f`` map an array of parameters to ``(m, 2)``
    arrays. Parameters at the arclength nodes come from integrating
    ``dt/ds = 1/|f'(t)|`` with DOP853 at tight tolerances.
    """
    speed = lambda t: float(np.hypot(*np.asarray(df(np.array([t])))[0]))
    with warnings.catch_warnings():
        # quad flags round-off when the requested 1e-13 is already met to within eps
        warnings.simplefilter("ignore", IntegrationWarning)
        length, _ = quad(speed, t0, t1, epsabs=1e-14, epsrel=1e-13, limit=500)
    s = _grid(length, n_samples, ds)
    sol = solve_ivp(lambda _s, t: [1.0 / speed(t[0])], (0.0, s[-1]), [t0], method="DOP853",
                    t_eval=s, rtol=1e-13, atol=1e-14)
    t = sol.y[0]
    p = np.asarray(f(t))
    d1 = np.asarray(df(t))
    d2 = np.asarray(d2f(t))
    sp = np.hypot(d1[:, 0], d1[:, 1])
    tan = d1 / sp[:, None]
    kappa = (d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0]) / sp**3
    return ArclengthCurve(s, p, tan, kappa, source=source)


def ellipse(a=2.0, b=1.0, center=(0.0, 0.0), t0=0.0, t1=2.0 * math.pi, n_samples=None, ds=None):
    cx, cy = center
    return from_parametric(
        lambda t: np.stack([cx + a * np.cos(t), cy + b * np.sin(t)], axis=1),
        lambda t: np.stack([-a * np.sin(t), b * np.cos(t)], axis=1),
        lambda t: np.stack([-a * np.cos(t), -b * np.sin(t)], axis=1),
        t0, t1, n_samples=n_samples, ds=ds,
    )


def graph_curve(fn, dfn, d2fn, x0, x1, n_samples=None, ds=None):
    """Graph ``y = fn(x)`` traversed left to right."""
    return from_parametric(
        lambda t: np.stack([t, fn(t)], axis=1),
        lambda t: np.stack([np.ones_like(t), dfn(t)], axis=1),
        lambda t: np.stack([np.zeros_like(t), d2fn(t)], axis=1),
        x0, x1, n_samples=n_samples, ds=ds,
    )


def parabola(x0=-1.0, x1=1.0, n_samples=None, ds=None):
    """``y = x^2``."""
    return graph_curve(lambda x: x * x, lambda x: 2.0 * x, lambda x: 2.0 + 0.0 * x,
                       x0, x1, n_samples=n_samples, ds=ds)


def archimedean_spiral(a=1.0, theta0=1.0, theta1=6.0, n_samples=None, ds=None):
    """``r = a theta``; its curvature decreases strictly for theta > 0."""
    return from_parametric(
        lambda t: np.stack([a * t * np.cos(t), a * t * np.sin(t)], axis=1),
        lambda t: np.stack([a * (np.cos(t) - t * np.sin(t)), a * (np.sin(t) + t * np.cos(t))], axis=1),
        lambda t: np.stack([a * (-2.0 * np.sin(t) - t * np.cos(t)),
                            a * (2.0 * np.cos(t) - t * np.sin(t))], axis=1),
        theta0, theta1, n_samples=n_samples, ds=ds,
    )


def random_spline(seed, n_points=9, step=0.8, max_turn=0.6, min_distance=1.0,
                  max_curvature=3.0, n_samples=None, ds=None):
    """Smooth random open curve from a quintic interpolating spline.

    Control points follow a random walk with bounded turning. The first and
    last spline segments (where end conditions make the interpolant wiggle)
    are dropped, and draws whose curvature exceeds ``max_curvature`` are
    rejected so that the curve stays at unit scale. The result is translated
    so that its distance to the origin is at least ``min_distance`` (which
    makes it generic).
    """
    rng = np.random.default_rng(seed)
    for _ in range(1000):
        heading = rng.uniform(0.0, 2.0 * math.pi)
        pts = [np.zeros(2)]
        for _ in range(n_points - 1):
            heading += rng.uniform(-max_turn, max_turn)
            pts.append(pts[-1] + step * np.array([math.cos(heading), math.sin(heading)]))
        pts = np.array(pts)
        chord = np.concatenate([[0.0], np.cumsum(np.hypot(*np.diff(pts, axis=0).T))])
        spl = make_interp_spline(chord, pts, k=5)
        d1, d2 = spl.derivative(1), spl.derivative(2)
        t0, t1 = chord[1], chord[-2]
        tt = np.linspace(t0, t1, 4001)
        v, a = d1(tt), d2(tt)
        kappa = (v[:, 0] * a[:, 1] - v[:, 1] * a[:, 0]) / np.hypot(v[:, 0], v[:, 1]) ** 3
        if np.max(np.abs(kappa)) <= max_curvature:
            break
    else:  # pragma: no cover - practically unreachable for sane parameters
        raise RuntimeError("could not draw a spline within the curvature bound")

    dense = spl(tt)
    # Push the curve away from the origin along the direction of its centroid.
    centroid = dense.mean(axis=0)
    norm = np.hypot(*centroid)
    direction = centroid / norm if norm > 1e-9 else np.array([1.0, 0.0])
    shift = np.zeros(2)
    for _ in range(200):
        if np.min(np.hypot(*(dense + shift).T)) >= min_distance:
            break
        shift += 0.25 * direction
    return from_parametric(lambda t: spl(t) + shift, d1, d2, t0, t1,
                           n_samples=n_samples, ds=ds, source="spline")

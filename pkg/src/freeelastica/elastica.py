"""Free (rectangular) elasticae in closed form.

Curvature ``kappa(s) = sqrt(2) lam cn(lam s + mu; 1/sqrt(2))`` solves
``2 kappa_ss + kappa^3 = 0``. With ``lam = 1, mu = 0`` and ``theta(0) = 0`` the
quarter period ``[0, K]`` (``K = K(1/sqrt 2)``) is described by

    theta(s) = 2 arcsin(sn(s) / sqrt 2)
    x(s) = F(sn(s)),  y(s) = sqrt(2) (1 - cn(s))

where ``F`` is the primitive from :mod:`freeelastica.elliptic`. Rescaling to
``lam = c*/sqrt 2`` turns the quarter period into the graph of ``U`` over
``[0, 1]`` rising from ``-h*`` to ``0`` with vertical slope at ``x = 1``.

The canonical branch ``gamma*`` is the unit-speed curve of ``U*(x) = U(x+1)``
on ``[0, 1]``: it starts at the origin with vertical tangent and zero
curvature and ends at ``(1, h*)`` with horizontal tangent. In terms of
``u = lam sigma`` (``sigma`` the arclength of ``gamma*``)

    gamma*(sigma) = ( [F(1) - F(sn(K - u))] / lam,  h* k' sn(u) / dn(u) )
    T*(sigma)     = ( sn(u)^2 / (2 dn(u)^2),  cn(u) / dn(u)^2 )
    kappa*(sigma) = -c* k' sn(u) / dn(u)

with ``k' = 1/sqrt 2``. The first coordinate is integrated directly between
the two amplitudes, which avoids cancellation near the origin.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from . import _kernels
from .curve import AngleTrace, ArclengthCurve, from_curvature, polar_tangential_angle
from .elliptic import (
    ELASTICA_MODULUS,
    SQRT2,
    complete_K,
    jacobi_arrays,
    paper_constants,
    primitive_between_amplitudes,
)
from .errors import DomainError, InconsistencyError

K_E = complete_K(ELASTICA_MODULUS)
_KP = ELASTICA_MODULUS  # complementary modulus; equals k for k^2 = 1/2
_C = paper_constants()
C_STAR = _C.c_star
H_STAR = _C.h_star
THETA_STAR = _C.theta_star
CANONICAL_LAMBDA = C_STAR / SQRT2
L_STAR = K_E / CANONICAL_LAMBDA

_QUARTER_SLACK = 1e-12


@dataclass(frozen=True)
class ElasticaParams:
    lam: float
    mu: float = 0.0

    @property
    def trivial(self) -> bool:
        return self.lam == 0.0


def elastica_curvature(params: ElasticaParams, s):
    if params.lam == 0.0:
        return np.zeros_like(np.asarray(s, dtype=float)) if np.ndim(s) else 0.0
    _, cn, _ = jacobi_arrays(params.lam * np.asarray(s, dtype=float) + params.mu, ELASTICA_MODULUS)
    out = SQRT2 * params.lam * cn
    return float(out) if np.ndim(s) == 0 else out


def elastica_curvature_derivatives(params: ElasticaParams, s):
    """``(kappa, kappa_s, kappa_ss)`` from the derivative rules of sn, cn, dn."""
    lam = params.lam
    sn, cn, dn = jacobi_arrays(lam * np.asarray(s, dtype=float) + params.mu, ELASTICA_MODULUS)
    kappa = SQRT2 * lam * cn
    kappa_s = -SQRT2 * lam**2 * sn * dn
    kappa_ss = -SQRT2 * lam**3 * cn * (dn * dn - 0.5 * sn * sn)
    return kappa, kappa_s, kappa_ss


def _check_quarter(s):
    s_arr = np.asarray(s, dtype=float)
    if np.any(s_arr < -_QUARTER_SLACK) or np.any(s_arr > K_E + _QUARTER_SLACK):
        raise DomainError("closed forms are stated on the quarter period [0, K(1/sqrt 2)]")
    return np.clip(s_arr, 0.0, K_E)


def elastica_angle(s):
    """Tangent angle of the ``lam = 1, mu = 0`` elastica, ``theta(0) = 0``."""
    s_arr = _check_quarter(s)
    sn, _, _ = jacobi_arrays(s_arr, ELASTICA_MODULUS)
    out = 2.0 * np.arcsin(np.clip(sn / SQRT2, -1.0, 1.0))
    return float(out) if np.ndim(s) == 0 else out


def elastica_position(s):
    """Position on the ``lam = 1`` elastica started at the origin along +x."""
    s_arr = _check_quarter(s)
    sn, cn, _ = jacobi_arrays(s_arr, ELASTICA_MODULUS)
    amp = np.arctan2(sn, cn)
    x = primitive_between_amplitudes(np.zeros_like(amp), amp)
    y = SQRT2 * (1.0 - cn)
    out = np.stack([x, y], axis=-1)
    return out


def elastica_curve(params: ElasticaParams, length, n_samples=2048, start=(0.0, 0.0),
                   tangent=(1.0, 0.0)) -> ArclengthCurve:
    """Free elastica with parameters ``params``, integrated from its curvature."""
    return from_curvature(lambda s: elastica_curvature(params, s), length, start, tangent, n_samples)


def quarter_curve(n_samples=2048, start=(0.0, 0.0)) -> ArclengthCurve:
    """The ``lam = 1`` quarter period with closed-form nodes."""
    s = np.linspace(0.0, K_E, n_samples)
    sn, cn, dn = jacobi_arrays(s, ELASTICA_MODULUS)
    pos = elastica_position(s) + np.asarray(start, dtype=float)
    # cos(theta) = cn^2, sin(theta) = sqrt(2) sn dn for modulus^2 = 1/2
    tan = np.stack([cn * cn, SQRT2 * sn * dn], axis=1)
    return ArclengthCurve(s, pos, tan, SQRT2 * cn)


# -- graph function U ---------------------------------------------------------

@dataclass(frozen=True)
class GraphPoint:
    x: float
    u: float
    slope: float
    curvature: float

    @property
    def vertical(self) -> bool:
        return math.isinf(self.slope)


def _quarter_graph(xi):
    """U on [0, 1] via inversion of the amplitude-parametrised abscissa."""
    if xi <= 0.0:
        phi = 0.0
    elif xi >= 1.0:
        phi = 0.5 * math.pi
    else:
        target = CANONICAL_LAMBDA * xi
        phi = brentq(lambda p: _kernels.primitive_amp(0.0, p) - target, 0.0, 0.5 * math.pi,
                     xtol=1e-13, rtol=4 * np.finfo(float).eps)
    s, c = math.sin(phi), math.cos(phi)
    u = -H_STAR * c
    if c == 0.0 or phi == 0.5 * math.pi:
        slope = math.inf
    else:
        slope = SQRT2 * s * math.sqrt(1.0 - 0.5 * s * s) / (c * c)
    return u, slope, C_STAR * c


def canonical_graph_point(x: float) -> GraphPoint:
    """Value, slope and curvature of the periodic elastica graph ``U`` at ``x``.

    ``U`` is even with ``U(x + 2) = -U(x)``; the argument is reduced to
    ``[0, 1]`` where the rescaled quarter period is inverted by bracketed root
    finding on the (monotone) abscissa. At odd integers the slope is
    infinite and the curvature zero.
    """
    x = float(x)
    y = math.fmod(x, 4.0)
    if y < 0.0:
        y += 4.0
    slope_sign = 1.0
    if y > 2.0:
        y = 4.0 - y
        slope_sign = -1.0
    value_sign = 1.0
    if y > 1.0:
        y = 2.0 - y
        value_sign = -1.0
        slope_sign = -slope_sign
    u, slope, kappa = _quarter_graph(y)
    return GraphPoint(x, value_sign * u, slope_sign * slope, value_sign * kappa)


def canonical_U(x: float) -> float:
    return canonical_graph_point(x).u


def U_star(x: float) -> float:
    """``U(x + 1)`` on ``[0, 1]``: increasing, concave, from 0 to h*."""
    return canonical_U(x + 1.0)


# -- canonical branch gamma* ---------------------------------------------------

@dataclass(frozen=True)
class BranchSample:
    sigma: np.ndarray
    position: np.ndarray
    tangent: np.ndarray
    kappa: np.ndarray
    kappa_s: np.ndarray
    kappa_ss: np.ndarray
    omega: np.ndarray


def branch_evaluate(sigma) -> BranchSample:
    """Closed-form geometry of ``gamma*`` at arclength(s) ``sigma`` in [0, L*]."""
    sig = np.atleast_1d(np.asarray(sigma, dtype=float))
    if np.any(sig < -1e-12) or np.any(sig > L_STAR + 1e-12):
        raise DomainError("branch arclength outside [0, L*]")
    sig = np.clip(sig, 0.0, L_STAR)
    lam = CANONICAL_LAMBDA
    sn, cn, dn = jacobi_arrays(lam * sig, ELASTICA_MODULUS)
    amp = np.arctan2(cn, _KP * sn)  # amplitude at K - u
    x = primitive_between_amplitudes(amp, np.full_like(amp, 0.5 * math.pi)) / lam
    y = H_STAR * _KP * sn / dn
    pos = np.stack([x, y], axis=1)
    d2 = dn * dn
    tan = np.stack([0.5 * sn * sn / d2, cn / d2], axis=1)
    kappa = -C_STAR * _KP * sn / dn
    kappa_s = -C_STAR * _KP * lam * cn / d2
    kappa_ss = C_STAR * _KP * lam**2 * sn * (d2 - cn * cn) / (d2 * dn)
    cross = x * tan[:, 1] - y * tan[:, 0]
    dot = x * tan[:, 0] + y * tan[:, 1]
    omega = np.where(sig > 0.0, np.arctan2(cross, dot), 0.0)
    return BranchSample(sig, pos, tan, kappa, kappa_s, kappa_ss, omega)


def branch_point(sigma: float):
    """Scalar fast path: ``(x, y, Tx, Ty, kappa)`` of ``gamma*`` at ``sigma``."""
    lam = CANONICAL_LAMBDA
    sn, cn, dn = _kernels.jacobi(lam * sigma, ELASTICA_MODULUS)
    amp = math.atan2(cn, _KP * sn)
    x = _kernels.primitive_amp(amp, 0.5 * math.pi) / lam
    y = H_STAR * _KP * sn / dn
    d2 = dn * dn
    return x, y, 0.5 * sn * sn / d2, cn / d2, -C_STAR * _KP * sn / dn


def branch_omega(sigma: float) -> float:
    if sigma <= 0.0:
        return 0.0
    x, y, tx, ty, _ = branch_point(sigma)
    return math.atan2(x * ty - y * tx, x * tx + y * ty)


@dataclass(frozen=True, eq=False)
class CanonicalBranch:
    curve: ArclengthCurve
    L_star: float
    omega_star: AngleTrace
    lam: float = CANONICAL_LAMBDA

    def evaluate(self, sigma) -> BranchSample:
        return branch_evaluate(sigma)

    def omega(self, sigma: float) -> float:
        return branch_omega(sigma)

    def point(self, sigma: float):
        return branch_point(sigma)


@functools.lru_cache(maxsize=8)
def canonical_branch(n_samples: int = 2048) -> CanonicalBranch:
    if n_samples < 64:
        raise DomainError("canonical branch needs at least 64 samples")
    sigma = np.linspace(0.0, L_STAR, n_samples)
    b = branch_evaluate(sigma)
    curve = ArclengthCurve(sigma, b.position, b.tangent, b.kappa)
    trace = polar_tangential_angle(curve)
    if not np.all(np.diff(trace.omega) < 0.0):
        raise InconsistencyError("omega* is not strictly decreasing on the canonical branch")
    return CanonicalBranch(curve=curve, L_star=L_STAR, omega_star=trace)

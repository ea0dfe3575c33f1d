"""Elliptic integrals, Jacobi elliptic functions and the critical constants.

All routines dispatch to the compiled core when available. Jacobi functions
are obtained by inverting the amplitude integral ``x = F(phi, k)`` with a
bracketed Newton iteration after reducing ``x`` modulo the quarter period.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DivergenceError, DomainError, InputError

SQRT2 = math.sqrt(2.0)
ELASTICA_MODULUS = 1.0 / SQRT2


@dataclass(frozen=True)
class EllipticModulus:
    k: float

    def __post_init__(self):
        if not (0.0 <= self.k <= 1.0):
            raise DomainError(f"elliptic modulus must lie in [0, 1], got {self.k!r}")

    @property
    def complementary(self) -> float:
        return math.sqrt((1.0 - self.k) * (1.0 + self.k))


@dataclass(frozen=True)
class JacobiTriple:
    sn: float
    cn: float
    dn: float


@dataclass(frozen=True)
class PaperConstants:
    """The critical constants of the cone-obstacle problem.

    ``c_star`` is the integral of sqrt(cos) over [0, pi/2],
    ``h_star = 2 / c_star`` the critical apex height and
    ``theta_star = arctan(h_star)``.
    """

    c_star: float
    h_star: float
    theta_star: float
    K_half_sqrt2: float

    def as_dict(self) -> dict:
        return {
            "c_star": self.c_star,
            "h_star": self.h_star,
            "theta_star": self.theta_star,
            "K_half_sqrt2": self.K_half_sqrt2,
        }


def _k(k) -> float:
    if isinstance(k, EllipticModulus):
        return k.k
    return EllipticModulus(float(k)).k


def complete_K(k) -> float:
    """Complete elliptic integral of the first kind, ``0 <= k < 1``."""
    k = _k(k)
    if k == 1.0:
        raise DivergenceError("K(k) diverges at k = 1")
    return _kernels.agm_K(k)


def incomplete_F(phi: float, k) -> float:
    """Legendre incomplete integral F(phi, k) for ``0 <= phi <= pi/2``."""
    return _kernels.ellip_f(phi, _k(k))


def incomplete_E(phi: float, k) -> float:
    """Legendre incomplete integral E(phi, k) for ``0 <= phi <= pi/2``."""
    return _kernels.ellip_e(phi, _k(k))


def jacobi(x: float, k) -> JacobiTriple:
    x = float(x)
    if not math.isfinite(x):
        raise InputError("Jacobi functions need a finite argument")
    sn, cn, dn = _kernels.jacobi(x, _k(k))
    return JacobiTriple(sn, cn, dn)


def jacobi_arrays(x, k):
    """Vectorised ``(sn, cn, dn)`` as three arrays shaped like ``x``."""
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise InputError("Jacobi functions need finite arguments")
    return _kernels.jacobi_array(x, _k(k))


def incomplete_F_primitive(r: float) -> float:
    r"""F(r) = \int_0^r sqrt(1 - t^2) / sqrt(1 - t^2/2) dt for ``|r| <= 1``.

    Evaluated by adaptive Simpson after the substitution t = sin v, which
    removes the square-root endpoint singularity at ``r = 1``.
    """
    r = float(r)
    if not (-1.0 <= r <= 1.0):
        raise DomainError(f"F is defined on [-1, 1], got {r!r}")
    if r < 0.0:
        return -_kernels.primitive_amp(0.0, math.asin(-r))
    return _kernels.primitive_amp(0.0, math.asin(r))


def primitive_between_amplitudes(a, b):
    """F(sin b) - F(sin a) for amplitudes in [0, pi/2]; vectorised."""
    if np.ndim(a) == 0 and np.ndim(b) == 0:
        return _kernels.primitive_amp(float(a), float(b))
    return _kernels.primitive_amp_array(a, b)


@functools.lru_cache(maxsize=None)
def paper_constants() -> PaperConstants:
    c_star = _kernels.c_star_integral()
    h_star = 2.0 / c_star
    return PaperConstants(
        c_star=c_star,
        h_star=h_star,
        theta_star=math.atan(h_star),
        K_half_sqrt2=complete_K(ELASTICA_MODULUS),
    )

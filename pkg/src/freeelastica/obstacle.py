"""Symmetric cone-obstacle problem for the graph bending energy.

For a cone with apex height ``h`` the symmetric minimiser on ``[-1, 1]``
exists (and is unique) iff ``h < h*``. Its left half, shifted by ``x -> x+1``,
is a similar copy ``lam R_phi gamma*([0, s])`` of the canonical branch, where
``s`` solves ``tan(-omega*(s)) = h``. Rotating by ``phi`` makes the tangent at
``s`` horizontal; scaling by ``lam`` moves ``gamma*(s)`` to ``(1, h)``.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .elastica import (
    C_STAR,
    CANONICAL_LAMBDA,
    ELASTICA_MODULUS,
    H_STAR,
    CanonicalBranch,
    branch_evaluate,
    branch_omega,
    branch_point,
    canonical_branch,
)
from .elliptic import jacobi
from .errors import AssemblyError, DomainError, InconsistencyError, InputError
from .quadrature import adaptive_simpson, composite_simpson

BOUNDARY_TOL = 1e-12
ROOT_XTOL = 1e-13


@dataclass(frozen=True)
class ObstacleProblem:
    h: float
    psi_boundary: float = -1.0

    def __post_init__(self):
        if not (math.isfinite(self.h) and self.h > 0.0):
            raise DomainError(f"cone height must be positive, got {self.h!r}")
        if not self.psi_boundary < 0.0:
            raise DomainError("the cone must satisfy psi(+-1) < 0")

    def psi(self, x):
        return self.h + (self.psi_boundary - self.h) * np.abs(x)


@dataclass(frozen=True, eq=False)
class GraphSamples:
    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    d2u: np.ndarray


class Classification(enum.Enum):
    UNIQUE_SYMMETRIC = "unique_symmetric"
    NO_MINIMIZER = "no_minimizer"


@dataclass(frozen=True, eq=False)
class SymmetricSolution:
    problem: ObstacleProblem
    samples: GraphSamples
    s_root: float
    lam: float
    phi: float
    energy: float
    residuals: dict
    sigma: np.ndarray = field(repr=False)
    energy_graph: float = math.nan

    @property
    def h(self) -> float:
        return self.problem.h

    def evaluate(self, x):
        """``(u, u', u'')`` of the minimiser at arbitrary points of [-1, 1]."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        xi = 1.0 - np.abs(x)
        sig = np.array([_invert_abscissa(v, self.lam, self.phi, self.s_root) for v in xi])
        u, du, d2u = _graph_from_sigma(sig, self.lam, self.phi)
        du = np.where(x > 0.0, -du, du)
        return u, du, d2u


@dataclass(frozen=True, eq=False)
class ExistenceVerdict:
    classification: Classification
    h: float
    h_star: float
    margin: float
    solution: SymmetricSolution | None = None


def reduced_equation_value(s: float, branch: CanonicalBranch | None = None) -> float:
    """``tan(-omega*(s))`` for ``0 < s < L*``."""
    L = (branch or canonical_branch()).L_star
    if not (0.0 < s < L):
        raise DomainError("reduced equation is posed on the open interval (0, L*)")
    return math.tan(-branch_omega(s))


def solve_reduced(h: float, branch: CanonicalBranch | None = None) -> float | None:
    """Unique root of ``tan(-omega*(s)) = h`` in (0, L*), or None when h >= h*."""
    if not h > 0.0:
        raise DomainError("h must be positive")
    if h >= H_STAR - BOUNDARY_TOL:
        return None
    branch = branch or canonical_branch()
    trace = branch.omega_star
    values = np.tan(-trace.omega)
    j = int(np.searchsorted(values, h))
    lo = 0.0 if j == 0 else float(trace.s[j - 1])
    hi = branch.L_star if j >= len(values) else float(trace.s[j])
    f = lambda s: math.tan(-branch_omega(s)) - h
    if f(lo) > 0.0 or f(hi) < 0.0:
        lo, hi = 0.0, branch.L_star
    return brentq(f, lo, hi, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps, maxiter=200)


def recover_similarity(s_root: float, h: float, branch: CanonicalBranch | None = None):
    """Rotation ``phi`` and dilation ``lam`` carrying the branch point to (1, h)."""
    x, y, tx, ty, _ = branch_point(s_root)
    phi = -math.atan2(ty, tx)
    lam = math.hypot(1.0, h) / math.hypot(x, y)
    c, s = math.cos(phi), math.sin(phi)
    px = lam * (c * x - s * y)
    py = lam * (s * x + c * y)
    tang = s * tx + c * ty
    residual = max(abs(px - 1.0), abs(py - h), abs(tang))
    if residual > 1e-6:
        raise InconsistencyError(f"similarity residual {residual:.3e}: bad root for h={h}")
    if not (-0.5 * math.pi < phi < 0.0):
        raise InconsistencyError(f"rotation angle {phi} outside (-pi/2, 0)")
    return lam, phi


def similarity_residual(s_root, h, lam, phi) -> float:
    x, y, _, _, _ = branch_point(s_root)
    c, s = math.cos(phi), math.sin(phi)
    return max(abs(lam * (c * x - s * y) - 1.0), abs(lam * (s * x + c * y) - h))


def _abscissa(sigma, lam, phi):
    x, y, tx, ty, _ = branch_point(sigma)
    c, s = math.cos(phi), math.sin(phi)
    return lam * (c * x - s * y)


def _invert_abscissa(xi, lam, phi, s_root):
    if xi <= 0.0:
        return 0.0
    if xi >= 1.0:
        return s_root
    return brentq(lambda sg: _abscissa(sg, lam, phi) - xi, 0.0, s_root,
                  xtol=1e-14, rtol=4 * np.finfo(float).eps, maxiter=200)


def _graph_from_sigma(sig, lam, phi):
    """Height, slope and second derivative of the left half at branch arclengths."""
    b = branch_evaluate(sig)
    c, s = math.cos(phi), math.sin(phi)
    y = lam * (s * b.position[:, 0] + c * b.position[:, 1])
    tx = c * b.tangent[:, 0] - s * b.tangent[:, 1]
    ty = s * b.tangent[:, 0] + c * b.tangent[:, 1]
    du = ty / tx
    d2u = (b.kappa / lam) * (1.0 + du * du) ** 1.5
    return y, du, d2u


def bending_energy(samples: GraphSamples) -> float:
    """Composite Simpson value of ``int u''^2 (1 + u'^2)^(-5/2) dx``."""
    x = np.asarray(samples.x, dtype=float)
    du = np.asarray(samples.du, dtype=float)
    d2u = np.asarray(samples.d2u, dtype=float)
    if not (np.all(np.isfinite(du)) and np.all(np.isfinite(d2u))):
        raise InputError("non-finite derivative samples")
    dx = np.diff(x)
    if not np.allclose(dx, dx[0], rtol=1e-9, atol=1e-14):
        raise InputError("bending_energy expects a uniform grid")
    f = d2u * d2u * (1.0 + du * du) ** -2.5
    value = composite_simpson(f, float(dx[0]))
    n = len(x)
    if (n - 1) % 4 == 0:
        coarse = composite_simpson(f[::2], 2.0 * float(dx[0]))
        est = abs(value - coarse) / 15.0
        if value > 0.0 and est > 1e-6 * value:
            warnings.warn(f"Simpson error estimate {est / value:.1e} exceeds 1e-6 relative",
                          RuntimeWarning, stacklevel=2)
    return value


def arclength_energy(solution: SymmetricSolution) -> float:
    """``int kappa^2 ds`` along the solution, from the branch curvature.

    Dilation by ``lam`` sends ``kappa^2 ds`` to ``kappa^2 ds / lam``, and the
    two symmetric halves contribute equally.
    """
    k = ELASTICA_MODULUS

    def kappa_sq(sigma):
        t = jacobi(CANONICAL_LAMBDA * sigma, k)
        kap = C_STAR * k * t.sn / t.dn
        return kap * kap

    return 2.0 / solution.lam * adaptive_simpson(kappa_sq, 0.0, solution.s_root)


def _ode_residual(sig, lam):
    b = branch_evaluate(sig)
    return np.abs(2.0 * b.kappa_ss + b.kappa**3) / lam**3


def assemble_solution(h: float, n_grid: int = 1001, psi_boundary: float = -1.0,
                      branch: CanonicalBranch | None = None) -> ExistenceVerdict:
    """Classify the cone problem and, for ``h < h*``, build the minimiser.

    The half-graph on [-1, 0] is the similar copy of the branch up to the
    root; it is sampled on a uniform grid by inverting the abscissa along the
    branch arclength and reflected evenly to [0, 1].
    """
    problem = ObstacleProblem(h, psi_boundary)
    margin = H_STAR - h
    branch = branch or canonical_branch()
    s_root = solve_reduced(h, branch)
    if s_root is None:
        return ExistenceVerdict(Classification.NO_MINIMIZER, h, H_STAR, margin)
    if n_grid < 5 or n_grid % 2 == 0:
        raise DomainError("the output grid needs an odd number (>= 5) of points")
    lam, phi = recover_similarity(s_root, h, branch)

    m = (n_grid - 1) // 2
    x = np.linspace(-1.0, 1.0, n_grid)
    xi = x[: m + 1] + 1.0  # abscissa of the left half in the shifted frame
    xi[-1] = 1.0
    sig = np.array([_invert_abscissa(v, lam, phi, s_root) for v in xi])
    u_l, du_l, d2u_l = _graph_from_sigma(sig, lam, phi)

    u = np.concatenate([u_l, u_l[-2::-1]])
    du = np.concatenate([du_l, -du_l[-2::-1]])
    d2u = np.concatenate([d2u_l, d2u_l[-2::-1]])
    samples = GraphSamples(x, u, du, d2u)

    interior = (sig > 0.0) & (sig < s_root)
    residuals = {
        "u_bc": float(max(abs(u[0]), abs(u[-1]))),
        "u2_bc": float(max(abs(d2u[0]), abs(d2u[-1]))),
        "apex": float(abs(u[m] - h)),
        "ode": float(np.max(_ode_residual(sig[interior], lam))) if interior.any() else 0.0,
    }
    gap = u - problem.psi(x)
    checks = [
        ("u(+-1) = 0", residuals["u_bc"] <= 1e-8),
        ("u''(+-1) = 0", residuals["u2_bc"] <= 1e-6),
        ("u(0) = h", residuals["apex"] <= 1e-8),
        ("u'(0) = 0", abs(du[m]) <= 1e-6),
        ("u even", float(np.max(np.abs(u - u[::-1]))) <= 1e-10),
        ("u concave", float(np.max(d2u)) <= 1e-8),
        ("u >= psi, touching only at the apex",
         bool(np.all(np.delete(gap, m) > 0.0)) and abs(gap[m]) <= 1e-8),
        ("2 kappa_ss + kappa^3 = 0", residuals["ode"] < 1e-6),
    ]
    for name, ok in checks:
        if not ok:
            raise AssemblyError(f"solution for h={h} violates invariant: {name}")

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        energy_graph = bending_energy(samples)
    solution = SymmetricSolution(problem, samples, s_root, lam, phi, math.nan, residuals, sig,
                                 energy_graph)
    # Near h* the boundary slope blows up and the x-grid Simpson value degrades;
    # the arclength form stays accurate, so it is the reported energy.
    energy = arclength_energy(solution)
    if abs(energy_graph - energy) > 1e-3 * energy:
        raise AssemblyError(f"graph and arclength energies disagree for h={h}")
    solution = SymmetricSolution(problem, samples, s_root, lam, phi, energy, residuals, sig,
                                 energy_graph)
    return ExistenceVerdict(Classification.UNIQUE_SYMMETRIC, h, H_STAR, margin, solution)

"""Sampled arclength plane curves and their differential invariants.

A curve is stored node-wise: arclength ``s``, position, unit tangent and
signed curvature (``gamma_ss = kappa N`` with ``N`` the tangent rotated
counterclockwise by pi/2). Nodes carry analytic tangent/curvature data
whenever the producer has it; ``source`` records where the data came from.

The polar tangential angle ``omega`` is the continuous angle carrying the
normalised position ``X = gamma / |gamma|`` onto ``T``. Its derivative is
evaluated from the closed form ``omega_s = (gamma . (kappa gamma + N)) / |gamma|^2``
rather than by differencing.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CurveError,
    GenericityError,
    InconsistencyError,
    InputError,
    PreconditionError,
    UndefinedDiskError,
)

ORIGIN_TOL = 1e-12
ZERO_CURVATURE = 1e-12
SIGN_BAND = 1e-10
NESTING_MARGIN = 1e-10


def _rot90(v):
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


def _cross(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _dot(a, b):
    return a[..., 0] * b[..., 0] + a[..., 1] * b[..., 1]


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class ArclengthCurve:
    """Plane curve sampled at arclength nodes.

    ``position`` and ``tangent`` are ``(n, 2)`` arrays; ``s`` and
    ``curvature`` are length ``n``. Instances are immutable.
    """

    s: np.ndarray
    position: np.ndarray
    tangent: np.ndarray
    curvature: np.ndarray
    source: str = "analytic"

    def __post_init__(self):
        for name in ("s", "position", "tangent", "curvature"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))
        n = self.s.shape[0]
        if self.position.shape != (n, 2) or self.tangent.shape != (n, 2) or self.curvature.shape != (n,):
            raise CurveError("inconsistent node array shapes")
        if n < 2:
            raise CurveError("a curve needs at least two nodes")
        for name in ("s", "position", "tangent", "curvature"):
            if not np.all(np.isfinite(getattr(self, name))):
                raise CurveError(f"non-finite {name} data")
        self.validate()

    def validate(self):
        ds = np.diff(self.s)
        if np.any(ds <= 0.0):
            raise CurveError("arclength nodes must be strictly increasing")
        tnorm = np.hypot(self.tangent[:, 0], self.tangent[:, 1])
        bad = np.flatnonzero(np.abs(tnorm - 1.0) > 1e-10)
        if bad.size:
            raise CurveError(f"tangent is not unit length at node {bad[0]}")
        chord = np.hypot(*np.diff(self.position, axis=0).T)
        kmax = float(np.max(np.abs(self.curvature)))
        slack = 0.5 * kmax * ds**2 + 1e-9
        bad = np.flatnonzero(np.abs(chord - ds) > slack)
        if bad.size:
            i = bad[0]
            raise CurveError(
                f"chord {chord[i]:.3e} between nodes {i},{i + 1} is inconsistent with ds {ds[i]:.3e}"
            )

    def __len__(self):
        return self.s.shape[0]

    @property
    def normal(self) -> np.ndarray:
        return _rot90(self.tangent)

    @property
    def length(self) -> float:
        return float(self.s[-1] - self.s[0])

    @property
    def starts_at_origin(self) -> bool:
        return bool(np.hypot(*self.position[0]) < ORIGIN_TOL)

    @property
    def genericity_flag(self) -> bool:
        """True when no node after the first lies at the origin."""
        r = np.hypot(self.position[1:, 0], self.position[1:, 1])
        return bool(np.all(r >= ORIGIN_TOL))

    def translated(self, offset) -> "ArclengthCurve":
        return ArclengthCurve(self.s, self.position + np.asarray(offset, dtype=float),
                              self.tangent, self.curvature, self.source)

    def scaled(self, factor: float) -> "ArclengthCurve":
        """Dilation about the origin; arclength scales, curvature inversely."""
        return ArclengthCurve(self.s * factor, self.position * factor, self.tangent,
                              self.curvature / factor, self.source)

    def subsample(self, indices) -> "ArclengthCurve":
        idx = np.asarray(indices)
        return ArclengthCurve(self.s[idx], self.position[idx], self.tangent[idx],
                              self.curvature[idx], self.source)


def _sample_function(func, points):
    try:
        vals = np.asarray(func(points), dtype=float)
        if vals.shape != points.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([float(func(float(p))) for p in points])
    return vals


def from_curvature(kappa, length, initial_position=(0.0, 0.0), initial_tangent=(1.0, 0.0),
                   n_samples=2048, s0=0.0) -> ArclengthCurve:
    """Reconstruct a curve from its curvature by classical RK4.

    Integrates ``theta_s = kappa``, ``gamma_s = (cos theta, sin theta)`` at the
    uniform step ``length / (n_samples - 1)``. ``kappa`` may be vectorised;
    scalar callables are evaluated point by point. Node curvatures are the
    exact ``kappa`` values, node tangents the integrated angle.
    """
    if not length > 0.0:
        raise InputError("curve length must be positive")
    if n_samples < 16:
        raise InputError("need at least 16 samples")
    t0 = np.asarray(initial_tangent, dtype=float)
    if abs(np.hypot(*t0) - 1.0) > 1e-12:
        raise InputError("initial tangent must be a unit vector")
    h = length / (n_samples - 1)
    grid = s0 + np.linspace(0.0, length, 2 * n_samples - 1)
    kv = _sample_function(kappa, grid)
    if not np.all(np.isfinite(kv)):
        raise InputError("curvature function returned a non-finite value")
    k_node = kv[::2]
    k_mid = kv[1::2]
    # theta_s depends on s only, so the RK4 stages for theta reduce to Simpson.
    theta0 = math.atan2(t0[1], t0[0])
    dtheta = h / 6.0 * (k_node[:-1] + 4.0 * k_mid + k_node[1:])
    theta = theta0 + np.concatenate([[0.0], np.cumsum(dtheta)])
    th = theta[:-1]
    a1 = th
    a2 = th + 0.5 * h * k_node[:-1]
    a3 = th + 0.5 * h * k_mid
    a4 = th + h * k_mid
    dx = h / 6.0 * (np.cos(a1) + 2.0 * np.cos(a2) + 2.0 * np.cos(a3) + np.cos(a4))
    dy = h / 6.0 * (np.sin(a1) + 2.0 * np.sin(a2) + 2.0 * np.sin(a3) + np.sin(a4))
    p0 = np.asarray(initial_position, dtype=float)
    pos = np.empty((n_samples, 2))
    pos[:, 0] = p0[0] + np.concatenate([[0.0], np.cumsum(dx)])
    pos[:, 1] = p0[1] + np.concatenate([[0.0], np.cumsum(dy)])
    tangent = np.stack([np.cos(theta), np.sin(theta)], axis=1)
    return ArclengthCurve(grid[::2], pos, tangent, k_node, source="integrated")


def be_vectors(curve: ArclengthCurve) -> np.ndarray:
    """``kappa * gamma + N`` at every node (defined also where kappa = 0)."""
    return curve.curvature[:, None] * curve.position + curve.normal


def be_vector(curve: ArclengthCurve, i: int) -> np.ndarray:
    return curve.curvature[i] * curve.position[i] + _rot90(curve.tangent[i])


def omega_s_formula(curve: ArclengthCurve) -> np.ndarray:
    """``gamma . (kappa gamma + N) / |gamma|^2`` node-wise (nan at the origin)."""
    r2 = _dot(curve.position, curve.position)
    with np.errstate(divide="ignore", invalid="ignore"):
        return _dot(curve.position, be_vectors(curve)) / r2


@dataclass(frozen=True, eq=False)
class AngleTrace:
    """Unwrapped polar tangential angle along a curve.

    ``start`` is the first curve node represented (1 when the curve starts at
    the origin, where the angle is undefined).
    """

    s: np.ndarray
    omega: np.ndarray
    omega_s: np.ndarray
    position: np.ndarray
    kappa: np.ndarray
    start: int = 0

    def __len__(self):
        return self.s.shape[0]

    def geometric_angle(self) -> np.ndarray:
        """``arccos(X . T)``, the unsigned angle the trace must match mod sign/2pi."""
        return np.abs(np.angle(np.exp(1j * self.omega)))


def polar_tangential_angle(curve: ArclengthCurve) -> AngleTrace:
    r = np.hypot(curve.position[:, 0], curve.position[:, 1])
    near = np.flatnonzero(r[1:] < ORIGIN_TOL)
    if near.size:
        raise GenericityError(f"curve passes through the origin at node {near[0] + 1}")
    start = 1 if r[0] < ORIGIN_TOL else 0
    pos = curve.position[start:]
    tan = curve.tangent[start:]
    X = pos / r[start:, None]
    raw = np.arctan2(_cross(X, tan), _dot(X, tan))
    omega = np.unwrap(raw)
    if omega[0] <= -math.pi:
        omega = omega + 2.0 * math.pi
    omega_s = omega_s_formula(curve)[start:]
    return AngleTrace(
        s=_frozen(curve.s[start:]),
        omega=_frozen(omega),
        omega_s=_frozen(omega_s),
        position=_frozen(pos),
        kappa=_frozen(curve.curvature[start:]),
        start=start,
    )


@dataclass(frozen=True)
class OsculatingDisk:
    center: tuple
    radius: float

    def contains(self, point, strict=True) -> bool:
        d = math.hypot(point[0] - self.center[0], point[1] - self.center[1])
        return d < self.radius if strict else d <= self.radius


def osculating_disk(curve: ArclengthCurve, i: int) -> OsculatingDisk:
    k = float(curve.curvature[i])
    if abs(k) < ZERO_CURVATURE:
        raise UndefinedDiskError(f"curvature vanishes at node {i}")
    c = curve.position[i] + _rot90(curve.tangent[i]) / k
    return OsculatingDisk(center=(float(c[0]), float(c[1])), radius=1.0 / abs(k))


def evolute(curve: ArclengthCurve) -> np.ndarray:
    """Osculating-circle centres; nan rows where the curvature vanishes."""
    k = curve.curvature
    with np.errstate(divide="ignore", invalid="ignore"):
        e = curve.position + curve.normal / k[:, None]
    e[np.abs(k) < ZERO_CURVATURE] = np.nan
    return e


@dataclass(frozen=True)
class TaitKneserReport:
    nested: bool
    pairs_checked: int
    min_margin: float
    violation: tuple | None = None
    excluded: tuple = field(default_factory=tuple)


def tait_kneser_check(curve: ArclengthCurve, margin=NESTING_MARGIN, min_gap=2) -> TaitKneserReport:
    """Check that osculating disks of a monotone-curvature curve are nested.

    Nodes with vanishing curvature (no disk) are skipped. For every pair of
    remaining nodes at index distance >= ``min_gap`` the smaller closed disk
    must lie in the larger open one with
    ``r_big - r_small - |c_i - c_j| > margin``.

    Raises PreconditionError when the curvature is not strictly monotone or
    changes sign over the used nodes.
    """
    k = curve.curvature
    keep = np.flatnonzero(np.abs(k) >= ZERO_CURVATURE)
    excluded = tuple(int(i) for i in np.flatnonzero(np.abs(k) < ZERO_CURVATURE))
    if keep.size < 2:
        raise PreconditionError("fewer than two nodes with nonzero curvature")
    kk = k[keep]
    if not (np.all(kk > 0) or np.all(kk < 0)):
        bad = keep[np.flatnonzero(np.sign(kk) != np.sign(kk[0]))[0]]
        raise PreconditionError(f"curvature changes sign at node {bad}")
    dk = np.diff(kk)
    direction = np.sign(dk[0])
    bad = np.flatnonzero(np.sign(dk) != direction) if direction != 0 else np.array([0])
    if bad.size:
        node = int(keep[bad[0] + 1])
        raise PreconditionError(f"curvature is not strictly monotone at node {node}")

    centers = curve.position[keep] + curve.normal[keep] / kk[:, None]
    radii = 1.0 / np.abs(kk)
    m = keep.size
    worst = math.inf
    pairs = 0
    for a in range(m):
        b = np.arange(a + 1, m)
        b = b[keep[b] - keep[a] >= min_gap]
        if b.size == 0:
            continue
        dist = np.hypot(centers[b, 0] - centers[a, 0], centers[b, 1] - centers[a, 1])
        marg = np.abs(radii[a] - radii[b]) - dist
        pairs += b.size
        j = int(np.argmin(marg))
        worst = min(worst, float(marg[j]))
        fails = np.flatnonzero(marg <= margin)
        if fails.size:
            jj = int(b[fails[0]])
            return TaitKneserReport(False, pairs, worst, (int(keep[a]), int(keep[jj])), excluded)
    return TaitKneserReport(True, pairs, worst, None, excluded)


class SignClass(enum.Enum):
    POSITIVE = "positive_omega_s"
    NEGATIVE = "negative_omega_s"
    TANGENTIAL = "tangential"

    @property
    def sign(self) -> int:
        return {"positive_omega_s": 1, "negative_omega_s": -1, "tangential": 0}[self.value]


def hat_circle(curve: ArclengthCurve, i: int):
    """Circle whose diameter joins ``gamma(s_i)`` and the evolute point."""
    e = osculating_disk(curve, i).center
    g = curve.position[i]
    center = (0.5 * (g[0] + e[0]), 0.5 * (g[1] + e[1]))
    radius = 0.5 * math.hypot(g[0] - e[0], g[1] - e[1])
    return center, radius


def geometric_sign_value(curve: ArclengthCurve, i: int) -> float:
    """``gamma . N`` where kappa = 0, else ``gamma . e``."""
    g = curve.position[i]
    n = _rot90(curve.tangent[i])
    k = float(curve.curvature[i])
    if abs(k) < ZERO_CURVATURE:
        return float(g @ n)
    e = g + n / k
    return float(g @ e)


def sign_classification(curve: ArclengthCurve, i: int) -> SignClass:
    """Sign of omega_s at node ``i`` from the position of the origin.

    Where kappa vanishes the sign is that of ``gamma . N`` (the side of the
    ray through gamma the curve crosses to); elsewhere ``kappa omega_s`` has
    the sign of ``gamma . e``, positive exactly when the origin lies outside
    the circle with diameter ``gamma e``.
    """
    g = curve.position[i]
    r2 = float(g @ g)
    if r2 < ORIGIN_TOL**2:
        raise GenericityError(f"node {i} lies at the origin")
    k = float(curve.curvature[i])
    val = geometric_sign_value(curve, i)
    if abs(val) <= SIGN_BAND:
        cls = SignClass.TANGENTIAL
    else:
        sgn = 1 if val > 0 else -1
        if abs(k) >= ZERO_CURVATURE and k < 0:
            sgn = -sgn
        cls = SignClass.POSITIVE if sgn > 0 else SignClass.NEGATIVE

    formula = float(g @ be_vector(curve, i)) / r2
    if cls is SignClass.TANGENTIAL:
        if abs(formula) > (1.0 + abs(k)) * SIGN_BAND / r2 + 1e-14:
            raise InconsistencyError(
                f"node {i}: geometric test says tangential but omega_s = {formula:.3e}"
            )
    elif np.sign(formula) != cls.sign:
        raise InconsistencyError(f"node {i}: {cls.value} but omega_s = {formula:.3e}")
    return cls

"""Invariant suites over a benchmark set of generic curves and the elastica.

Each suite returns a :class:`SuiteResult` with a scalar metric compared to a
threshold, so the CLI can print a pass/fail table. Results carry no timing
information; two runs with the same seed produce identical records.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import shapes
from .curve import (
    SIGN_BAND,
    ZERO_CURVATURE,
    ArclengthCurve,
    from_curvature,
    SignClass,
    hat_circle,
    omega_s_formula,
    polar_tangential_angle,
    sign_classification,
    tait_kneser_check,
)
from .elastica import (
    K_E,
    THETA_STAR,
    ElasticaParams,
    canonical_branch,
    elastica_curvature_derivatives,
    elastica_curve,
    elastica_position,
)
from .elliptic import ELASTICA_MODULUS, SQRT2, jacobi_arrays
from .errors import InconsistencyError

FD_STEP = 1e-3
FD_FACTOR = 10.0
FD_MIN_RATIO = 3.0
# Below this the finite-difference error is round-off, not truncation, and a
# halving ratio carries no information (e.g. the log spiral, where omega is
# constant).
FD_ROUNDOFF_FLOOR = 1e-9


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    metric: float
    threshold: float
    detail: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "passed": bool(self.passed), "metric": self.metric,
                "threshold": self.threshold, "detail": self.detail}


def _fd_length(length, ds):
    """Largest multiple of ``ds`` not exceeding ``length``."""
    return ds * math.floor(length / ds + 1e-9)


def benchmark_curves(seed: int = 0, ds: float = FD_STEP) -> dict:
    """Ten generic curves sampled at arclength step ``ds``.

    Two ellipse arcs, two logarithmic spirals, three elastica arcs (Frenet
    integrated from their closed-form curvature) and three random quintic
    splines, all kept away from the origin.
    """
    curves = {
        "ellipse_a": shapes.ellipse(2.0, 1.0, center=(4.0, 1.0), ds=ds),
        "ellipse_b": shapes.ellipse(1.5, 1.0, center=(-1.0, 2.5), t0=0.3, t1=4.0, ds=ds),
        "log_spiral_a": shapes.log_spiral(0.2, 0.0, 2.0 * math.pi, ds=ds),
        "log_spiral_b": shapes.log_spiral(-0.35, -1.0, 3.0, ds=ds),
    }
    for name, lam, mu, start, tangent, length in (
        ("elastica_a", 1.0, 0.0, (1.0, 1.0), (1.0, 0.0), 3.0),
        ("elastica_b", 0.7, 0.4, (2.0, -1.0), (0.0, 1.0), 4.0),
        ("elastica_c", 1.3, -0.8, (-1.5, -2.0), (0.6, 0.8), 3.5),
    ):
        L = _fd_length(length, ds)
        n = int(round(L / ds)) + 1
        curves[name] = elastica_curve(ElasticaParams(lam, mu), L, n, start, tangent)
    for j in range(3):
        curves[f"spline_{j}"] = shapes.random_spline(seed + j, ds=ds)
    return curves


def _fd_error(curve: ArclengthCurve) -> float:
    tr = polar_tangential_angle(curve)
    ds = np.diff(tr.s)
    fd = (tr.omega[2:] - tr.omega[:-2]) / (ds[1:] + ds[:-1])
    return float(np.max(np.abs(fd - tr.omega_s[1:-1])))


def derivative_identity_suite(seed: int = 0, ds: float = FD_STEP):
    """Central differences of omega versus the closed-form omega_s."""
    coarse = benchmark_curves(seed, ds)
    fine = benchmark_curves(seed, ds / 2.0)
    results = []
    for name, c in coarse.items():
        e1 = _fd_error(c)
        e2 = _fd_error(fine[name])
        bound = FD_FACTOR * ds * ds
        ratio = e1 / e2 if e2 > 0 else math.inf
        ratio_ok = ratio >= FD_MIN_RATIO or e1 < FD_ROUNDOFF_FLOOR
        results.append(SuiteResult(
            f"derivative_identity[{name}]", e1 < bound and ratio_ok, e1, bound,
            f"halving ratio {ratio:.3g}" + (" (round-off floor)" if e1 < FD_ROUNDOFF_FLOOR else ""),
        ))
    return results


def sign_suite(seed: int = 0, ds: float = FD_STEP, stride: int = 1):
    """Geometric sign tests against the sign of the omega_s formula at every node.

    Also checks the hat-circle reading: ``gamma . e`` is positive exactly when
    the origin lies outside the circle with diameter from ``gamma`` to ``e``.
    """
    results = []
    for name, c in benchmark_curves(seed, ds).items():
        formula = omega_s_formula(c)
        nodes = range(0, len(c), stride)
        mismatches = 0
        hat_mismatch = 0
        counted = 0
        for i in nodes:
            try:
                cls = sign_classification(c, i)
            except InconsistencyError:
                mismatches += 1
                continue
            counted += 1
            if cls is SignClass.TANGENTIAL:
                continue
            if cls.sign != np.sign(formula[i]):
                mismatches += 1
            k = float(c.curvature[i])
            if abs(k) >= ZERO_CURVATURE:
                # origin outside the hat circle <=> gamma . e > 0 <=> kappa omega_s > 0
                centre, radius = hat_circle(c, i)
                dist = math.hypot(centre[0], centre[1])
                geo = 1 if dist > radius + SIGN_BAND else (-1 if dist < radius - SIGN_BAND else 0)
                if geo != 0 and geo != cls.sign * np.sign(k):
                    hat_mismatch += 1
        bad = mismatches + hat_mismatch
        results.append(SuiteResult(f"sign_classification[{name}]", bad == 0, float(bad), 0.0,
                                   f"{counted} nodes"))
    return results


def tait_kneser_suite(n_samples: int = 200):
    branch = canonical_branch(max(n_samples, 64))
    c = branch.curve
    if len(c) != n_samples:
        c = c.subsample(np.linspace(0, len(c) - 1, n_samples).round().astype(int))
    rep = tait_kneser_check(c)
    spiral = shapes.archimedean_spiral(1.0, 1.0, 6.0, n_samples=n_samples)
    rep2 = tait_kneser_check(spiral)
    return [
        SuiteResult("tait_kneser[canonical_branch]", rep.nested, float(rep.min_margin), 0.0,
                    f"{rep.pairs_checked} pairs"),
        SuiteResult("tait_kneser[archimedean_spiral]", rep2.nested, float(rep2.min_margin), 0.0,
                    f"{rep2.pairs_checked} pairs"),
    ]


def omega_star_suite(n_samples: int = 2048):
    tr = canonical_branch(n_samples).omega_star
    steps = np.diff(tr.omega)
    monotone = bool(np.all(steps < 0.0))
    end_gap = max(abs(tr.omega[0]), abs(tr.omega[-1] + THETA_STAR))
    slope_ok = bool(np.all(tr.omega_s[:-1] < 0.0))
    return [
        SuiteResult("omega_star_monotone", monotone, float(np.max(steps)), 0.0,
                    f"{len(tr)} samples"),
        SuiteResult("omega_star_range", end_gap < 1e-4, float(end_gap), 1e-4,
                    "endpoint distance to 0 and -theta*"),
        SuiteResult("omega_star_slope_negative", slope_ok, float(np.max(tr.omega_s[:-1])), 0.0,
                    "closed-form omega_s away from the horizontal end"),
    ]


def closed_form_suite(n_points: int = 100):
    """Closed-form elastica position against Frenet integration of its curvature."""
    n = (n_points - 1) * 20 + 1
    c = from_curvature(lambda s: SQRT2 * jacobi_arrays(s, ELASTICA_MODULUS)[1], K_E,
                       (0.0, 0.0), (1.0, 0.0), n)
    idx = np.arange(0, n, 20)
    err = float(np.max(np.abs(c.position[idx] - elastica_position(c.s[idx]))))
    return [SuiteResult("closed_form_vs_frenet", err < 1e-8, err, 1e-8, f"{n_points} points")]


def ode_residual_suite(seed: int = 0, n_points: int = 100):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for lam, mu in ((1.0, 0.0), (0.6, 0.3), (2.5, -1.1)):
        s = rng.uniform(-10.0, 10.0, n_points)
        k, _, kss = elastica_curvature_derivatives(ElasticaParams(lam, mu), s)
        worst = max(worst, float(np.max(np.abs(2.0 * kss + k**3))))
    return [SuiteResult("elastica_ode_residual", worst < 1e-9, worst, 1e-9,
                        "2 kappa_ss + kappa^3")]


def scale_invariance_suite(lams=(0.5, 2.0, 3.7), length: float = 3.0, n_samples: int = 513):
    base = elastica_curve(ElasticaParams(1.0), length, n_samples)
    worst = 0.0
    for lam in lams:
        c = elastica_curve(ElasticaParams(lam), length / lam, n_samples)
        worst = max(worst, float(np.max(np.abs(lam * c.position - base.position))))
    return [SuiteResult("elastica_scale_invariance", worst < 1e-10, worst, 1e-10,
                        f"lambda in {list(lams)}")]


def jacobi_suite(seed: int = 0, n_points: int = 1000, step: float = 1e-5):
    rng = np.random.default_rng(seed)
    x = rng.uniform(-20.0, 20.0, n_points)
    k = rng.uniform(0.0, 0.99, n_points)
    k[: n_points // 2] = ELASTICA_MODULUS
    alg = 0.0
    der = 0.0
    for kk in np.unique(k):
        sel = k == kk
        sn, cn, dn = jacobi_arrays(x[sel], kk)
        alg = max(alg, float(np.max(np.abs(sn * sn + cn * cn - 1.0))),
                  float(np.max(np.abs(dn * dn + kk * kk * sn * sn - 1.0))))
        sp, cp, dp = jacobi_arrays(x[sel] + step, kk)
        sm, cm, dm = jacobi_arrays(x[sel] - step, kk)
        h2 = 2.0 * step
        der = max(der,
                  float(np.max(np.abs((sp - sm) / h2 - cn * dn))),
                  float(np.max(np.abs((cp - cm) / h2 + sn * dn))),
                  float(np.max(np.abs((dp - dm) / h2 + kk * kk * sn * cn))))
    return [
        SuiteResult("jacobi_algebraic", alg < 1e-10, alg, 1e-10, f"{n_points} points"),
        SuiteResult("jacobi_derivative", der < 1e-6, der, 1e-6, f"central step {step:g}"),
    ]


def run_all(seed: int = 0) -> list:
    results = []
    results += derivative_identity_suite(seed)
    results += sign_suite(seed)
    results += tait_kneser_suite()
    results += omega_star_suite()
    results += closed_form_suite()
    results += ode_residual_suite(seed)
    results += scale_invariance_suite()
    results += jacobi_suite(seed)
    return results


def format_table(results) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'suite'.ljust(width)}  result  {'metric':>12}  {'threshold':>10}  detail"]
    for r in results:
        lines.append(f"{r.name.ljust(width)}  {'PASS' if r.passed else 'FAIL':6}  "
                     f"{r.metric:12.4e}  {r.threshold:10.3e}  {r.detail}")
    return "\n".join(lines)

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from freeelastica import curve as C
from freeelastica import shapes
from freeelastica.elastica import K_E, ElasticaParams, elastica_curve
from freeelastica.elliptic import ELASTICA_MODULUS, SQRT2, jacobi_arrays
from freeelastica.errors import (
    CurveError,
    GenericityError,
    InputError,
    PreconditionError,
    UndefinedDiskError,
)


class TestArclengthCurve:
    def test_rejects_non_unit_tangent(self):
        s = np.linspace(0, 1, 5)
        pos = np.stack([s, 0 * s], axis=1)
        with pytest.raises(CurveError):
            C.ArclengthCurve(s, pos, np.tile([1.0, 1e-3], (5, 1)), np.zeros(5))

    def test_rejects_inconsistent_chords(self):
        s = np.linspace(0, 1, 5)
        pos = np.stack([2 * s, 0 * s], axis=1)
        with pytest.raises(CurveError):
            C.ArclengthCurve(s, pos, np.tile([1.0, 0.0], (5, 1)), np.zeros(5))

    def test_immutable(self):
        c = shapes.line(length=1.0, n_samples=8)
        with pytest.raises(ValueError):
            c.position[0, 0] = 5.0

    def test_genericity_flag(self):
        assert shapes.line((0, 0), (1, 0), 1.0, 8).genericity_flag
        assert not shapes.line((-1, 0), (1, 0), 2.0, 9).genericity_flag


class TestFromCurvature:
    def test_straight_segment(self):
        c = C.from_curvature(lambda s: 0.0 * s, 2.0, n_samples=64)
        assert np.allclose(c.position[-1], (2.0, 0.0), atol=1e-14)

    def test_closed_unit_circle(self):
        c = C.from_curvature(lambda s: 1.0 + 0.0 * s, 2 * math.pi, (0.0, -1.0), (1.0, 0.0), 512)
        assert np.hypot(*(c.position[-1] - c.position[0])) < 1e-8
        assert np.allclose(np.hypot(*c.position.T), 1.0, atol=1e-10)

    def test_quarter_elastica_endpoint(self):
        c = C.from_curvature(lambda s: SQRT2 * jacobi_arrays(s, ELASTICA_MODULUS)[1], K_E,
                             n_samples=2048)
        c_star = 2.0 / 1.66925368334815
        assert np.allclose(c.position[-1], (c_star / SQRT2, SQRT2), atol=1e-10)

    def test_scalar_callable(self):
        c = C.from_curvature(lambda s: math.cos(s), 1.0, n_samples=32)
        assert c.source == "integrated"

    def test_non_finite_curvature(self):
        with pytest.raises(InputError):
            C.from_curvature(lambda s: 1.0 / (s - 0.5) if s != 0.5 else math.inf, 1.0,
                             n_samples=17)

    def test_bad_arguments(self):
        with pytest.raises(InputError):
            C.from_curvature(lambda s: s, -1.0)
        with pytest.raises(InputError):
            C.from_curvature(lambda s: s, 1.0, n_samples=8)


class TestBeVector:
    def test_circle_at_origin_is_zero(self):
        c = shapes.circle(1.0, n_samples=64)
        assert np.max(np.abs(C.be_vectors(c))) < 1e-14

    def test_line_gives_normal(self):
        c = shapes.line((0.5, 0.5), (1.0, 1.0), 1.0, 16)
        assert np.allclose(C.be_vector(c, 3), np.array([-1.0, 1.0]) / SQRT2)

    def test_ellipse_vertex(self):
        c = shapes.ellipse(2.0, 1.0, n_samples=401)
        assert np.allclose(c.position[0], (2.0, 0.0), atol=1e-12)
        assert np.allclose(C.be_vector(c, 0), (3.0, 0.0), atol=1e-10)


class TestPolarTangentialAngle:
    def test_centred_circle(self):
        tr = C.polar_tangential_angle(shapes.circle(2.5, n_samples=128))
        assert np.allclose(tr.omega, math.pi / 2, atol=1e-12)
        assert np.allclose(tr.omega_s, 0.0, atol=1e-14)

    def test_log_spiral_constant(self):
        tr = C.polar_tangential_angle(shapes.log_spiral(0.3, 0.0, 4 * math.pi, n_samples=800))
        assert np.ptp(tr.omega) < 1e-8
        assert tr.omega[0] == pytest.approx(math.atan2(1.0, 0.3), abs=1e-8)

    def test_origin_start_with_kappa_kappas_positive(self):
        # kappa = s on [0, 2] from the origin: kappa kappa_s > 0, hence kappa omega_s > 0.
        c = C.from_curvature(lambda s: s, 2.0, n_samples=400)
        tr = C.polar_tangential_angle(c)
        assert tr.start == 1
        assert np.all(tr.kappa[:-1] * tr.omega_s[:-1] > 0)

    def test_genericity_error(self):
        c = shapes.line((-1.0, 0.0), (1.0, 0.0), 2.0, 9)
        with pytest.raises(GenericityError):
            C.polar_tangential_angle(c)

    def test_continuity_and_geometric_angle(self):
        c = shapes.ellipse(2.0, 1.0, center=(0.3, 0.2), n_samples=2000)
        tr = C.polar_tangential_angle(c)
        assert np.all(np.abs(np.diff(tr.omega)) < math.pi)
        X = tr.position / np.hypot(*tr.position.T)[:, None]
        T = c.tangent[tr.start:]
        unsigned = np.arccos(np.clip(np.sum(X * T, axis=1), -1, 1))
        assert np.allclose(tr.geometric_angle(), unsigned, atol=1e-7)

    def test_first_value_branch(self):
        c = shapes.circle(1.0, center=(3.0, 0.0), n_samples=300)
        tr = C.polar_tangential_angle(c)
        assert -math.pi < tr.omega[0] <= math.pi

    def test_unwrapping_idempotent_under_refinement(self):
        coarse = C.polar_tangential_angle(shapes.ellipse(2.0, 1.0, center=(0.5, 0.1), n_samples=501))
        fine = C.polar_tangential_angle(shapes.ellipse(2.0, 1.0, center=(0.5, 0.1), n_samples=1001))
        assert np.max(np.abs(fine.omega[::2] - coarse.omega)) < 1e-8

    @given(st.floats(0.2, 5.0), st.floats(0.0, 2 * math.pi))
    def test_rotation_and_scale_invariance(self, scale, angle):
        c = shapes.ellipse(2.0, 1.0, center=(3.0, 1.0), n_samples=200)
        R = np.array([[math.cos(angle), -math.sin(angle)], [math.sin(angle), math.cos(angle)]])
        moved = C.ArclengthCurve(c.s * scale, scale * c.position @ R.T, c.tangent @ R.T,
                                 c.curvature / scale)
        a = C.polar_tangential_angle(c)
        b = C.polar_tangential_angle(moved)
        d = np.angle(np.exp(1j * (a.omega - b.omega)))
        assert np.max(np.abs(d)) < 1e-9
        assert np.allclose(b.omega_s * scale, a.omega_s, atol=1e-9)


class TestOsculatingDisk:
    def test_unit_circle(self):
        c = shapes.circle(1.0, n_samples=32)
        for i in (0, 9, 31):
            d = C.osculating_disk(c, i)
            assert np.allclose(d.center, (0, 0), atol=1e-14) and d.radius == pytest.approx(1.0)

    def test_parabola_vertex(self):
        c = shapes.parabola(-1.0, 1.0, n_samples=801)
        i = int(np.argmin(np.abs(c.position[:, 0])))
        assert abs(c.position[i, 0]) < 1e-10
        d = C.osculating_disk(c, i)
        assert np.allclose(d.center, (0.0, 0.5), atol=1e-9) and d.radius == pytest.approx(0.5)

    def test_elastica_start(self):
        lam = 0.8
        c = elastica_curve(ElasticaParams(lam), 1.0, 64)
        assert C.osculating_disk(c, 0).radius == pytest.approx(1.0 / (SQRT2 * lam), rel=1e-14)

    def test_undefined_disk(self):
        with pytest.raises(UndefinedDiskError):
            C.osculating_disk(shapes.line(n_samples=8), 2)

    def test_evolute_nan_on_zero_curvature(self):
        c = C.from_curvature(lambda s: s - 1.0, 2.0, (1.0, 1.0), n_samples=101)
        e = C.evolute(c)
        assert np.all(np.isnan(e[50])) and np.all(np.isfinite(e[0]))


class TestTaitKneser:
    def test_quarter_elastica_nested(self):
        c = elastica_curve(ElasticaParams(1.0), K_E * 0.98, 200)
        rep = C.tait_kneser_check(c)
        assert rep.nested and rep.min_margin > 0

    def test_circle_precondition(self):
        with pytest.raises(PreconditionError, match="monotone at node"):
            C.tait_kneser_check(shapes.circle(1.0, n_samples=50))

    def test_sign_change_precondition(self):
        c = C.from_curvature(lambda s: s - 0.55, 1.0, (2.0, 0.0), n_samples=40)
        with pytest.raises(PreconditionError, match="changes sign"):
            C.tait_kneser_check(c)

    def test_archimedean_spiral_brute_force(self):
        c = shapes.archimedean_spiral(1.0, 1.0, 6.0, n_samples=200)
        rep = C.tait_kneser_check(c)
        assert rep.nested
        # brute-force containment for a few pairs
        for i, j in ((0, 199), (50, 60), (3, 5)):
            a, b = C.osculating_disk(c, i), C.osculating_disk(c, j)
            big, small = (a, b) if a.radius > b.radius else (b, a)
            gap = big.radius - small.radius - math.dist(big.center, small.center)
            assert gap > 0

    def test_adjacent_pairs_exempt(self):
        c = shapes.archimedean_spiral(1.0, 1.0, 6.0, n_samples=200)
        assert C.tait_kneser_check(c).pairs_checked == 199 * 198 // 2


class TestSignClassification:
    def test_inflection_crossing_left_to_right(self):
        # y = sin(x) shifted up: at the inflection x = pi the curve crosses
        # the ray through the point from left to right.
        c = shapes.graph_curve(lambda x: 2.0 + np.sin(x), np.cos, lambda x: -np.sin(x),
                               2.0, 4.0, n_samples=2001)
        i = int(np.argmin(np.abs(c.position[:, 0] - math.pi)))
        c = C.ArclengthCurve(c.s, c.position, c.tangent,
                             np.where(np.arange(len(c)) == i, 0.0, c.curvature))
        g = c.position[i]
        n = C._rot90(c.tangent[i])
        assert g @ n > 0
        assert C.sign_classification(c, i) is C.SignClass.POSITIVE

    def test_centred_circle_tangential(self):
        c = shapes.circle(1.0, n_samples=40)
        assert all(C.sign_classification(c, i) is C.SignClass.TANGENTIAL for i in range(40))

    def test_origin_inside_and_outside_hat_circle(self):
        # circle of radius 1 about (0.6, 0); the evolute point is the centre
        outside = shapes.circle(1.0, center=(0.6, 0.0), n_samples=64)
        centre, radius = C.hat_circle(outside, 0)  # diameter from (1.6, 0) to (0.6, 0)
        assert math.hypot(*centre) > radius
        assert C.sign_classification(outside, 0) is C.SignClass.POSITIVE
        inside = shapes.circle(1.0, center=(0.6, 0.0), n_samples=64, start_angle=math.pi)
        centre, radius = C.hat_circle(inside, 0)  # diameter from (-0.4, 0) to (0.6, 0)
        assert math.hypot(*centre) < radius
        assert C.geometric_sign_value(inside, 0) < 0
        assert C.sign_classification(inside, 0) is C.SignClass.NEGATIVE
        assert C.omega_s_formula(inside)[0] < 0

    def test_initial_disk_criterion(self):
        # ellipse arc from the minor to the major vertex: (kappa^2)_s > 0;
        # translated so that the origin lies outside the first osculating disk.
        c = shapes.ellipse(2.0, 1.0, center=(0.0, 10.0), t0=math.pi / 2, t1=math.pi, n_samples=400)
        assert np.all(np.diff(c.curvature**2) > 0)
        assert not C.osculating_disk(c, 1).contains((0.0, 0.0))
        w = C.omega_s_formula(c)
        assert np.all(c.curvature[1:-1] * w[1:-1] > 0)

    def test_generic_node_required(self):
        c = C.from_curvature(lambda s: s, 1.0, n_samples=32)
        with pytest.raises(GenericityError):
            C.sign_classification(c, 0)

    @given(st.integers(0, 2**31 - 1))
    def test_random_spline_nodes_consistent(self, seed):
        c = shapes.random_spline(seed, n_samples=200)
        w = C.omega_s_formula(c)
        for i in range(0, 200, 7):
            cls = C.sign_classification(c, i)
            if cls is not C.SignClass.TANGENTIAL:
                assert cls.sign == np.sign(w[i])

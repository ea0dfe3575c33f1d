import math
import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freeelastica import oracle as O
from freeelastica.errors import DomainError
from freeelastica.obstacle import assemble_solution

H_CRIT = 1.66925368334815


def _dof(u_full):
    m = (len(u_full) - 1) // 2
    return np.asarray(u_full[1 : m + 1])


class TestDiscreteProblem:
    def test_expand_fold_adjoint(self):
        p = O.DiscreteProblem(11, 1.0)
        rng = np.random.default_rng(3)
        v, g = rng.normal(size=p.half), rng.normal(size=p.n)
        assert float(p.expand(v) @ g) == pytest.approx(float(v @ p.fold(g)), abs=1e-13)

    def test_expand_is_even(self):
        p = O.DiscreteProblem(9, 1.0)
        u = p.expand(np.arange(1.0, 5.0))
        assert np.array_equal(u, u[::-1]) and u[0] == 0.0 and u[4] == 4.0

    @pytest.mark.parametrize("n,h", [(4, 1.0), (3, 1.0), (11, 0.0), (11, math.nan)])
    def test_validation(self, n, h):
        with pytest.raises(DomainError):
            O.DiscreteProblem(n, h)


class TestDiscreteEnergy:
    def test_zero_graph(self):
        assert O.discrete_energy(np.zeros(50), 101, 1.0) == 0.0

    def test_circular_arc_second_order(self):
        R = 2.0
        exact = 2 * R * math.asin(1 / R) / R**2
        errs = []
        for n in (101, 201, 401):
            x = np.linspace(-1, 1, n)
            u = np.sqrt(R * R - x * x) - math.sqrt(R * R - 1)
            errs.append(abs(O.discrete_energy(_dof(u), n, 1.0) - exact))
        assert 3.0 < errs[0] / errs[1] < 5.0 and 3.0 < errs[1] / errs[2] < 5.0

    def test_analytic_samples_converge(self):
        sol = assemble_solution(1.0).solution
        errs = []
        for n in (101, 201, 401):
            u = assemble_solution(1.0, n_grid=n).solution.samples.u
            errs.append(abs(O.discrete_energy(_dof(u), n, 1.0) - sol.energy))
        assert errs[2] < 1e-3 * sol.energy
        assert 3.0 < errs[0] / errs[1] < 5.0 and 3.0 < errs[1] / errs[2] < 5.0

    @settings(max_examples=20)
    @given(st.integers(0, 10_000))
    def test_gradient_matches_finite_differences(self, seed):
        p = O.DiscreteProblem(41, 1.0)
        rng = np.random.default_rng(seed)
        v = 0.8 * (1 - p.x[1 : p.half + 1] ** 2) + 0.05 * rng.normal(size=p.half)
        g = O.energy_and_gradient(v, p)[1]
        fd = O.finite_difference_gradient(v, p, 1e-6)
        assert np.max(np.abs(g - fd)) < 1e-5 * max(1.0, float(np.max(np.abs(g))))

    def test_exact_difference(self):
        p = O.DiscreteProblem(41, 1.0)
        d2r, d1r = O._stencil_operators(p)
        w = O._weights(p.n, p.dx)
        v = 0.9 * (1 - p.x[1 : p.half + 1] ** 2)
        step = 1e-3 * np.sin(np.arange(p.half))
        direct = O.energy_and_gradient(v + step, p)[0] - O.energy_and_gradient(v, p)[0]
        assert O.energy_difference(v, step, d2r, d1r, w) == pytest.approx(direct, rel=1e-8)


class TestMinimize:
    def test_unit_height(self):
        r = O.minimize(1.0, 401)
        assert r.converged and not r.escaped
        assert r.active_set == [200]
        assert r.projected_gradient < r.tol
        sol = assemble_solution(1.0).solution
        assert abs(r.energy - sol.energy) < 1e-3 * sol.energy
        assert np.max(np.abs(r.u_nodes - sol.evaluate(r.x)[0])) < 1e-3

    def test_small_height_is_concave(self):
        r = O.minimize(0.2, 401)
        assert r.converged
        assert np.all(np.diff(r.u_nodes, 2) <= 1e-12)

    def test_history_monotone(self):
        r = O.minimize(1.5, 201)
        assert np.all(np.diff(r.history) <= 0.0)

    def test_respects_obstacle(self):
        r = O.minimize(0.7, 101)
        p = O.DiscreteProblem(101, 0.7)
        assert np.all(r.u_nodes - p.psi(p.x) >= -1e-12)

    def test_supercritical_escapes_or_fails(self):
        r = O.minimize(1.7, 201)
        assert r.escaped or not r.converged


def test_richardson():
    assert O.richardson(1.0 + 4e-4, 1.0 + 1e-4) == pytest.approx(1.0, abs=1e-15)


class TestCompare:
    @pytest.mark.parametrize("h", [1.0, 1.5])
    def test_agreement(self, h):
        rep = O.compare(h)
        assert all(g["converged"] for g in rep["grids"])
        assert rep["rel_gap"] < 5e-3 and rep["shape_sup_gap"] < 1e-2 and rep["apex_only"]
        assert not rep["near_critical"]
        gaps = [g["shape_sup_gap"] for g in rep["grids"]]
        assert gaps[0] > gaps[1] > gaps[2]

    @pytest.mark.slow
    def test_near_critical_warns_and_refines(self):
        with pytest.warns(RuntimeWarning, match="near-critical"):
            rep = O.compare(1.6)
        assert rep["near_critical"]
        assert rep["grids"][-1]["converged"] and rep["grids"][-1]["n"] > 801
        assert rep["rel_gap"] < 5e-3

    @pytest.mark.parametrize("h", [H_CRIT, 2.0])
    def test_no_minimizer(self, h):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            with pytest.raises(DomainError):
                O.compare(h)

import math
import os
import subprocess
import sys

import numpy as np
import pytest

from freeelastica import _kernels, _pycore

compiled = pytest.mark.skipif(not _kernels.COMPILED, reason="compiled core not built")


def test_backend_name():
    assert _kernels.BACKEND_NAME in ("cython", "python")


def test_forced_fallback():
    env = dict(os.environ, FREEELASTICA_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "import freeelastica; print(freeelastica.BACKEND_NAME)"],
                         capture_output=True, text=True, env=env, check=True).stdout
    assert out.strip() == "python"


@compiled
class TestCompiledMatchesFallback:
    core = _kernels.backend

    @pytest.mark.parametrize("k", [0.0, 0.3, 1 / math.sqrt(2), 0.99])
    def test_scalars(self, k):
        assert self.core.agm_K(k) == pytest.approx(_pycore.agm_K(k), rel=1e-15)
        assert self.core.ellip_f(1.1, k) == pytest.approx(_pycore.ellip_f(1.1, k), rel=1e-14)
        assert self.core.ellip_e(1.1, k) == pytest.approx(_pycore.ellip_e(1.1, k), rel=1e-14)

    def test_carlson(self):
        assert self.core.carlson_rf(0.5, 1.0, 2.0) == pytest.approx(_pycore.carlson_rf(0.5, 1.0, 2.0), rel=1e-15)
        assert self.core.carlson_rd(0.5, 1.0, 2.0) == pytest.approx(_pycore.carlson_rd(0.5, 1.0, 2.0), rel=1e-15)

    def test_jacobi(self):
        x = np.linspace(-20, 20, 401)
        a = np.array(self.core.jacobi_array(x, 0.6))
        b = np.array(_pycore.jacobi_array(x, 0.6))
        assert np.max(np.abs(a - b)) < 1e-14

    def test_primitive(self):
        a = np.linspace(0, 1.2, 50)
        b = a + 0.3
        assert np.allclose(self.core.primitive_amp_array(a, b), _pycore.primitive_amp_array(a, b),
                           atol=1e-14, rtol=0)
        assert self.core.c_star_integral() == pytest.approx(_pycore.c_star_integral(), rel=1e-14)

    def test_graph_energy(self):
        x = np.linspace(-1, 1, 101)
        u = 1.2 * (1 - x * x) ** 1.3
        e1, g1 = self.core.graph_energy_grad(u, x[1] - x[0])
        e2, g2 = _pycore.graph_energy_grad(u, x[1] - x[0])
        assert e1 == pytest.approx(e2, rel=1e-13)
        assert np.allclose(g1, g2, atol=1e-10, rtol=1e-12)

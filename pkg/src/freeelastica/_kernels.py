"""Backend selection for the numerical kernels.

The Cython extension is used when it imports; otherwise the pure-Python
module with the identical API. Set ``FREEELASTICA_PURE_PYTHON=1`` to force
the fallback.
"""

import os

from . import _pycore

if os.environ.get("FREEELASTICA_PURE_PYTHON"):
    backend = _pycore
else:
    try:
        from . import _core as backend
    except ImportError:  # extension not built
        backend = _pycore

COMPILED = backend is not _pycore
BACKEND_NAME = "cython" if COMPILED else "python"

agm_K = backend.agm_K
carlson_rf = backend.carlson_rf
carlson_rd = backend.carlson_rd
ellip_f = backend.ellip_f
ellip_e = backend.ellip_e
amplitude_quarter = backend.amplitude_quarter
jacobi = backend.jacobi
jacobi_array = backend.jacobi_array
primitive_amp = backend.primitive_amp
primitive_amp_array = backend.primitive_amp_array
c_star_integral = backend.c_star_integral
graph_energy_grad = backend.graph_energy_grad

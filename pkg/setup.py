"""Build the optional compiled core.

The package runs without it (``freeelastica._pycore`` is the fallback), so a
missing Cython or compiler only skips the extension.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("FREEELASTICA_NO_EXT"):
    try:
        import numpy as np
        from Cython.Build import cythonize
        from setuptools import Extension
    except ImportError:
        pass
    else:
        ext_modules = cythonize(
            [
                Extension(
                    "freeelastica._core",
                    ["src/freeelastica/_core.pyx"],
                    include_dirs=[np.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            compiler_directives={"language_level": "3"},
        )

setup(ext_modules=ext_modules)

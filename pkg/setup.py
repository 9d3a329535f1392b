"""Build script: compiles the optional accelerated kernel extension.

The package is fully functional without the extension (a pure NumPy
backend is selected at import time), so any build failure of the
Cython module is demoted to a warning rather than aborting the install.
"""

import warnings

from setuptools import setup

ext_modules = []
try:
    import numpy
    from Cython.Build import cythonize
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "linflow.backend._fastkernels",
                ["src/linflow/backend/_fastkernels.pyx"],
                include_dirs=[numpy.get_include()],
                extra_compile_args=["-O3"],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={"language_level": "3"},
    )
except Exception as exc:  # Cython or numpy missing: pure backend only
    warnings.warn(f"building without accelerated kernels: {exc}")
    ext_modules = []

setup(ext_modules=ext_modules)

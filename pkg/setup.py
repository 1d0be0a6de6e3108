"""Build script for the optional compiled core.

The package is fully functional without the extension (a NumPy fallback is
selected at import time), so extension build failures are tolerated when
DEEP_PRIOR_LAB_REQUIRE_COMPILED is unset.
"""

import os

import numpy
from setuptools import Extension, setup

try:
    from Cython.Build import cythonize
except ImportError:  # pragma: no cover - build-system pins Cython
    cythonize = None


def extensions():
    if cythonize is None:
        return []
    compile_args = ["-O3", "-fopenmp"]
    link_args = ["-fopenmp"]
    if os.environ.get("DEEP_PRIOR_LAB_NO_OPENMP"):
        compile_args = ["-O3"]
        link_args = []
    ext = Extension(
        "deep_prior_lab._fastcore",
        sources=["src/deep_prior_lab/_fastcore.pyx"],
        include_dirs=[numpy.get_include()],
        define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
        extra_compile_args=compile_args,
        extra_link_args=link_args,
    )
    return cythonize([ext], language_level="3")


setup(ext_modules=extensions())

"""Build script: compiles the accelerator extension when a toolchain is present.

Set RVENGINE_NO_EXT=1 to force a pure-Python install; the package falls back
to the NumPy kernel implementations at import time.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("RVENGINE_NO_EXT"):
    try:
        import numpy
        from Cython.Build import cythonize
        from setuptools import Extension

        ext_modules = cythonize(
            [
                Extension(
                    "rvengine._kernels._core",
                    ["src/rvengine/_kernels/_core.pyx"],
                    include_dirs=[numpy.get_include()],
                    extra_compile_args=["-O3"],
                    define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
                )
            ],
            language_level=3,
        )
    except ImportError:
        ext_modules = []

setup(ext_modules=ext_modules)

"""Build script for the optional compiled kernels.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure to cythonize or compile is non-fatal.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    from setuptools import Extension
    import numpy as np

    ext_modules = cythonize(
        [
            Extension(
                "curveinv._kernels",
                sources=["src/curveinv/_kernels.pyx"],
                include_dirs=[np.get_include()],
                define_macros=[("NPY_NO_DEPRECATED_API", "NPY_1_7_API_VERSION")],
            )
        ],
        compiler_directives={
            "language_level": "3",
            "boundscheck": False,
            "wraparound": False,
            "cdivision": True,
        },
    )
except Exception as exc:  # pragma: no cover
    print(f"curveinv: building without compiled kernels ({exc})")

setup(ext_modules=ext_modules)

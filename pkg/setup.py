"""Build script: compiles the optional Cython kernel extension.

The package works without the extension (a NumPy fallback is selected at
import time), so any failure here only costs speed, not functionality.
"""
from setuptools import setup

ext_modules = []
try:
    from Cython.Build import cythonize
    import numpy as np
    from setuptools import Extension

    ext_modules = cythonize(
        [
            Extension(
                "beamspec._kernels._chareq_cy",
                ["src/beamspec/_kernels/_chareq_cy.pyx"],
                include_dirs=[np.get_include()],
                extra_compile_args=["-O3"],
            )
        ],
        language_level=3,
    )
except Exception as exc:  # pragma: no cover - build-env dependent
    import sys

    print("beamspec: skipping Cython extension (%s)" % exc, file=sys.stderr)

setup(ext_modules=ext_modules)

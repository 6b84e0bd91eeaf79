"""Build script: compiles the optional _speedups extension.

The package is fully functional without the extension (a NumPy fallback is
selected at import time); compilation failures are therefore tolerated.
Set RCLUSTERING_NO_EXT=1 to skip the extension build entirely.
"""

import os

from setuptools import setup

ext_modules = []
if not os.environ.get("RCLUSTERING_NO_EXT"):
    try:
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/rclustering/_kernels/_speedups.pyx"],
            compiler_directives={
                "boundscheck": False,
                "wraparound": False,
                "cdivision": True,
                "language_level": "3",
            },
        )
    except Exception as exc:  # no Cython / no compiler: fall back to NumPy path
        print(f"rclustering: skipping compiled speedups ({exc})")

setup(ext_modules=ext_modules)

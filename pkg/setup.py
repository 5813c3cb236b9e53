"""Build script: compiles the Cython kernel extension when possible.

The package works without the extension (a pure-Python twin of the same
algorithms is selected at import time), so a failed compile only costs speed.
"""

import os

from setuptools import setup

ext_modules = []
if os.environ.get("GONOGO_NO_EXT") != "1":
    try:
        import numpy
        from Cython.Build import cythonize

        ext_modules = cythonize(
            ["src/gonogo/kernels/_special_cy.pyx"],
            language_level=3,
        )
        include_dirs = [numpy.get_include()]
    except Exception:
        ext_modules = []

setup(ext_modules=ext_modules)

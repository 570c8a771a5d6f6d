"""Builds the optional compiled simplex kernel; the package works without it."""
import os

from setuptools import setup

ext_modules = []
if not os.environ.get("PRPQ_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        from setuptools import Extension

        ext_modules = cythonize(
            [Extension("prpq.oracle._simplex_c", ["src/prpq/oracle/_simplex_c.pyx"])],
            compiler_directives={"language_level": "3"},
            quiet=True,
        )

setup(ext_modules=ext_modules)

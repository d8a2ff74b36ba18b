"""Build hook for the optional compiled word kernel.

Set SFTWEYL_NO_EXT=1 to skip it; the package then runs on the pure-Python
kernel.
"""
import os

from setuptools import Extension, setup

ext_modules = []
if not os.environ.get("SFTWEYL_NO_EXT"):
    try:
        from Cython.Build import cythonize
    except ImportError:
        cythonize = None
    if cythonize is not None:
        ext_modules = cythonize(
            [Extension("sftweyl._kernel", ["src/sftweyl/_kernel.pyx"])],
            compiler_directives={"language_level": 3},
        )

setup(ext_modules=ext_modules)

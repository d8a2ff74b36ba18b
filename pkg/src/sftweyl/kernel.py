"""Backend selection for the word kernels.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``SFTWEYL_PURE_PYTHON`` is set to a non-empty value,
the pure-Python implementation is loaded.  Both expose ``WordKernel``.
"""
import os

from . import _kernel_py

if os.environ.get("SFTWEYL_PURE_PYTHON"):
    WordKernel = _kernel_py.WordKernel
    BACKEND = "python"
else:
    try:
        from ._kernel import WordKernel
        BACKEND = "cython"
    except ImportError:
        WordKernel = _kernel_py.WordKernel
        BACKEND = "python"

KIND_SHIFT = _kernel_py.KIND_SHIFT
INDEX_SHIFT = _kernel_py.INDEX_SHIFT
CONJ = _kernel_py.CONJ

PyWordKernel = _kernel_py.WordKernel

__all__ = ["WordKernel", "PyWordKernel", "BACKEND", "KIND_SHIFT", "INDEX_SHIFT", "CONJ"]

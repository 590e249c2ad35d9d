"""Kernel backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise,
or when ``PHOTOCOUNT_PURE_PYTHON`` is set to a non-empty value, the numpy
kernels in ``_pykernels`` are used. Both expose the same functions.
"""
import os

if os.environ.get("PHOTOCOUNT_PURE_PYTHON"):
    from . import _pykernels as kernels

    BACKEND = "python"
else:
    try:
        from . import _ckernels as kernels

        BACKEND = "cython"
    except ImportError:  # extension not built
        from . import _pykernels as kernels

        BACKEND = "python"

__all__ = ["BACKEND", "kernels"]

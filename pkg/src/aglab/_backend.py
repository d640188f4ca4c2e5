"""Picks the compiled search kernels when available, else the pure-Python ones.

Set ``AGLAB_PURE=1`` to force the fallback.
"""
import os

from . import _kernels_py

kernels = _kernels_py
NAME = "python"

if os.environ.get("AGLAB_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
        NAME = "cython"
    except ImportError:
        pass

"""Kernel dispatch: compiled core when available, pure Python otherwise.

Set ``OPERADKIT_PURE=1`` to force the fallback (used by the benchmark and by
the parity tests).
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("OPERADKIT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _core as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

rref = _impl.rref
apply_multilinear = _impl.apply_multilinear
add_scaled = _impl.add_scaled

__all__ = ["BACKEND", "rref", "apply_multilinear", "add_scaled"]

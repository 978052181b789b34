"""Kernel backend selection.

The compiled extension is used when it imports cleanly; otherwise, or when
``SP_SOLITON_PURE_PYTHON=1`` is set, the pure-Python twin is used.
``COMPILED`` reports which one is active.
"""
from __future__ import annotations

import os

from . import _pykernels

COMPILED = False
if os.environ.get("SP_SOLITON_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl
        COMPILED = True
    except ImportError:  # extension not built
        _impl = _pykernels
else:
    _impl = _pykernels

sturm_count = _impl.sturm_count
bisect_eigenvalue = _impl.bisect_eigenvalue
solve_tridiagonal = _impl.solve_tridiagonal
shoot = _impl.shoot

__all__ = ["COMPILED", "sturm_count", "bisect_eigenvalue",
           "solve_tridiagonal", "shoot"]

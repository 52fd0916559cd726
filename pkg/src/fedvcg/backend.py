"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; otherwise the
pure-Python kernels are used.  Setting the environment variable
``FEDVCG_PURE=1`` before import forces the fallback (useful for the
benchmark and for debugging).
"""

from __future__ import annotations

import os

from . import _core_py


def _select():
    if os.environ.get("FEDVCG_PURE", "0") not in ("", "0"):
        return _core_py
    try:
        from . import _core
    except ImportError:
        return _core_py
    return _core


_impl = _select()

BACKEND = _impl.NAME
solve_accept = _impl.solve_accept
vcg_bundle = _impl.vcg_bundle


def available_backends() -> dict:
    """Importable kernel modules keyed by name."""
    found = {_core_py.NAME: _core_py}
    try:
        from . import _core
    except ImportError:
        pass
    else:
        found[_core.NAME] = _core
    return found

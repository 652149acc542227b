"""Kernel backend selection.

The compiled Cython kernels are used when the extension is built; otherwise
the pure-Python versions are loaded. Set ``SWIMTRACE_BACKEND=python`` to
force the fallback.
"""

from __future__ import annotations

import os
from types import ModuleType

from . import _fallback


def load(name: str) -> ModuleType:
    if name == "python":
        return _fallback
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


_requested = os.environ.get("SWIMTRACE_BACKEND", "").strip().lower()
if _requested:
    _impl = load(_requested)
else:
    try:
        _impl = load("cython")
    except ImportError:
        _impl = _fallback

BACKEND = "python" if _impl is _fallback else "cython"
EXHAUSTED = _fallback.EXHAUSTED
mobility_loop = _impl.mobility_loop
contact_sweep = _impl.contact_sweep

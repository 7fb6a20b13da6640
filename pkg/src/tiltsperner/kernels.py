"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
implementation.  ``set_backend`` switches explicitly (tests and benchmarks).
"""
from __future__ import annotations

from types import ModuleType

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS: dict[str, ModuleType] = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active: ModuleType = _ckernels if _ckernels is not None else _pykernels


def available() -> list[str]:
    return sorted(_BACKENDS)


def current() -> ModuleType:
    return _active


def set_backend(name: str) -> ModuleType:
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available()}")
    _active = _BACKENDS[name]
    return _active


def get(name: str) -> ModuleType:
    return _BACKENDS[name]

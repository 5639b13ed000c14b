"""Kernel backend selection.

The compiled extension is preferred when importable; set QIDENT_KERNELS=pure
or QIDENT_KERNELS=compiled to force a backend (the latter raises if the
extension is missing).  Both backends are bit-for-bit interchangeable; the
benchmark suite and test_kernels.py compare them directly.
"""

from __future__ import annotations

import os

from . import _kernels_py

_FUNCS = ("conv_trunc", "geom_div", "geom_mul", "binom_mul", "binom_div", "nahm_tail")


def _load_compiled():
    from . import _kernels  # noqa: F401  (built from _kernels.pyx)

    return _kernels


def available_backends():
    names = ["pure"]
    try:
        _load_compiled()
        names.append("compiled")
    except ImportError:
        pass
    return names


def _select():
    choice = os.environ.get("QIDENT_KERNELS", "auto")
    if choice == "pure":
        return "pure", _kernels_py
    if choice == "compiled":
        return "compiled", _load_compiled()
    try:
        return "compiled", _load_compiled()
    except ImportError:
        return "pure", _kernels_py


BACKEND, _impl = _select()


def use(name):
    """Switch backend at runtime (tests and benchmarks only)."""
    global BACKEND, _impl
    if name == "pure":
        BACKEND, _impl = "pure", _kernels_py
    elif name == "compiled":
        BACKEND, _impl = "compiled", _load_compiled()
    else:
        raise ValueError(f"unknown backend {name!r}")
    for fn in _FUNCS:
        globals()[fn] = getattr(_impl, fn)


for _fn in _FUNCS:
    globals()[_fn] = getattr(_impl, _fn)

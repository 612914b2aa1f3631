"""Kernel backend selection.

At import time the compiled extension is preferred when present; otherwise
the numpy fallback is used. `set_backend` switches explicitly (used by the
backend-comparison benchmark and tests). Each backend is deterministic;
cross-backend results agree to ~1e-12 relative but are not guaranteed
bit-identical because accumulation order differs.
"""

from . import _kernels_np

try:
    from . import _kernels_cy

    HAVE_COMPILED = True
except ImportError:
    _kernels_cy = None
    HAVE_COMPILED = False

_active = _kernels_cy if HAVE_COMPILED else _kernels_np


def kernels():
    """The active kernel module."""
    return _active


def active_backend() -> str:
    """Name of the active backend: 'compiled' or 'numpy'."""
    return _active.NAME


def available_backends() -> tuple[str, ...]:
    return ("compiled", "numpy") if HAVE_COMPILED else ("numpy",)


def set_backend(name: str) -> None:
    """Select 'compiled' or 'numpy'. Raises if the extension is missing."""
    global _active
    if name == "numpy":
        _active = _kernels_np
    elif name == "compiled":
        if not HAVE_COMPILED:
            raise RuntimeError("compiled kernel extension is not installed")
        _active = _kernels_cy
    else:
        raise ValueError(f"unknown backend {name!r} (expected 'compiled' or 'numpy')")

"""Kernel selection: compiled Jacobi core when available, pure Python otherwise.

The environment variable ``QIR_BACKEND`` forces a choice: ``compiled``
raises if the extension is missing, ``python`` ignores it, anything else
(or unset) selects the compiled core when it imports.
"""

import os

from . import _jacobi_py
from .errors import ConfigError

try:
    from . import _jacobi  # compiled extension, built by setup.py
except ImportError:  # pragma: no cover - depends on the build
    _jacobi = None

_KERNELS = {"python": _jacobi_py}
if _jacobi is not None:
    _KERNELS["compiled"] = _jacobi


def _initial_choice() -> str:
    forced = os.environ.get("QIR_BACKEND", "auto")
    if forced == "auto":
        return "compiled" if _jacobi is not None else "python"
    if forced not in _KERNELS:
        raise ConfigError(
            f"QIR_BACKEND={forced!r} unavailable; choices: {sorted(_KERNELS)} or 'auto'"
        )
    return forced


_active = _initial_choice()


def backend_name() -> str:
    """Name of the kernel currently in use: 'compiled' or 'python'."""
    return _active


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_KERNELS))


def set_backend(name: str) -> None:
    """Switch kernels at runtime (used by tests and benchmarks)."""
    global _active
    if name not in _KERNELS:
        raise ConfigError(f"unknown backend {name!r}; choices: {sorted(_KERNELS)}")
    _active = name


def jacobi_eigh(a, v, max_rotations):
    return _KERNELS[_active].jacobi_eigh(a, v, max_rotations)

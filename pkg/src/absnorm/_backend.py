"""Kernel backend selection: compiled extension if built, pure Python otherwise.

Set ``ABSNORM_PURE=1`` in the environment to force the pure backend (used by
the benchmark and the backend-parity tests).
"""

import os

if os.environ.get("ABSNORM_PURE"):
    from . import _core_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _core as _impl

        BACKEND = "compiled"
    except ImportError:
        from . import _core_py as _impl

        BACKEND = "python"

Kernel = _impl.Kernel


def backend_name():
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND

"""Kernel backend selection: compiled extension when available, pure
Python otherwise.  Set DEFINDEX_PURE_PYTHON=1 to force the fallback."""

import os

if os.environ.get("DEFINDEX_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl

    KERNEL_BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        KERNEL_BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        KERNEL_BACKEND = "python"

recurrence_trace = _impl.recurrence_trace

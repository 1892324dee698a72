"""Kernel backend selection: compiled extension when present, else fallback.

Set NOVASCOUT_FORCE_PYTHON_KERNELS=1 to force the pure-Python kernels even
when the extension is installed (used by the benchmark and backend tests).
"""

import os

from . import _kernels_py

if os.environ.get("NOVASCOUT_FORCE_PYTHON_KERNELS") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

assign_color_segments = _impl.assign_color_segments
cooc_accumulate = _impl.cooc_accumulate


def backend() -> str:
    """Name of the active kernel backend: 'compiled' or 'python'."""
    return BACKEND

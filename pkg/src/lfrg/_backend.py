"""Select the kernel backend at import time.

The compiled extension lfrg._kernels is preferred when present; the
pure-Python twin lfrg._kernels_py is the fallback. Setting the environment
variable LFRG_PURE_PYTHON=1 forces the fallback (useful for benchmarking
and for debugging suspected extension issues).
"""

import os

from . import _kernels_py

if os.environ.get("LFRG_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND_NAME


def active_backend():
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return BACKEND

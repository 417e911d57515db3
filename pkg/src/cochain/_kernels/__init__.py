"""Kernel selection: compiled extension if available, pure Python otherwise.

Set COCHAIN_PURE_PYTHON=1 to force the fallback (useful for benchmarking
and for debugging kernel-level issues).
"""

import os

from . import pykernel

if os.environ.get("COCHAIN_PURE_PYTHON"):
    kernel = pykernel
else:
    try:
        from . import _ckernel as kernel  # type: ignore[no-redef]
    except ImportError:
        kernel = pykernel


def backend_name() -> str:
    """Name of the kernel actually in use: 'compiled' or 'python'."""
    return kernel.BACKEND


def available_kernels() -> dict:
    """All importable kernel modules keyed by backend name."""
    found = {pykernel.BACKEND: pykernel}
    try:
        from . import _ckernel

        found[_ckernel.BACKEND] = _ckernel
    except ImportError:
        pass
    return found

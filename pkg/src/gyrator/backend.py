"""Kernel backend selection: compiled extension if importable, NumPy otherwise.

Set GYRATOR_BACKEND=python to force the fallback (useful for the kernel
benchmark and for running from an unbuilt source tree).
"""

import os

from . import _kernels_py

_FORCED = os.environ.get("GYRATOR_BACKEND", "").strip().lower()

if _FORCED == "python":
    _impl = _kernels_py
    HAVE_COMPILED = False
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        HAVE_COMPILED = True
    except ImportError:
        _impl = _kernels_py
        HAVE_COMPILED = False

direct_gyrator_sum = _impl.direct_gyrator_sum
logistic_keystream = _impl.logistic_keystream


def kernel_backend():
    """Name of the active kernel implementation: 'compiled' or 'python'."""
    return "compiled" if HAVE_COMPILED else "python"


def implementations():
    """All importable kernel modules keyed by backend name (for benchmarks)."""
    impls = {"python": _kernels_py}
    try:
        from . import _kernels  # type: ignore[attr-defined]

        impls["compiled"] = _kernels
    except ImportError:
        pass
    return impls

"""Kernel backend selection.

The compiled extension is preferred; the pure-Python twin is the fallback.
Set MIXEDMOTIVE_PURE=1 to force the pure path (useful for benchmarking and
for debugging suspected kernel issues). Both backends are bit-identical, so
the choice never affects results, only speed.
"""

import os

if os.environ.get("MIXEDMOTIVE_PURE"):
    from . import _pykernels as kernels
else:
    try:
        from . import _ckernels as kernels  # type: ignore[no-redef]
    except ImportError:
        from . import _pykernels as kernels  # type: ignore[no-redef]


def backend_name() -> str:
    """Name of the active kernel backend: 'compiled' or 'pure'."""
    return kernels.BACKEND

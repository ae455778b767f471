"""Kernel backend selection.

The compiled extension is preferred; the pure-Python fallback keeps the
package fully functional without a compiler. ``RPPG_KERNELS=python`` forces
the fallback (used by the benchmark and backend-equality tests).
"""
import os

from . import fallback as _fallback

try:
    from . import _core as _compiled  # type: ignore[attr-defined]
except ImportError:
    _compiled = None

if os.environ.get("RPPG_KERNELS") == "python" or _compiled is None:
    _impl = _fallback
    BACKEND = "python"
else:
    _impl = _compiled
    BACKEND = "compiled"

polygon_runs = _impl.polygon_runs
masked_green_sum = _impl.masked_green_sum


def available_backends() -> dict:
    """Name -> module for every importable backend."""
    backends = {"python": _fallback}
    if _compiled is not None:
        backends["compiled"] = _compiled
    return backends

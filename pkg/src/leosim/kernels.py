"""Backend selection for the hot kernels.

The compiled extension is used when it was built; otherwise, or when
``LEOSIM_PURE_PYTHON=1`` is set, the pure-Python module is used. Both
expose identical functions with identical results.
"""
import os

from . import _kernels_py

if os.environ.get("LEOSIM_PURE_PYTHON", "") not in ("", "0"):
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"
dijkstra = _impl.dijkstra


def prepare_csr(indptr, indices, weights):
    """Convert int64/float64 numpy CSR arrays to what the active backend indexes fastest."""
    if _impl is _kernels_py:
        return indptr.tolist(), indices.tolist(), weights.tolist()
    return indptr, indices, weights

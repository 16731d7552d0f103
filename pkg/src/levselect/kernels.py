"""Backend selection for the hot kernels.

The compiled extension ``levselect._ckernels`` is preferred. Set
``LEVSELECT_PURE_PYTHON=1`` to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
_compiled = None

if os.environ.get("LEVSELECT_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _compiled
        BACKEND = "cython"
    except ImportError:  # extension not built
        _compiled = None

_impl = _compiled if _compiled is not None else _kernels_py

pivoted_qr = _impl.pivoted_qr
row_norm_chain = _impl.row_norm_chain


def implementations():
    """Return ``{name: module}`` for every available backend."""
    found = {"python": _kernels_py}
    if _compiled is not None:
        found["cython"] = _compiled
    else:
        try:
            from . import _ckernels
            found["cython"] = _ckernels
        except ImportError:
            pass
    return found

"""Backend selection for the hot kernels.

The compiled module is used when it was built and ``NLSASYM_PURE_PYTHON`` is
not set to 1; otherwise the NumPy implementation is used.  Both expose
``pc_env`` and ``transfer`` with identical signatures.
"""

from __future__ import annotations

import os

from . import _pykernels

_impl = _pykernels
if os.environ.get("NLSASYM_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pykernels

BACKEND: str = _impl.BACKEND


def pc_env(a, ua0, dua0, ua1, dua1, y, r_series, r_asym, mode, tol, max_terms):
    return _impl.pc_env(
        complex(a), complex(ua0), complex(dua0), complex(ua1), complex(dua1), y,
        float(r_series), float(r_asym), int(mode), float(tol), int(max_terms),
    )


def transfer(zs, x0, h, qn, qm):
    import numpy as np

    return _impl.transfer(
        np.ascontiguousarray(zs, dtype=float),
        float(x0),
        float(h),
        np.ascontiguousarray(qn, dtype=complex),
        np.ascontiguousarray(qm, dtype=complex),
    )


def backends() -> dict:
    """Both implementations, for benchmarking and cross-checks."""
    out = {"numpy": _pykernels}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out

"""Kernel backend selection.

The compiled Cython kernels are preferred when present; the pure-Python twin
is the fallback.  Set MA_POLYTOPE_PURE=1 to force the fallback (useful for
benchmarking and for debugging suspected kernel issues).
"""

import os

if os.environ.get("MA_POLYTOPE_PURE", "") not in ("", "0"):
    from . import pure as _impl
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import pure as _impl

BACKEND = _impl.BACKEND
det_int = _impl.det_int
eval_many = _impl.eval_many
eval_one = _impl.eval_one
hyperplane = _impl.hyperplane


def backend_name() -> str:
    return BACKEND

"""Kernel backend selection.

Imports the compiled Cython kernels when available, otherwise the
pure-Python fallback. Set BENNETT8_PURE_PYTHON=1 to force the fallback
(used by the benchmark and the backend-parity tests).
"""
import os

if os.environ.get("BENNETT8_PURE_PYTHON"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
quat_mul = _impl.quat_mul
quat_conj = _impl.quat_conj
quat_normalize = _impl.quat_normalize
quat_rotate = _impl.quat_rotate
dq_mul = _impl.dq_mul
loop_closure_quat = _impl.loop_closure_quat
loop_closure_dq = _impl.loop_closure_dq

__all__ = [
    "BACKEND",
    "quat_mul",
    "quat_conj",
    "quat_normalize",
    "quat_rotate",
    "dq_mul",
    "loop_closure_quat",
    "loop_closure_dq",
]

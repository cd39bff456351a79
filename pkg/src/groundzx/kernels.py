"""Kernel selection for exact ring contraction.

The compiled extension ``groundzx._core._ring`` is used when it imports;
otherwise (or when ``GROUNDZX_PURE_PYTHON=1``) the numpy fallback is used.
Both operate on int64 coordinate arrays. Inputs whose product could
overflow int64 are routed to the fallback on object (bigint) arrays.
"""
import logging
import os

import numpy as np

from ._core import _ring_py

logger = logging.getLogger(__name__)

_INT64_HEADROOM = 2**62

_compiled = None
if os.environ.get("GROUNDZX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from ._core import _ring as _compiled  # type: ignore[no-redef]
    except ImportError:  # pragma: no cover - depends on build
        logger.debug("compiled ring kernels unavailable, using numpy fallback")
        _compiled = None

BACKEND = "cython" if _compiled is not None else "python"


def _max_abs(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    return int(max(abs(int(a.max())), abs(int(a.min()))))


def safe_int64(a: np.ndarray, b: np.ndarray, inner: int) -> bool:
    """True when a ring product summed over ``inner`` terms fits in int64."""
    if a.dtype == object or b.dtype == object:
        return False
    return 4 * max(inner, 1) * _max_abs(a) * _max_abs(b) < _INT64_HEADROOM


def _as_object(a: np.ndarray) -> np.ndarray:
    return a.astype(object) if a.dtype != object else a


def narrow(a: np.ndarray) -> np.ndarray:
    """Return an int64 copy of a bigint array when every entry fits."""
    if a.dtype == object and (a.size == 0 or _max_abs(a) < _INT64_HEADROOM):
        return a.astype(np.int64)
    return a


def ring_matmul(a: np.ndarray, b: np.ndarray, use_compiled: bool = True) -> np.ndarray:
    if safe_int64(a, b, a.shape[1]):
        a = np.ascontiguousarray(a, dtype=np.int64)
        b = np.ascontiguousarray(b, dtype=np.int64)
        if use_compiled and _compiled is not None:
            return _compiled.ring_matmul(a, b)
        return _ring_py.ring_matmul(a, b)
    return narrow(_ring_py.ring_matmul(_as_object(a), _as_object(b)))


def ring_mul_elementwise(a: np.ndarray, b: np.ndarray, use_compiled: bool = True) -> np.ndarray:
    if safe_int64(a, b, 1):
        if use_compiled and _compiled is not None:
            return _compiled.ring_mul_elementwise(a, b)
        return _ring_py.ring_mul_elementwise(a.astype(np.int64), b.astype(np.int64))
    return narrow(_ring_py.ring_mul_elementwise(_as_object(a), _as_object(b)))

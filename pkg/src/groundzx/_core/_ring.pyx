# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled exact ring kernels (int64 coordinates).

Callers guarantee no overflow; see ``groundzx.kernels.safe_int64``.
"""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


def ring_matmul(const int64_t[:, :, ::1] a, const int64_t[:, :, ::1] b):
    """Matrix product of (r, s, 4) and (s, c, 4) coordinate arrays."""
    cdef Py_ssize_t r = a.shape[0], s = a.shape[1], c = b.shape[1]
    if b.shape[0] != s:
        raise ValueError(f"ring_matmul: inner dimensions {s} != {b.shape[0]}")
    out_arr = np.zeros((r, c, 4), dtype=np.int64)
    cdef int64_t[:, :, ::1] out = out_arr
    cdef Py_ssize_t i, j, t
    cdef int64_t x0, x1, x2, x3, y0, y1, y2, y3
    with nogil:
        for i in range(r):
            for t in range(s):
                x0 = a[i, t, 0]; x1 = a[i, t, 1]; x2 = a[i, t, 2]; x3 = a[i, t, 3]
                if x0 == 0 and x1 == 0 and x2 == 0 and x3 == 0:
                    continue
                for j in range(c):
                    y0 = b[t, j, 0]; y1 = b[t, j, 1]; y2 = b[t, j, 2]; y3 = b[t, j, 3]
                    out[i, j, 0] += x0 * y0 - x1 * y3 - x2 * y2 - x3 * y1
                    out[i, j, 1] += x0 * y1 + x1 * y0 - x2 * y3 - x3 * y2
                    out[i, j, 2] += x0 * y2 + x1 * y1 + x2 * y0 - x3 * y3
                    out[i, j, 3] += x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0
    return out_arr


def ring_mul_elementwise(a, b):
    """Broadcasting elementwise ring product of (..., 4) int64 arrays."""
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    ab = np.ascontiguousarray(np.broadcast_to(a, shape + (4,)), dtype=np.int64).reshape(-1, 4)
    bb = np.ascontiguousarray(np.broadcast_to(b, shape + (4,)), dtype=np.int64).reshape(-1, 4)
    out_arr = np.empty_like(ab)
    _mul_rows(ab, bb, out_arr)
    return out_arr.reshape(shape + (4,))


cdef void _mul_rows(const int64_t[:, ::1] a, const int64_t[:, ::1] b, int64_t[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], i
    cdef int64_t x0, x1, x2, x3, y0, y1, y2, y3
    for i in range(n):
        x0 = a[i, 0]; x1 = a[i, 1]; x2 = a[i, 2]; x3 = a[i, 3]
        y0 = b[i, 0]; y1 = b[i, 1]; y2 = b[i, 2]; y3 = b[i, 3]
        out[i, 0] = x0 * y0 - x1 * y3 - x2 * y2 - x3 * y1
        out[i, 1] = x0 * y1 + x1 * y0 - x2 * y3 - x3 * y2
        out[i, 2] = x0 * y2 + x1 * y1 + x2 * y0 - x3 * y3
        out[i, 3] = x0 * y3 + x1 * y2 + x2 * y1 + x3 * y0

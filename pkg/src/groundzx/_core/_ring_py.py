"""Pure numpy fallback for the exact ring kernels.

Arrays carry the four w-coordinates on the last axis. Works for int64 and
for object (arbitrary precision) arrays alike.
"""
import numpy as np


def ring_matmul(a, b):
    """Matrix product of (r, s, 4) and (s, c, 4) coordinate arrays."""
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"ring_matmul: inner dimensions {a.shape[1]} != {b.shape[0]}")
    dtype = object if (a.dtype == object or b.dtype == object) else np.int64
    out = np.zeros((a.shape[0], b.shape[1], 4), dtype=dtype)
    for i in range(4):
        ai = a[:, :, i]
        if not ai.any():
            continue
        for j in range(4):
            bj = b[:, :, j]
            if not bj.any():
                continue
            prod = ai @ bj
            if i + j < 4:
                out[:, :, i + j] += prod
            else:
                out[:, :, i + j - 4] -= prod
    return out


def ring_mul_elementwise(a, b):
    """Broadcasting elementwise ring product of (..., 4) arrays."""
    shape = np.broadcast_shapes(a.shape[:-1], b.shape[:-1])
    dtype = object if (a.dtype == object or b.dtype == object) else np.int64
    out = np.zeros(shape + (4,), dtype=dtype)
    for i in range(4):
        for j in range(4):
            prod = a[..., i] * b[..., j]
            if i + j < 4:
                out[..., i + j] += prod
            else:
                out[..., i + j - 4] -= prod
    return out

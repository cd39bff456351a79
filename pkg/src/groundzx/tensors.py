"""Dense tensors over the two scalar backends.

The float backend is a plain complex128 ``numpy.ndarray``. The exact backend
is :class:`ExactTensor`: an integer array of w-coordinates (last axis of
length 4) sharing one sqrt2 denominator exponent.

The ``mat_*`` helpers accept either kind and follow the matrix convention
used throughout: rows index outputs, columns index inputs, leftmost wire is
the most significant bit.
"""
from __future__ import annotations

from typing import Iterable, Optional, Sequence, Union

import numpy as np

from . import kernels
from .scalars import ExactScalar, OMEGA

_OMEGA_POW = np.array([OMEGA**j for j in range(4)], dtype=complex)


class BackendError(ValueError):
    """Raised when an operation mixes or misuses backends."""


class ExactTensor:
    """Tensor with entries in Z[w, 1/sqrt2], stored as coords / sqrt2**k."""

    __slots__ = ("coeffs", "k")

    def __init__(self, coeffs: np.ndarray, k: int = 0, canonical: bool = True):
        coeffs = np.asarray(coeffs)
        if coeffs.dtype != object:
            coeffs = coeffs.astype(np.int64, copy=False)
        if coeffs.shape[-1:] != (4,):
            raise ValueError("ExactTensor coefficients need a trailing axis of length 4")
        self.coeffs = coeffs
        self.k = int(k)
        if canonical:
            self._canonicalize()

    # construction -----------------------------------------------------------

    @classmethod
    def from_scalars(cls, entries, shape: Optional[Sequence[int]] = None) -> "ExactTensor":
        flat = list(np.asarray(entries, dtype=object).ravel())
        if shape is None:
            shape = np.asarray(entries, dtype=object).shape
        k = max((x.k for x in flat), default=0)
        rows = []
        for x in flat:
            a = x.coords
            for _ in range(k - x.k):
                a0, a1, a2, a3 = a
                a = (a1 - a3, a0 + a2, a1 + a3, a2 - a0)
            rows.append(a)
        coeffs = np.array(rows, dtype=object).reshape(tuple(shape) + (4,))
        return cls(kernels.narrow(coeffs), k)

    @classmethod
    def scalar(cls, x: ExactScalar) -> "ExactTensor":
        return cls(np.array(x.coords, dtype=object).reshape(4), x.k)

    @classmethod
    def zeros(cls, shape: Sequence[int]) -> "ExactTensor":
        return cls(np.zeros(tuple(shape) + (4,), dtype=np.int64), 0)

    @classmethod
    def identity(cls, dim: int) -> "ExactTensor":
        c = np.zeros((dim, dim, 4), dtype=np.int64)
        c[np.arange(dim), np.arange(dim), 0] = 1
        return cls(c, 0)

    # basic properties -------------------------------------------------------

    @property
    def shape(self) -> tuple[int, ...]:
        return self.coeffs.shape[:-1]

    @property
    def ndim(self) -> int:
        return self.coeffs.ndim - 1

    def __repr__(self) -> str:
        return f"ExactTensor(shape={self.shape}, k={self.k})"

    def entry(self, index) -> ExactScalar:
        c = self.coeffs[index]
        return ExactScalar(tuple(int(v) for v in c), self.k)

    def entries(self) -> np.ndarray:
        out = np.empty(self.shape, dtype=object)
        for idx in np.ndindex(*self.shape):
            out[idx] = self.entry(idx)
        return out

    def to_complex(self) -> np.ndarray:
        c = self.coeffs.astype(float) if self.coeffs.dtype != object else self.coeffs.astype(float)
        return (c @ _OMEGA_POW) / np.sqrt(2.0) ** self.k

    # canonical form ---------------------------------------------------------

    def _canonicalize(self) -> None:
        c = self.coeffs
        if c.size == 0 or not c.any():
            self.coeffs = np.zeros(c.shape, dtype=np.int64)
            self.k = 0
            return
        while self.k < 0:
            c = _times_sqrt2(c)
            self.k += 1
        while self.k > 0:
            d0 = np.asarray((c[..., 0] - c[..., 2]) % 2)
            d1 = np.asarray((c[..., 1] - c[..., 3]) % 2)
            if d0.any() or d1.any():
                break
            c = _div_sqrt2(c)
            self.k -= 1
        self.coeffs = kernels.narrow(c)

    def _aligned(self, other: "ExactTensor") -> tuple[np.ndarray, np.ndarray, int]:
        a, b = self.coeffs, other.coeffs
        ka, kb = self.k, other.k
        while ka < kb:
            a = _times_sqrt2(a)
            ka += 1
        while kb < ka:
            b = _times_sqrt2(b)
            kb += 1
        return a, b, ka

    # structural ops ---------------------------------------------------------

    def reshape(self, shape: Sequence[int]) -> "ExactTensor":
        return ExactTensor(self.coeffs.reshape(tuple(shape) + (4,)), self.k, canonical=False)

    def transpose(self, perm: Sequence[int]) -> "ExactTensor":
        perm = tuple(perm) + (len(perm),)
        return ExactTensor(self.coeffs.transpose(perm), self.k, canonical=False)

    # algebra ----------------------------------------------------------------

    def __add__(self, other: "ExactTensor") -> "ExactTensor":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        a, b, k = self._aligned(other)
        return ExactTensor(a + b, k)

    def __neg__(self) -> "ExactTensor":
        return ExactTensor(-self.coeffs, self.k, canonical=False)

    def __sub__(self, other: "ExactTensor") -> "ExactTensor":
        return self + (-other)

    def scale(self, x: ExactScalar) -> "ExactTensor":
        s = np.array(x.coords, dtype=object if _big(x) else np.int64)
        return ExactTensor(kernels.ring_mul_elementwise(self.coeffs, s), self.k + x.k)

    def conj(self) -> "ExactTensor":
        c = self.coeffs
        out = np.stack([c[..., 0], -c[..., 3], -c[..., 2], -c[..., 1]], axis=-1)
        return ExactTensor(out, self.k, canonical=False)

    def matmul(self, other: "ExactTensor") -> "ExactTensor":
        if self.ndim != 2 or other.ndim != 2:
            raise ValueError("matmul needs matrices")
        if self.shape[1] != other.shape[0]:
            raise ValueError(f"dimension mismatch {self.shape} @ {other.shape}")
        return ExactTensor(kernels.ring_matmul(self.coeffs, other.coeffs), self.k + other.k)

    def outer(self, other: "ExactTensor") -> "ExactTensor":
        a = self.coeffs.reshape(self.shape + (1,) * other.ndim + (4,))
        return ExactTensor(kernels.ring_mul_elementwise(a, other.coeffs), self.k + other.k)

    def tensordot(self, other: "ExactTensor", axes_a: Sequence[int], axes_b: Sequence[int]) -> "ExactTensor":
        axes_a, axes_b = list(axes_a), list(axes_b)
        free_a = [i for i in range(self.ndim) if i not in axes_a]
        free_b = [i for i in range(other.ndim) if i not in axes_b]
        sa = [self.shape[i] for i in free_a]
        sb = [other.shape[i] for i in free_b]
        inner = int(np.prod([self.shape[i] for i in axes_a], dtype=np.int64)) if axes_a else 1
        a = self.transpose(free_a + axes_a).coeffs.reshape(-1, inner, 4)
        b = other.transpose(axes_b + free_b).coeffs.reshape(inner, -1, 4)
        out = kernels.ring_matmul(np.ascontiguousarray(a), np.ascontiguousarray(b))
        return ExactTensor(out.reshape(tuple(sa + sb) + (4,)), self.k + other.k)

    def trace(self, axis1: int, axis2: int) -> "ExactTensor":
        d = np.diagonal(self.coeffs, axis1=axis1, axis2=axis2)  # (..., 4, d)
        return ExactTensor(d.sum(axis=-1), self.k)

    def equals(self, other: "ExactTensor") -> bool:
        if self.shape != other.shape:
            return False
        return self.k == other.k and bool(np.array_equal(self.coeffs, other.coeffs))

    def is_zero(self) -> bool:
        return not self.coeffs.any()


def _big(x: ExactScalar) -> bool:
    return any(abs(c) >= 2**31 for c in x.coords)


def _times_sqrt2(c: np.ndarray) -> np.ndarray:
    return np.stack(
        [c[..., 1] - c[..., 3], c[..., 0] + c[..., 2], c[..., 1] + c[..., 3], c[..., 2] - c[..., 0]],
        axis=-1,
    )


def _div_sqrt2(c: np.ndarray) -> np.ndarray:
    return np.stack(
        [
            (c[..., 1] - c[..., 3]) // 2,
            (c[..., 0] + c[..., 2]) // 2,
            (c[..., 1] + c[..., 3]) // 2,
            (c[..., 2] - c[..., 0]) // 2,
        ],
        axis=-1,
    )


Tensor = Union[np.ndarray, ExactTensor]


def is_exact(t: Tensor) -> bool:
    return isinstance(t, ExactTensor)


def shape_of(t: Tensor) -> tuple[int, ...]:
    return t.shape if isinstance(t, ExactTensor) else tuple(t.shape)


def tensordot(a: Tensor, b: Tensor, axes_a: Sequence[int], axes_b: Sequence[int]) -> Tensor:
    if isinstance(a, ExactTensor) and isinstance(b, ExactTensor):
        return a.tensordot(b, axes_a, axes_b)
    if isinstance(a, ExactTensor) or isinstance(b, ExactTensor):
        raise BackendError("cannot contract exact and float tensors together")
    return np.tensordot(a, b, axes=(list(axes_a), list(axes_b)))


def trace_axes(a: Tensor, axis1: int, axis2: int) -> Tensor:
    if isinstance(a, ExactTensor):
        return a.trace(axis1, axis2)
    return np.trace(a, axis1=axis1, axis2=axis2)


def transpose(a: Tensor, perm: Sequence[int]) -> Tensor:
    if isinstance(a, ExactTensor):
        return a.transpose(perm)
    return np.transpose(a, perm)


def reshape(a: Tensor, shape: Sequence[int]) -> Tensor:
    if isinstance(a, ExactTensor):
        return a.reshape(shape)
    return np.reshape(a, tuple(shape))


def to_complex(a: Tensor) -> np.ndarray:
    if isinstance(a, ExactTensor):
        return a.to_complex()
    return np.asarray(a, dtype=complex)


def _check_matrix(a: Tensor, name: str) -> None:
    if len(shape_of(a)) != 2:
        raise ValueError(f"{name}: expected a matrix, got shape {shape_of(a)}")


def mat_mul(a: Tensor, b: Tensor) -> Tensor:
    _check_matrix(a, "mat_mul")
    _check_matrix(b, "mat_mul")
    if shape_of(a)[1] != shape_of(b)[0]:
        raise ValueError(f"mat_mul: dimension mismatch {shape_of(a)} @ {shape_of(b)}")
    if isinstance(a, ExactTensor) and isinstance(b, ExactTensor):
        return a.matmul(b)
    if isinstance(a, ExactTensor) or isinstance(b, ExactTensor):
        raise BackendError("mat_mul: mixed backends")
    return a @ b


def mat_kron(a: Tensor, b: Tensor) -> Tensor:
    _check_matrix(a, "mat_kron")
    _check_matrix(b, "mat_kron")
    if isinstance(a, ExactTensor) and isinstance(b, ExactTensor):
        (r1, c1), (r2, c2) = a.shape, b.shape
        return a.outer(b).transpose((0, 2, 1, 3)).reshape((r1 * r2, c1 * c2))
    if isinstance(a, ExactTensor) or isinstance(b, ExactTensor):
        raise BackendError("mat_kron: mixed backends")
    return np.kron(a, b)


def mat_conj(a: Tensor) -> Tensor:
    if isinstance(a, ExactTensor):
        return a.conj()
    return np.conj(a)


def mat_dagger(a: Tensor) -> Tensor:
    _check_matrix(a, "mat_dagger")
    if isinstance(a, ExactTensor):
        return a.conj().transpose((1, 0))
    return np.conj(a).T


def mat_equal(a: Tensor, b: Tensor, tol: float = 1e-9) -> bool:
    """Exact comparison on the exact backend, entrywise ``|a - b| <= tol`` otherwise."""
    if shape_of(a) != shape_of(b):
        raise ValueError(f"mat_equal: shape mismatch {shape_of(a)} vs {shape_of(b)}")
    if isinstance(a, ExactTensor) and isinstance(b, ExactTensor):
        return a.equals(b)
    return bool(np.all(np.abs(to_complex(a) - to_complex(b)) <= tol))


def max_residual(a: Tensor, b: Tensor) -> float:
    if shape_of(a) != shape_of(b):
        raise ValueError(f"shape mismatch {shape_of(a)} vs {shape_of(b)}")
    diff = np.abs(to_complex(a) - to_complex(b))
    return float(diff.max()) if diff.size else 0.0


def equal_up_to_global_phase(a: Tensor, b: Tensor, tol: float = 1e-9) -> Optional[complex]:
    """Return lam with |lam| = 1 and a = lam * b, or None."""
    ca, cb = to_complex(a), to_complex(b)
    if ca.shape != cb.shape:
        raise ValueError(f"shape mismatch {ca.shape} vs {cb.shape}")
    flat_b = cb.ravel()
    if not flat_b.size:
        return 1.0 + 0j
    idx = int(np.argmax(np.abs(flat_b)))
    if abs(flat_b[idx]) <= tol:
        return (1.0 + 0j) if np.all(np.abs(ca) <= tol) else None
    lam = ca.ravel()[idx] / flat_b[idx]
    if abs(abs(lam) - 1.0) > max(tol, 1e-12) * 10:
        return None
    lam = lam / abs(lam)
    if np.all(np.abs(ca - lam * cb) <= tol):
        return complex(lam)
    return None


def proportionality(a: Tensor, b: Tensor, tol: float = 1e-9) -> Optional[complex]:
    """Return c with a = c * b (c may be any nonzero complex), or None."""
    ca, cb = to_complex(a), to_complex(b)
    flat_b = cb.ravel()
    idx = int(np.argmax(np.abs(flat_b))) if flat_b.size else 0
    if not flat_b.size or abs(flat_b[idx]) <= tol:
        return None
    c = ca.ravel()[idx] / flat_b[idx]
    if abs(c) <= tol:
        return None
    if np.all(np.abs(ca - c * cb) <= tol * max(1.0, abs(c))):
        return complex(c)
    return None


def as_backend(a: Tensor, exact: bool) -> Tensor:
    if exact and not isinstance(a, ExactTensor):
        raise BackendError("cannot convert a float tensor to the exact backend")
    if not exact:
        return to_complex(a)
    return a


def stack_identity(dim: int, exact: bool) -> Tensor:
    return ExactTensor.identity(dim) if exact else np.eye(dim, dtype=complex)


def iter_entries(a: Tensor) -> Iterable:
    if isinstance(a, ExactTensor):
        return a.entries().ravel()
    return np.asarray(a).ravel()

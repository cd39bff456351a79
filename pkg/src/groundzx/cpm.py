"""Completely positive semantics via Choi matrices.

Convention: for a map E from n to m qubits the Choi matrix is

    J[(i, a), (j, b)] = E(|i><j|)[a, b]

with the input index i as the high part of the row index. For a pure map M
this is ``vec(M) vec(M)^dagger`` with column-stacking ``vec``. Applying E is
``E(rho)[a, b] = sum_ij J[(i, a), (j, b)] rho[i, j]``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np

from .diagram import Diagram
from .purify import purify
from .semantics import FLOAT, choose_backend, interp
from .tensors import ExactTensor, Tensor, mat_equal, max_residual, reshape, shape_of, to_complex, transpose

Operand = Union[Diagram, np.ndarray, ExactTensor]


def _log2(x: int) -> int:
    n = int(x).bit_length() - 1
    if 1 << n != x:
        raise ValueError(f"dimension {x} is not a power of two")
    return n


@dataclass(frozen=True)
class Superoperator:
    """A CP map from ``n_in`` to ``n_out`` qubits stored as its Choi matrix."""

    n_in: int
    n_out: int
    choi: Tensor

    @property
    def exact(self) -> bool:
        return isinstance(self.choi, ExactTensor)

    def matrix(self) -> np.ndarray:
        return to_complex(self.choi)

    def equals(self, other: "Superoperator", tol: float = 1e-9) -> bool:
        if (self.n_in, self.n_out) != (other.n_in, other.n_out):
            return False
        if self.exact and other.exact:
            return mat_equal(self.choi, other.choi)
        return bool(np.all(np.abs(self.matrix() - other.matrix()) <= tol))

    def residual(self, other: "Superoperator") -> float:
        return max_residual(self.matrix(), other.matrix())


@dataclass(frozen=True)
class DensityMatrix:
    """A (not necessarily normalised) density matrix on ``n`` qubits."""

    matrix: np.ndarray

    @property
    def n(self) -> int:
        return _log2(self.matrix.shape[0])

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def is_hermitian(self, tol: float = 1e-9) -> bool:
        return bool(np.allclose(self.matrix, self.matrix.conj().T, atol=tol))

    def is_psd(self, tol: float = 1e-9) -> bool:
        h = (self.matrix + self.matrix.conj().T) / 2
        return bool(np.linalg.eigvalsh(h).min() >= -tol) if h.size else True


def _gram(v: Tensor) -> Tensor:
    """v v^dagger for either backend."""
    if isinstance(v, ExactTensor):
        return v.matmul(v.conj().transpose((1, 0)))
    return v @ v.conj().T


def _environment_vectors(m: Tensor, n: int, out: int, anc: int) -> Tensor:
    """Columns vec(M_e) for each ancilla basis state e of the last ``anc`` outputs."""
    t = reshape(m, (2**out, 2**anc, 2**n))
    t = transpose(t, (2, 0, 1))
    return reshape(t, (2 ** (n + out), 2**anc))


def traced_double(m: Tensor, n_traced: int = 0) -> Superoperator:
    """double(M) with its last ``n_traced`` output wires traced out."""
    rows, cols = shape_of(m)
    n, total = _log2(cols), _log2(rows)
    if n_traced > total:
        raise ValueError("cannot trace more wires than there are outputs")
    out = total - n_traced
    v = _environment_vectors(m, n, out, n_traced)
    return Superoperator(n, out, _gram(v))


def double(m: Tensor) -> Superoperator:
    """The map rho -> M rho M^dagger."""
    return traced_double(m, 0)


def _pure_matrix(d: Operand, backend: Optional[str]) -> Tensor:
    if isinstance(d, Diagram):
        return interp(d, choose_backend(d, backend))
    if backend == FLOAT:
        return to_complex(d)
    return d


def interpret_cpm(d: Diagram, backend: Optional[str] = None) -> Superoperator:
    """CP semantics of a diagram; each ground traces out its wire."""
    p = purify(d)
    m = interp(p.pure, choose_backend(p.pure, backend))
    return traced_double(m, p.ancilla_count)


def partial_trace_outputs(s: Superoperator, wires: Sequence[int]) -> Superoperator:
    """Trace out the listed output wires of a superoperator."""
    wires = sorted(set(wires))
    if any(w < 0 or w >= s.n_out for w in wires):
        raise ValueError(f"output wires {wires} out of range for {s.n_out} outputs")
    keep = [w for w in range(s.n_out) if w not in wires]
    n, m = s.n_in, s.n_out
    shape = (2**n,) + (2,) * m
    t = reshape(s.choi, shape + shape)
    # move traced wires to the end on both sides, then contract pairs
    left = [0] + [1 + w for w in keep]
    right = [1 + m + 0] + [2 + m + w for w in keep]
    tl = [1 + w for w in wires]
    tr = [2 + m + w for w in wires]
    t = transpose(t, left + right + tl + tr)
    k = len(wires)
    d_keep = 2 ** (n + len(keep))
    t = reshape(t, (d_keep, d_keep, 2**k, 2**k))
    if isinstance(t, ExactTensor):
        t = t.trace(2, 3)
    else:
        t = np.trace(t, axis1=2, axis2=3)
    return Superoperator(n, len(keep), t)


def apply(s: Superoperator, rho: Union[DensityMatrix, np.ndarray]) -> DensityMatrix:
    """E(rho) by contraction with the Choi matrix."""
    r = rho.matrix if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)
    if r.shape != (2**s.n_in, 2**s.n_in):
        raise ValueError(f"density matrix of shape {r.shape} does not fit a {s.n_in}-qubit input")
    j = s.matrix().reshape(2**s.n_in, 2**s.n_out, 2**s.n_in, 2**s.n_out)
    return DensityMatrix(np.einsum("iajb,ij->ab", j, r))


def choi_of_pure(m: Tensor) -> Tensor:
    """vec(M) vec(M)^dagger."""
    return double(m).choi


def cp_map(d: Operand, n_anc: int = 0, backend: Optional[str] = None) -> Superoperator:
    """tr_X of double(d) where X is the last ``n_anc`` outputs."""
    return traced_double(_pure_matrix(d, backend), n_anc)


def cp_equal(
    f: Operand,
    g: Operand,
    split: tuple[int, int] = (0, 0),
    tol: float = 1e-9,
    backend: Optional[str] = None,
) -> bool:
    """True iff tr_X double(f) = tr_Y double(g).

    ``split = (x, y)`` gives the number of trailing ancilla outputs of f and g.
    Exact when both sides are on the exact backend.
    """
    sf = cp_map(f, split[0], backend)
    sg = cp_map(g, split[1], backend)
    if sf.n_in != sg.n_in or sf.n_out != sg.n_out:
        raise ValueError(
            f"boundary mismatch: f is {sf.n_in}->{sf.n_out}, g is {sg.n_in}->{sg.n_out} after tracing"
        )
    if sf.exact != sg.exact:
        sf = Superoperator(sf.n_in, sf.n_out, sf.matrix())
        sg = Superoperator(sg.n_in, sg.n_out, sg.matrix())
    return sf.equals(sg, tol)


def cp_residual(f: Operand, g: Operand, split: tuple[int, int] = (0, 0), backend: Optional[str] = FLOAT) -> float:
    sf = cp_map(f, split[0], backend)
    sg = cp_map(g, split[1], backend)
    return sf.residual(sg)

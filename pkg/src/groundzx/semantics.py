"""Standard interpretation of ground-free diagrams as matrices.

``interp(d)`` returns a ``2^m x 2^n`` matrix (outputs index rows, inputs
index columns, leftmost wire is the most significant bit). The exact backend
returns an :class:`~groundzx.tensors.ExactTensor`; the float backend a
complex128 array.

Generator conventions, per calculus:

ZX   Z(n,m,a): 1 at 0..0, e^{ia} at 1..1; the (0,0) spider is 1 + e^{ia}.
     X(n,m,a) = H^{(x)m} Z(n,m,a) H^{(x)n}.  H = [[1,1],[1,-1]]/sqrt2.
ZW   Z(n,m,r): 1 at 0..0, r at 1..1; (0,0) is 1 + r.
     W(n,m): 1 where exactly one leg (input or output) carries 1.
     FSwap: swap with -1 on |11>.
ZH   Z(n,m): 1 at 0..0 and 1..1; (0,0) is 2.
     X(n,m) = 1/2 H^{(x)m} Z(n,m) H^{(x)n}.
     HBox(n,m,a): all ones except a at 1..1.   Not = [[0,1],[1,0]].
"""
from __future__ import annotations

import functools
import itertools
from typing import Optional

import numpy as np

from .diagram import Diagram, GroundPresent, Node, Port
from .params import Phase, is_symbolic, weight_to_complex
from .scalars import ExactScalar
from .tensors import (
    ExactTensor,
    Tensor,
    reshape,
    tensordot,
    trace_axes,
    transpose,
)

EXACT = "exact"
FLOAT = "float"
BACKENDS = (EXACT, FLOAT)


class InexactParameter(ValueError):
    """A node parameter has no representation in Z[w, 1/sqrt2]."""


# --- generator tensors ----------------------------------------------------------


def _exact_weight(w) -> ExactScalar:
    if isinstance(w, ExactScalar):
        return w
    if isinstance(w, int) or (isinstance(w, complex) and w == complex(int(w.real), int(w.imag))) or (
        isinstance(w, float) and float(w).is_integer()
    ):
        z = complex(w)
        return ExactScalar.from_gaussian(int(z.real), int(z.imag))
    raise InexactParameter(f"parameter {w!r} is not an exact ring element")


def _exact_phase(p: Phase) -> ExactScalar:
    if not isinstance(p, Phase) or not p.exact_representable:
        raise InexactParameter(f"phase {p} is not a multiple of pi/4")
    return p.exact_unit()


def _corner_tensor(arity: int, low, high, exact: bool) -> Tensor:
    """Tensor with `low` at 0..0 and `high` at 1..1, zero elsewhere.

    With no legs the two corners coincide and the value is low + high.
    """
    if exact:
        if arity == 0:
            return ExactTensor.scalar(low + high)
        pair = ExactTensor.from_scalars([low, high])
        c = np.zeros((2,) * arity + (4,), dtype=pair.coeffs.dtype)
        c[(0,) * arity] = pair.coeffs[0]
        c[(1,) * arity] = pair.coeffs[1]
        return ExactTensor(c, pair.k)
    if arity == 0:
        return np.array(low + high, dtype=complex)
    t = np.zeros((2,) * arity, dtype=complex)
    t[(0,) * arity] = low
    t[(1,) * arity] = high
    return t


def _hadamard(exact: bool) -> Tensor:
    if exact:
        return ExactTensor(np.array([[[1, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0], [-1, 0, 0, 0]]]), 1)
    return np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2.0)


def _apply_on_all_legs(t: Tensor, m: Tensor, arity: int) -> Tensor:
    """Contract the 2x2 matrix m into every leg of t (leg order preserved).

    For an output leg this applies m; for an input leg it applies m^T. The
    Hadamard is symmetric so both coincide where this is used.
    """
    for leg in range(arity):
        # contract m's column index with leg; result leg goes last
        t = tensordot(t, m, [0], [1])
    return t


@functools.lru_cache(maxsize=4096)
def _generator(calculus: str, kind: str, n_in: int, n_out: int, param, exact: bool) -> Tensor:
    arity = n_in + n_out
    if kind == "Ground":
        raise GroundPresent("the pure interpretation is undefined on ground; use interpret_cpm")
    if kind == "Swap":
        return _perm_tensor([1, 0], exact)
    if kind == "Cup" or kind == "Cap":
        return _identity_tensor(exact)
    if calculus == "ZX":
        if kind == "H":
            return _hadamard(exact)
        if kind in ("Z", "X"):
            if exact:
                one, phase = ExactScalar.from_int(1), _exact_phase(param)
            else:
                one, phase = 1.0 + 0j, param.unit()
            z = _corner_tensor(arity, one, phase, exact)
            if kind == "X" and arity:
                z = _apply_on_all_legs(z, _hadamard(exact), arity)
            return z
    elif calculus == "ZW":
        if kind == "Z":
            if exact:
                one, r = ExactScalar.from_int(1), _exact_weight(param)
            else:
                one, r = 1.0 + 0j, weight_to_complex(param)
            return _corner_tensor(arity, one, r, exact)
        if kind == "W":
            return _w_tensor(arity, exact)
        if kind == "FSwap":
            t = _perm_tensor([1, 0], exact)
            if exact:
                c = t.coeffs.copy()
                c[1, 1, 1, 1] = -c[1, 1, 1, 1]
                return ExactTensor(c, t.k)
            t = t.copy()
            t[1, 1, 1, 1] = -1
            return t
    elif calculus == "ZH":
        if kind == "Not":
            if exact:
                return ExactTensor(np.array([[[0, 0, 0, 0], [1, 0, 0, 0]], [[1, 0, 0, 0], [0, 0, 0, 0]]]), 0)
            return np.array([[0, 1], [1, 0]], dtype=complex)
        if kind in ("Z", "X"):
            one = ExactScalar.from_int(1) if exact else 1.0 + 0j
            z = _corner_tensor(arity, one, one, exact)
            if kind == "X":
                if arity:
                    z = _apply_on_all_legs(z, _hadamard(exact), arity)
                half = ExactScalar.sqrt2_power(-2)
                z = z.scale(half) if exact else z * 0.5
            return z
        if kind == "HBox":
            if exact:
                a = _exact_weight(param)
                if arity == 0:
                    return ExactTensor.scalar(a)
                ones = [ExactScalar.from_int(1)] * (2**arity - 1) + [a]
                return ExactTensor.from_scalars(ones, (2,) * arity)
            a = weight_to_complex(param)
            if arity == 0:
                return np.array(a, dtype=complex)
            t = np.ones((2,) * arity, dtype=complex)
            t[(1,) * arity] = a
            return t
    raise ValueError(f"no interpretation for {kind} in {calculus}")


def _identity_tensor(exact: bool) -> Tensor:
    if exact:
        return ExactTensor.identity(2)
    return np.eye(2, dtype=complex)


def _perm_tensor(perm, exact: bool) -> Tensor:
    """Tensor [out_0..out_{k-1}, in_0..in_{k-1}] with out_{perm[j]} = in_j."""
    k = len(perm)
    t = np.zeros((2,) * (2 * k), dtype=np.int64)
    for bits in itertools.product((0, 1), repeat=k):
        outs = [0] * k
        for j, b in enumerate(bits):
            outs[perm[j]] = b
        t[tuple(outs) + bits] = 1
    if exact:
        c = np.zeros(t.shape + (4,), dtype=np.int64)
        c[..., 0] = t
        return ExactTensor(c, 0)
    return t.astype(complex)


def _w_tensor(arity: int, exact: bool) -> Tensor:
    t = np.zeros((2,) * arity, dtype=np.int64)
    for leg in range(arity):
        idx = [0] * arity
        idx[leg] = 1
        t[tuple(idx)] = 1
    if exact:
        c = np.zeros(t.shape + (4,), dtype=np.int64)
        c[..., 0] = t
        return ExactTensor(c, 0)
    return t.astype(complex)


def generator_tensor(calculus: str, node: Node, backend: str = FLOAT) -> Tensor:
    """Tensor of one node with axes ordered [outputs..., inputs...]."""
    if is_symbolic(node.param):
        raise ValueError("cannot interpret a symbolic (template) node; instantiate it first")
    return _generator(calculus, node.kind, node.n_in, node.n_out, node.param, backend == EXACT)


def generator_matrix(calculus: str, node: Node, backend: str = FLOAT) -> Tensor:
    t = generator_tensor(calculus, node, backend)
    return reshape(t, (2**node.n_out, 2**node.n_in))


# --- contraction ------------------------------------------------------------------


def _node_axes_labels(d: Diagram, v: int, label: dict) -> list:
    n = d.nodes[v]
    return [label[Port(v, "out", j)] for j in range(n.n_out)] + [label[Port(v, "in", j)] for j in range(n.n_in)]


def _labelled_network(d: Diagram, backend: str):
    exact = backend == EXACT
    label: dict[Port, int] = {}
    tensors: list[tuple[Tensor, list[int]]] = []
    next_label = 0
    for a, b in d.wires:
        if a.node is None and b.node is None:
            la, lb = next_label, next_label + 1
            next_label += 2
            label[a], label[b] = la, lb
            tensors.append((_identity_tensor(exact), [la, lb]))
        else:
            label[a] = label[b] = next_label
            next_label += 1
    for v, node in d.nodes.items():
        tensors.append((generator_tensor(d.calculus, node, backend), _node_axes_labels(d, v, label)))
    open_labels = [label[p] for p in d.outputs] + [label[p] for p in d.inputs]
    return tensors, open_labels


def _self_trace(t: Tensor, labels: list[int]) -> tuple[Tensor, list[int]]:
    while True:
        seen: dict[int, int] = {}
        pair = None
        for i, l in enumerate(labels):
            if l in seen:
                pair = (seen[l], i)
                break
            seen[l] = i
        if pair is None:
            return t, labels
        i, j = pair
        t = trace_axes(t, i, j)
        labels = [l for k, l in enumerate(labels) if k not in (i, j)]


def _contract_pair(a, la, b, lb):
    shared = [l for l in la if l in lb]
    axes_a = [la.index(l) for l in shared]
    axes_b = [lb.index(l) for l in shared]
    t = tensordot(a, b, axes_a, axes_b)
    labels = [l for l in la if l not in shared] + [l for l in lb if l not in shared]
    return _self_trace(t, labels)


def contract(tensors: list[tuple[Tensor, list[int]]], open_labels: list[int], order: str = "greedy") -> Tensor:
    """Contract a labelled network. ``order`` is 'greedy' or 'sequential'."""
    work = [_self_trace(t, list(l)) for t, l in tensors]
    if not work:
        raise ValueError("empty network")
    while len(work) > 1:
        if order == "sequential":
            i, j = 0, 1
        else:
            best = None
            for i0 in range(len(work)):
                for j0 in range(i0 + 1, len(work)):
                    la, lb = work[i0][1], work[j0][1]
                    shared = len(set(la) & set(lb))
                    size = len(la) + len(lb) - 2 * shared
                    key = (0 if shared else 1, size, i0, j0)
                    if best is None or key < best[0]:
                        best = (key, i0, j0)
            _, i, j = best
        a, la = work[i]
        b, lb = work[j]
        merged = _contract_pair(a, la, b, lb)
        work = [w for k, w in enumerate(work) if k not in (i, j)] + [merged]
    t, labels = work[0]
    if sorted(labels) != sorted(open_labels):
        raise ValueError("contraction left unexpected open indices")
    perm = [labels.index(l) for l in open_labels]
    return transpose(t, perm) if perm else t


def interp(d: Diagram, backend: str = FLOAT, order: str = "greedy") -> Tensor:
    """The standard interpretation of a ground-free diagram as a matrix."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    if d.contains_ground:
        raise GroundPresent("diagram contains ground; use interpret_cpm (cpm-interp)")
    exact = backend == EXACT
    tensors, open_labels = _labelled_network(d, backend)
    one = ExactTensor.scalar(ExactScalar.from_int(1)) if exact else np.array(1.0 + 0j)
    tensors.append((one, []))
    t = contract(tensors, open_labels, order)
    return reshape(t, (2**d.n_out, 2**d.n_in))


def exact_representable(d: Diagram) -> bool:
    """True when every parameter of d has an exact ring interpretation."""
    for n in d.nodes.values():
        p = n.param
        if p is None:
            continue
        if isinstance(p, Phase):
            if not p.exact_representable:
                return False
        else:
            try:
                _exact_weight(p)
            except InexactParameter:
                return False
    return True


def choose_backend(d: Diagram, requested: Optional[str] = None) -> str:
    if requested is not None:
        return requested
    return EXACT if exact_representable(d) else FLOAT

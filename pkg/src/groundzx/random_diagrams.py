"""Seeded random diagrams for property tests and fuzzing."""
from __future__ import annotations

from typing import Optional

import numpy as np

from . import builders as B
from .diagram import Diagram, Node, compose_all, identity, permutation, single, tensor, tensor_all
from .params import Phase
from .scalars import ExactScalar


def _phase(rng: np.random.Generator) -> Phase:
    return Phase.pi(int(rng.integers(8)), 4)


def _weight(rng: np.random.Generator) -> ExactScalar:
    return ExactScalar.omega_power(int(rng.integers(8)))


def _gate(calculus: str, rng: np.random.Generator, width: int) -> tuple[Diagram, int]:
    """A random 1->1 or 2->2 generator-level gate; returns (gate, arity)."""
    two = width >= 2 and rng.random() < 0.3
    if calculus == "ZX":
        if two:
            g = tensor(B.z_spider(1, 2), identity(1)) >> tensor(identity(1), B.x_spider(2, 1))
            return g, 2
        k = int(rng.integers(3))
        g = [B.z_spider(1, 1, _phase(rng)), B.x_spider(1, 1, _phase(rng)), single("ZX", Node("H", 1, 1))][k]
        return g, 1
    if calculus == "ZW":
        if two:
            return B.fswap(), 2
        k = int(rng.integers(2))
        return [B.zw_z(1, 1, _weight(rng)), B.w_node(1, 1)][k], 1
    if two:
        return tensor(B.z_spider(1, 2, calculus="ZH"), identity(1, "ZH")) >> tensor(
            identity(1, "ZH"), B.h_box(2, 1)
        ), 2
    k = int(rng.integers(2))
    return [B.h_box(1, 1, _weight(rng)), B.negation()][k], 1


def random_layer(calculus: str, width: int, rng: np.random.Generator) -> Diagram:
    """One random gate placed on random wires, then a random wire permutation."""
    g, k = _gate(calculus, rng, width)
    targets = [int(x) for x in rng.choice(width, size=k, replace=False)]
    d = B.embed(g, targets, width)
    if width > 1 and rng.random() < 0.3:
        d = d >> permutation([int(x) for x in rng.permutation(width)], calculus)
    return d


def random_context(
    core: Diagram,
    rng: np.random.Generator,
    max_wires: int = 4,
    max_nodes: int = 20,
) -> Diagram:
    """Wrap ``core`` (plus spare identity wires) in random layers before and after."""
    spare_max = max(0, max_wires - max(core.n_in, core.n_out))
    spare = int(rng.integers(spare_max + 1))
    mid = tensor(core, identity(spare, core.calculus)) if spare else core
    budget = max(0, max_nodes - len(core.nodes))
    pre = identity(mid.n_in, core.calculus)
    post = identity(mid.n_out, core.calculus)
    for _ in range(int(rng.integers(4))):
        if mid.n_in == 0:
            break
        layer = random_layer(core.calculus, mid.n_in, rng)
        if len(pre.nodes) + len(post.nodes) + len(layer.nodes) > budget:
            break
        pre = pre >> layer
    for _ in range(int(rng.integers(4))):
        if mid.n_out == 0:
            break
        layer = random_layer(core.calculus, mid.n_out, rng)
        if len(pre.nodes) + len(post.nodes) + len(layer.nodes) > budget:
            break
        post = post >> layer
    return compose_all([pre, mid, post])


def random_ground_diagram(
    rng: np.random.Generator,
    calculus: str = "ZX",
    max_boundary: int = 4,
    max_nodes: int = 15,
) -> Diagram:
    """A random diagram with grounds, at most ``max_boundary`` boundary wires in total.

    Built layer by layer from spiders with pi/4 phases, states, grounds and
    the calculus' gates, keeping the working width at most 4.
    """
    n_in = int(rng.integers(0, max_boundary + 1))
    n_out_target = int(rng.integers(0, max_boundary - n_in + 1))
    d = identity(n_in, calculus)
    width = n_in
    while len(d.nodes) < max_nodes - 3:
        r = rng.random()
        if width == 0 or (r < 0.2 and width < 4):
            layer = tensor(identity(width, calculus), _state(calculus, rng))
        elif r < 0.35:
            w = int(rng.integers(width))
            layer = _place(B.ground(1, calculus), w, width)
        elif r < 0.5 and width >= 2 and width < 4 and calculus != "ZW":
            layer = _spider_mix(calculus, width, rng)
        else:
            layer = random_layer(calculus, width, rng)
        if len(d.nodes) + len(layer.nodes) > max_nodes:
            break
        d = d >> layer
        width = d.n_out
        if rng.random() < 0.1:
            break
    # bring the width to the target
    while width > n_out_target:
        d = d >> _place(B.ground(1, calculus), width - 1, width)
        width -= 1
    while width < n_out_target:
        d = d >> tensor(identity(width, calculus), _state(calculus, rng))
        width += 1
    return d


def _place(g: Diagram, w: int, width: int) -> Diagram:
    """g on the wires starting at position w (clipped to fit)."""
    w = min(w, width - g.n_in)
    parts = [identity(w, g.calculus), g, identity(width - w - g.n_in, g.calculus)]
    return tensor_all(parts)


def _state(calculus: str, rng: np.random.Generator) -> Diagram:
    if calculus == "ZX":
        kind = "Z" if rng.random() < 0.5 else "X"
        return single("ZX", Node(kind, 0, 1, _phase(rng)))
    if calculus == "ZW":
        return B.zw_z(0, 1, _weight(rng)) if rng.random() < 0.5 else B.w_node(0, 1)
    return B.h_box(0, 1, _weight(rng)) if rng.random() < 0.5 else B.z_spider(0, 1, calculus="ZH")


def _spider_mix(calculus: str, width: int, rng: np.random.Generator) -> Diagram:
    """A spider joining two wires into one, or splitting one wire into two."""
    if rng.random() < 0.5:
        node = Node("Z", 2, 1, _phase(rng) if calculus == "ZX" else None)
        g = single(calculus, node)
        return _place(g, 0, width)
    node = Node("X" if calculus == "ZX" else "Z", 1, 2, _phase(rng) if calculus == "ZX" else None)
    return _place(single(calculus, node), int(rng.integers(width)), width)


ISOMETRY_GATES = ("h", "s", "t", "cnot", "rz", "ket0")


def random_isometric_circuit(
    rng: np.random.Generator,
    max_qubits: int = 3,
    max_gates: int = 10,
    calculus: str = "ZX",
) -> Diagram:
    """A word in h, s, t, cnot, rz and ket0 (which adds a qubit)."""
    width = int(rng.integers(1, max_qubits + 1))
    d = identity(width, calculus)
    for _ in range(int(rng.integers(1, max_gates + 1))):
        name = ISOMETRY_GATES[int(rng.integers(len(ISOMETRY_GATES)))]
        if name == "ket0":
            if width >= max_qubits:
                continue
            d = d >> tensor(identity(width, calculus), B.ket0(calculus))
            width += 1
            continue
        if name == "cnot":
            if width < 2:
                continue
            a, b = (int(x) for x in rng.choice(width, size=2, replace=False))
            d = d >> B.embed(B.cnot(calculus), [a, b], width)
            continue
        gate = B.rz(_phase(rng), calculus) if name == "rz" else B.GATES[name](calculus)
        d = d >> B.embed(gate, [int(rng.integers(width))], width)
    return d


def random_isometry(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    """Haar-like random isometry C^n -> C^m (n <= m)."""
    z = rng.normal(size=(m, n)) + 1j * rng.normal(size=(m, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_matrix(rng: np.random.Generator, rows: int, cols: int) -> np.ndarray:
    return rng.normal(size=(rows, cols)) + 1j * rng.normal(size=(rows, cols))


def random_tensor_diagram(rng: np.random.Generator, calculus: str = "ZX", width: Optional[int] = None) -> Diagram:
    """A random pure circuit-like diagram on a fixed width."""
    width = width or int(rng.integers(1, 4))
    return compose_all([identity(width, calculus)] + [random_layer(calculus, width, rng) for _ in range(4)])


__all__ = [
    "random_context",
    "random_ground_diagram",
    "random_isometric_circuit",
    "random_isometry",
    "random_layer",
    "random_matrix",
    "random_tensor_diagram",
]

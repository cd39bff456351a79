"""Purification: trade every ground node for an extra output wire."""
from __future__ import annotations

from dataclasses import dataclass

from .diagram import Diagram, Port


@dataclass(frozen=True)
class PurificationResult:
    """``pure`` has the original outputs followed by ``ancilla_count`` ancillas.

    ``placement`` lists (ground node id, ancilla output index) in scan order.
    """

    pure: Diagram
    ancilla_count: int
    placement: tuple[tuple[int, int], ...]


def purify(d: Diagram) -> PurificationResult:
    """Remove grounds in ascending node id; each one's wire becomes a new output."""
    grounds = [v for v, n in d.nodes.items() if n.kind == "Ground"]
    if not grounds:
        return PurificationResult(d, 0, ())
    nodes = {v: n for v, n in d.nodes.items() if n.kind != "Ground"}
    gset = set(grounds)
    wires = []
    target = {}
    for k, v in enumerate(grounds):
        target[Port(v, "in", 0)] = Port(None, "out", d.n_out + k)
    for a, b in d.wires:
        a = target.get(a, a)
        b = target.get(b, b)
        wires.append((a, b))
    assert not any(p.node in gset for w in wires for p in w)
    pure = Diagram(d.calculus, nodes, wires, d.n_in, d.n_out + len(grounds))
    placement = tuple((v, d.n_out + k) for k, v in enumerate(grounds))
    return PurificationResult(pure, len(grounds), placement)

"""Open-graph string diagrams over the ZX, ZW and ZH generators.

A :class:`Diagram` is a set of generator nodes, each with ordered input and
output ports, plus ordered input/output boundaries. Every port (node port or
boundary port) lies on exactly one wire; a wire joins two distinct ports.
Wires may join boundary ports directly (identities, bare cups and caps) and
may join two ports of the same node.

Values are immutable. All operations return new diagrams.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Iterator, Mapping, NamedTuple, Optional, Sequence

from .params import Phase, conj_weight, is_symbolic

CALCULI = ("ZX", "ZW", "ZH")

STRUCTURAL = frozenset({"Swap", "Cup", "Cap", "Ground"})
CALCULUS_KINDS = {
    "ZX": frozenset({"Z", "X", "H"}),
    "ZW": frozenset({"Z", "W", "FSwap"}),
    "ZH": frozenset({"Z", "X", "HBox", "Not"}),
}
# kinds whose legs can be permuted within a side without changing semantics
SYMMETRIC_KINDS = {
    "ZX": frozenset({"Z", "X"}),
    "ZW": frozenset({"Z", "W"}),
    "ZH": frozenset({"Z", "X", "HBox"}),
}
FIXED_ARITY = {
    "H": (1, 1),
    "FSwap": (2, 2),
    "Not": (1, 1),
    "Swap": (2, 2),
    "Cup": (2, 0),
    "Cap": (0, 2),
    "Ground": (1, 0),
}


class DiagramError(ValueError):
    """Raised for ill-formed diagram operations."""


class CalculusMismatch(DiagramError):
    pass


class ArityMismatch(DiagramError):
    pass


class GroundPresent(DiagramError):
    """The operation is only defined on ground-free (pure) diagrams."""


@dataclass(frozen=True)
class Node:
    """One generator instance.

    ``param`` is a :class:`Phase` for ZX spiders, a complex weight for ZW
    Z-nodes and ZH H-boxes, and ``None`` otherwise.
    """

    kind: str
    n_in: int
    n_out: int
    param: Any = None

    def __post_init__(self):
        if self.n_in < 0 or self.n_out < 0:
            raise DiagramError(f"negative arity for {self.kind}")

    def __str__(self) -> str:
        p = "" if self.param is None else f", {self.param}"
        return f"{self.kind}({self.n_in},{self.n_out}{p})"


class Port(NamedTuple):
    """A port: ``node is None`` for boundary ports.

    Boundary port ``Port(None, "in", j)`` is input j of the diagram; node port
    ``Port(v, "in", j)`` is input j of node v.
    """

    node: Optional[int]
    side: str
    index: int

    def key(self) -> tuple:
        return (-1 if self.node is None else self.node, 0 if self.side == "in" else 1, self.index)

    def __str__(self) -> str:
        where = "boundary" if self.node is None else f"node {self.node}"
        return f"{where}.{self.side}[{self.index}]"


def _wire_key(w: tuple[Port, Port]) -> tuple:
    return (w[0].key(), w[1].key())


def _norm_wire(a: Port, b: Port) -> tuple[Port, Port]:
    return (a, b) if a.key() <= b.key() else (b, a)


class Diagram:
    """An open string diagram. Construct with the builders or :meth:`make`."""

    __slots__ = ("calculus", "_nodes", "_wires", "n_in", "n_out", "_partner", "_hash")

    def __init__(
        self,
        calculus: str,
        nodes: Mapping[int, Node],
        wires: Iterable[tuple[Port, Port]],
        n_in: int,
        n_out: int,
    ):
        if calculus not in CALCULI:
            raise DiagramError(f"unknown calculus {calculus!r}; expected one of {CALCULI}")
        self.calculus = calculus
        self._nodes = dict(sorted(nodes.items()))
        self._wires = tuple(sorted((_norm_wire(Port(*a), Port(*b)) for a, b in wires), key=_wire_key))
        self.n_in = int(n_in)
        self.n_out = int(n_out)
        self._partner: Optional[dict[Port, Port]] = None
        self._hash: Optional[int] = None

    # --- views -------------------------------------------------------------

    @property
    def nodes(self) -> Mapping[int, Node]:
        return self._nodes

    @property
    def wires(self) -> tuple[tuple[Port, Port], ...]:
        return self._wires

    @property
    def inputs(self) -> list[Port]:
        return [Port(None, "in", j) for j in range(self.n_in)]

    @property
    def outputs(self) -> list[Port]:
        return [Port(None, "out", j) for j in range(self.n_out)]

    @property
    def num_inputs(self) -> int:
        return self.n_in

    @property
    def num_outputs(self) -> int:
        return self.n_out

    @property
    def contains_ground(self) -> bool:
        return any(n.kind == "Ground" for n in self._nodes.values())

    def partner(self, port: Port) -> Port:
        if self._partner is None:
            p: dict[Port, Port] = {}
            for a, b in self._wires:
                p[a] = b
                p[b] = a
            self._partner = p
        return self._partner[port]

    def node_ports(self, v: int) -> list[Port]:
        n = self._nodes[v]
        return [Port(v, "in", j) for j in range(n.n_in)] + [Port(v, "out", j) for j in range(n.n_out)]

    def all_ports(self) -> Iterator[Port]:
        yield from self.inputs
        yield from self.outputs
        for v in self._nodes:
            yield from self.node_ports(v)

    def next_id(self) -> int:
        return max(self._nodes, default=-1) + 1

    def is_symbolic(self) -> bool:
        return any(is_symbolic(n.param) for n in self._nodes.values())

    # --- equality ----------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Diagram):
            return NotImplemented
        return (
            self.calculus == other.calculus
            and self.n_in == other.n_in
            and self.n_out == other.n_out
            and self._nodes == other._nodes
            and self._wires == other._wires
        )

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.calculus, self.n_in, self.n_out, tuple(self._nodes.items()), self._wires))
        return self._hash

    def __repr__(self) -> str:
        return f"<Diagram {self.calculus} {self.n_in}->{self.n_out}, {len(self._nodes)} nodes>"

    def dump(self) -> str:
        """Debug text dump."""
        lines = [f"{self.calculus} diagram {self.n_in} -> {self.n_out}"]
        for v, n in self._nodes.items():
            lines.append(f"  {v}: {n}")
        for a, b in self._wires:
            lines.append(f"  {a} -- {b}")
        return "\n".join(lines)

    # --- combinators -------------------------------------------------------

    def then(self, other: "Diagram") -> "Diagram":
        """``self`` followed by ``other`` (i.e. ``compose(other, self)``)."""
        return compose(other, self)

    def __rshift__(self, other: "Diagram") -> "Diagram":
        return compose(other, self)

    def __matmul__(self, other: "Diagram") -> "Diagram":
        return tensor(self, other)

    def relabel(self, offset: int) -> "Diagram":
        """Shift every node id by ``offset``."""
        if offset == 0:
            return self

        def sh(p: Port) -> Port:
            return p if p.node is None else Port(p.node + offset, p.side, p.index)

        return Diagram(
            self.calculus,
            {v + offset: n for v, n in self._nodes.items()},
            [(sh(a), sh(b)) for a, b in self._wires],
            self.n_in,
            self.n_out,
        )

    def compact(self) -> "Diagram":
        """Renumber nodes as 0..N-1 preserving their order."""
        mapping = {v: i for i, v in enumerate(self._nodes)}
        return self.renumber(mapping)

    def renumber(self, mapping: Mapping[int, int]) -> "Diagram":
        def sh(p: Port) -> Port:
            return p if p.node is None else Port(mapping[p.node], p.side, p.index)

        return Diagram(
            self.calculus,
            {mapping[v]: n for v, n in self._nodes.items()},
            [(sh(a), sh(b)) for a, b in self._wires],
            self.n_in,
            self.n_out,
        )

    @classmethod
    def make(
        cls,
        calculus: str,
        nodes: Sequence[Node],
        wires: Iterable[tuple[tuple, tuple]],
        n_in: int,
        n_out: int,
    ) -> "Diagram":
        """Build from a node list (ids 0..) and wires given as port tuples."""
        return cls(calculus, dict(enumerate(nodes)), [(Port(*a), Port(*b)) for a, b in wires], n_in, n_out)


# --- wiring resolution -------------------------------------------------------


def loop_nodes(calculus: str, start_id: int, count: int) -> tuple[dict[int, Node], list[tuple[Port, Port]]]:
    """Closed wire loops, each represented as a Cap feeding a Cup."""
    nodes: dict[int, Node] = {}
    wires: list[tuple[Port, Port]] = []
    for i in range(count):
        cap, cup = start_id + 2 * i, start_id + 2 * i + 1
        nodes[cap] = Node("Cap", 0, 2)
        nodes[cup] = Node("Cup", 2, 0)
        wires.append((Port(cap, "out", 0), Port(cup, "in", 0)))
        wires.append((Port(cap, "out", 1), Port(cup, "in", 1)))
    return nodes, wires


def resolve_links(edges: Iterable[tuple[Any, Any]], virtual: set) -> tuple[list[tuple[Any, Any]], int]:
    """Contract degree-2 virtual endpoints out of an edge list.

    Every endpoint has degree 1 (real) or 2 (virtual). Returns the resulting
    real-to-real edges and the number of closed loops made only of virtual
    endpoints.
    """
    edges = list(edges)
    incident: dict[Any, list[int]] = {}
    for i, (a, b) in enumerate(edges):
        incident.setdefault(a, []).append(i)
        incident.setdefault(b, []).append(i)

    def other(i: int, end: Any) -> Any:
        a, b = edges[i]
        return b if a == end else a

    used = [False] * len(edges)
    out: list[tuple[Any, Any]] = []
    for start in incident:
        if start in virtual:
            continue
        (e,) = incident[start]
        if used[e]:
            continue
        cur = start
        while True:
            used[e] = True
            cur = other(e, cur)
            if cur not in virtual:
                break
            e1, e2 = incident[cur]
            e = e2 if e1 == e else e1
        out.append((start, cur))
    loops = 0
    for i in range(len(edges)):
        if used[i]:
            continue
        loops += 1
        e, cur = i, edges[i][0]
        while not used[e]:
            used[e] = True
            cur = other(e, cur)
            e1, e2 = incident[cur]
            e = e2 if e1 == e else e1
    return out, loops


# --- operations ---------------------------------------------------------------


def _check_calculus(d1: Diagram, d2: Diagram) -> None:
    if d1.calculus != d2.calculus:
        raise CalculusMismatch(f"cannot combine {d1.calculus} and {d2.calculus} diagrams")


def compose(d2: Diagram, d1: Diagram) -> Diagram:
    """Sequential composition: d1 first, then d2."""
    _check_calculus(d1, d2)
    if d1.n_out != d2.n_in:
        raise ArityMismatch(f"compose: {d1.n_out} outputs feed {d2.n_in} inputs")
    offset = d1.next_id()
    d2 = d2.relabel(offset)
    nodes = dict(d1.nodes)
    nodes.update(d2.nodes)

    # tag ports by origin so boundaries of d1 and d2 stay distinct
    edges = []
    for a, b in d1.wires:
        edges.append((("1", a), ("1", b)))
    for a, b in d2.wires:
        edges.append((("2", a), ("2", b)))
    for j in range(d1.n_out):
        edges.append((("1", Port(None, "out", j)), ("2", Port(None, "in", j))))
    virtual = {("1", Port(None, "out", j)) for j in range(d1.n_out)}
    virtual |= {("2", Port(None, "in", j)) for j in range(d2.n_in)}
    links, loops = resolve_links(edges, virtual)
    wires = [(a[1], b[1]) for a, b in links]
    ln, lw = loop_nodes(d1.calculus, max(nodes, default=-1) + 1, loops)
    nodes.update(ln)
    return Diagram(d1.calculus, nodes, wires + lw, d1.n_in, d2.n_out)


def tensor(d1: Diagram, d2: Diagram) -> Diagram:
    """Parallel composition, d1 on the left."""
    _check_calculus(d1, d2)
    d2 = d2.relabel(d1.next_id())

    def sh(p: Port) -> Port:
        if p.node is not None:
            return p
        return Port(None, p.side, p.index + (d1.n_in if p.side == "in" else d1.n_out))

    nodes = dict(d1.nodes)
    nodes.update(d2.nodes)
    wires = list(d1.wires) + [(sh(a), sh(b)) for a, b in d2.wires]
    return Diagram(d1.calculus, nodes, wires, d1.n_in + d2.n_in, d1.n_out + d2.n_out)


def tensor_all(diagrams: Sequence[Diagram], calculus: Optional[str] = None) -> Diagram:
    if not diagrams:
        if calculus is None:
            raise DiagramError("tensor_all of nothing needs a calculus")
        return empty(calculus)
    out = diagrams[0]
    for d in diagrams[1:]:
        out = tensor(out, d)
    return out


def compose_all(diagrams: Sequence[Diagram]) -> Diagram:
    """Compose left to right: diagrams[0] is applied first."""
    out = diagrams[0]
    for d in diagrams[1:]:
        out = compose(d, out)
    return out


def _mirror_port(p: Port) -> Port:
    return Port(p.node, "out" if p.side == "in" else "in", p.index)


def _dagger_node(calculus: str, n: Node) -> Node:
    if n.kind == "Cup":
        return Node("Cap", 0, 2)
    if n.kind == "Cap":
        return Node("Cup", 2, 0)
    param = None if n.param is None else _conj_param(n.param)
    return Node(n.kind, n.n_out, n.n_in, param)


def _conj_param(p: Any) -> Any:
    if is_symbolic(p):
        return p.conjugate()
    if isinstance(p, Phase):
        return -p
    return conj_weight(p)


def dagger(d: Diagram) -> Diagram:
    """Mirror the diagram and take the adjoint of every generator."""
    if d.contains_ground:
        raise GroundPresent("dagger is undefined on diagrams containing ground")
    nodes = {v: _dagger_node(d.calculus, n) for v, n in d.nodes.items()}
    wires = [(_mirror_port(a), _mirror_port(b)) for a, b in d.wires]
    return Diagram(d.calculus, nodes, wires, d.n_out, d.n_in)


def conjugate(d: Diagram) -> Diagram:
    """Entrywise complex conjugate of the interpretation; structure unchanged."""
    nodes = {}
    for v, n in d.nodes.items():
        nodes[v] = n if n.param is None else Node(n.kind, n.n_in, n.n_out, _conj_param(n.param))
    return Diagram(d.calculus, nodes, d.wires, d.n_in, d.n_out)


def transpose_diagram(d: Diagram) -> Diagram:
    """Upside-down flip: dagger followed by conjugate (phases unchanged)."""
    nodes = {}
    for v, n in d.nodes.items():
        if n.kind == "Cup":
            nodes[v] = Node("Cap", 0, 2)
        elif n.kind == "Cap":
            nodes[v] = Node("Cup", 2, 0)
        elif n.kind == "Ground":
            raise GroundPresent("cannot flip a diagram containing ground")
        else:
            nodes[v] = Node(n.kind, n.n_out, n.n_in, n.param)
    wires = [(_mirror_port(a), _mirror_port(b)) for a, b in d.wires]
    return Diagram(d.calculus, nodes, wires, d.n_out, d.n_in)


def swap_colours(d: Diagram) -> Diagram:
    """Exchange Z and X spiders (ZX only)."""
    if d.calculus != "ZX":
        raise DiagramError("colour swap is defined for ZX diagrams")
    nodes = {}
    for v, n in d.nodes.items():
        kind = {"Z": "X", "X": "Z"}.get(n.kind, n.kind)
        nodes[v] = Node(kind, n.n_in, n.n_out, n.param)
    return Diagram(d.calculus, nodes, d.wires, d.n_in, d.n_out)


# --- builders shared by every calculus -------------------------------------------


def empty(calculus: str) -> Diagram:
    return Diagram(calculus, {}, [], 0, 0)


def identity(n: int = 1, calculus: str = "ZX") -> Diagram:
    wires = [(Port(None, "in", j), Port(None, "out", j)) for j in range(n)]
    return Diagram(calculus, {}, wires, n, n)


def single(calculus: str, node: Node) -> Diagram:
    """A diagram consisting of one node wired straight to the boundary."""
    wires = [(Port(None, "in", j), Port(0, "in", j)) for j in range(node.n_in)]
    wires += [(Port(0, "out", j), Port(None, "out", j)) for j in range(node.n_out)]
    return Diagram(calculus, {0: node}, wires, node.n_in, node.n_out)


def ground(n: int = 1, calculus: str = "ZX") -> Diagram:
    """Discard n wires: n parallel Ground nodes."""
    return tensor_all([single(calculus, Node("Ground", 1, 0)) for _ in range(n)], calculus)


def permutation(perm: Sequence[int], calculus: str = "ZX") -> Diagram:
    """Wire permutation sending input j to output perm[j]."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise DiagramError(f"not a permutation: {perm}")
    wires = [(Port(None, "in", j), Port(None, "out", perm[j])) for j in range(n)]
    return Diagram(calculus, {}, wires, n, n)


# --- validation ----------------------------------------------------------------


@dataclass(frozen=True)
class Violation:
    kind: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind}: {self.detail}"


def _param_ok(calculus: str, n: Node) -> bool:
    if is_symbolic(n.param):
        return True
    if calculus == "ZX" and n.kind in ("Z", "X"):
        return isinstance(n.param, Phase)
    if calculus == "ZW" and n.kind == "Z":
        return n.param is not None and not isinstance(n.param, Phase)
    if calculus == "ZH" and n.kind == "HBox":
        return n.param is not None and not isinstance(n.param, Phase)
    return n.param is None


def validate(d: Diagram) -> list[Violation]:
    """Return every invariant violation; empty iff the diagram is well formed."""
    out: list[Violation] = []
    allowed = CALCULUS_KINDS[d.calculus] | STRUCTURAL
    for v, n in d.nodes.items():
        if n.kind not in allowed:
            out.append(Violation("CalculusMismatch", f"node {v} kind {n.kind} not in {d.calculus}"))
            continue
        if n.kind in FIXED_ARITY and (n.n_in, n.n_out) != FIXED_ARITY[n.kind]:
            out.append(Violation("ArityError", f"node {v} {n.kind} must be {FIXED_ARITY[n.kind]}"))
        if not _param_ok(d.calculus, n):
            out.append(Violation("BadParameter", f"node {v} {n.kind} has parameter {n.param!r}"))
    valid_ports = set(d.all_ports())
    seen: dict[Port, int] = {}
    for i, (a, b) in enumerate(d.wires):
        if a == b:
            out.append(Violation("SelfWire", f"wire {i} joins {a} to itself"))
        for p in (a, b):
            if p not in valid_ports:
                out.append(Violation("UnknownPort", f"wire {i} references {p}"))
            seen[p] = seen.get(p, 0) + 1
    for p in sorted(valid_ports, key=Port.key):
        c = seen.get(p, 0)
        if c == 0:
            out.append(Violation("DanglingPort", f"{p} is not wired"))
        elif c > 1:
            out.append(Violation("DuplicatePort", f"{p} lies on {c} wires"))
    return out


def is_valid(d: Diagram) -> bool:
    return not validate(d)


def arrow_metadata(d: Diagram) -> dict:
    return {"num_inputs": d.n_in, "num_outputs": d.n_out, "contains_ground": d.contains_ground}


def iter_node_items(d: Diagram) -> Iterator[tuple[int, Node]]:
    return iter(d.nodes.items())


def count_kinds(d: Diagram) -> dict[str, int]:
    out: dict[str, int] = {}
    for n in d.nodes.values():
        out[n.kind] = out.get(n.kind, 0) + 1
    return out


__all__ = [
    "CALCULI",
    "Diagram",
    "DiagramError",
    "CalculusMismatch",
    "ArityMismatch",
    "GroundPresent",
    "Node",
    "Port",
    "Violation",
    "compose",
    "compose_all",
    "conjugate",
    "dagger",
    "empty",
    "ground",
    "isomorphic",
    "identity",
    "permutation",
    "single",
    "swap_colours",
    "tensor",
    "tensor_all",
    "transpose_diagram",
    "validate",
]


# --- structural isomorphism ------------------------------------------------------


def _node_label(n: Node) -> tuple:
    return (n.kind, n.n_in, n.n_out)


def _params_match(a: Any, b: Any) -> bool:
    from .params import values_equal

    if is_symbolic(a) or is_symbolic(b):
        return a == b
    return values_equal(a, b)


def isomorphic(a: Diagram, b: Diagram) -> bool:
    """Structural equality up to renaming node ids.

    Boundaries and port indices are fixed; only node identities may differ.
    """
    if (a.calculus, a.n_in, a.n_out, len(a.nodes), len(a.wires)) != (
        b.calculus,
        b.n_in,
        b.n_out,
        len(b.nodes),
        len(b.wires),
    ):
        return False
    if sorted(map(_node_label, a.nodes.values())) != sorted(map(_node_label, b.nodes.values())):
        return False

    def compatible(u: int, v: int) -> bool:
        x, y = a.nodes[u], b.nodes[v]
        return _node_label(x) == _node_label(y) and _params_match(x.param, y.param)

    def extend(m: dict[int, int], used: set[int], seeds: list[tuple[Port, Port]]) -> Optional[dict[int, int]]:
        """Propagate port correspondences; None on conflict."""
        m, used = dict(m), set(used)
        stack = list(seeds)
        while stack:
            p, q = stack.pop()
            if (p.node is None) != (q.node is None) or p.side != q.side or p.index != q.index:
                return None
            if p.node is None:
                continue
            if p.node in m:
                if m[p.node] != q.node:
                    return None
                continue
            if q.node in used or not compatible(p.node, q.node):
                return None
            m[p.node] = q.node
            used.add(q.node)
            for port in a.node_ports(p.node):
                stack.append((a.partner(port), b.partner(Port(q.node, port.side, port.index))))
        return m

    seeds = [(a.partner(p), b.partner(p)) for p in a.inputs + a.outputs]
    m = extend({}, set(), seeds)
    if m is None:
        return False

    def search(m: dict[int, int]) -> bool:
        free = [v for v in a.nodes if v not in m]
        if not free:
            return _wires_agree(a, b, m)
        u = free[0]
        used = set(m.values())
        for v in b.nodes:
            if v in used or not compatible(u, v):
                continue
            m2 = dict(m)
            m2[u] = v
            seeds2 = [(a.partner(p), b.partner(Port(v, p.side, p.index))) for p in a.node_ports(u)]
            m3 = extend(m2, set(m2.values()), seeds2)
            if m3 is not None and search(m3):
                return True
        return False

    return search(m)


def _wires_agree(a: Diagram, b: Diagram, m: Mapping[int, int]) -> bool:
    def sh(p: Port) -> Port:
        return p if p.node is None else Port(m[p.node], p.side, p.index)

    return Diagram(a.calculus, {}, [(sh(x), sh(y)) for x, y in a.wires], a.n_in, a.n_out).wires == b.wires

"""Rule matching, rewriting and proof checking.

A match embeds the nodes of one side of a rule into a host diagram. Template
wires between two nodes must map to host wires; template wires that reach the
template boundary become the interface along which the other side of the rule
is plugged in. Legs of symmetric generators may be permuted.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Optional, Sequence

import numpy as np

from .axioms import RewriteRule, instantiate, library
from .cpm import interpret_cpm
from .diagram import (
    SYMMETRIC_KINDS,
    Diagram,
    DiagramError,
    Node,
    Port,
    isomorphic,
    loop_nodes,
    resolve_links,
)
from .params import Expr, is_symbolic, solve_for, values_equal
from .tensors import mat_equal, max_residual

FORWARD, BACKWARD = "L->R", "R->L"
_DIRECTIONS = {"L->R": FORWARD, "LR": FORWARD, "->": FORWARD, "R->L": BACKWARD, "RL": BACKWARD, "<-": BACKWARD}
NOOP = "refl"


class StaleMatch(DiagramError):
    """The match no longer fits the host."""


def direction(d: str) -> str:
    try:
        return _DIRECTIONS[d.upper() if d.isalpha() else d]
    except KeyError:
        raise ValueError(f"unknown rewrite direction {d!r}; use L->R or R->L") from None


def sides(rule: RewriteRule, dir: str, legs: Optional[Sequence[int]] = None) -> tuple[Diagram, Diagram]:
    """(pattern, replacement template) for the given direction."""
    lhs, rhs = rule.template(legs)
    return (lhs, rhs) if direction(dir) == FORWARD else (rhs, lhs)


@dataclass(frozen=True)
class Match:
    rule: str
    direction: str
    legs: tuple[int, ...]
    bindings: Mapping[str, Any]
    node_map: tuple[tuple[int, int], ...]
    port_map: Mapping[Port, Port] = field(repr=False)
    bare: tuple[tuple[tuple[Port, Port], tuple[Port, Port]], ...] = ()
    internal: frozenset = field(default=frozenset(), repr=False)

    @property
    def image(self) -> tuple[int, ...]:
        return tuple(sorted(v for _, v in self.node_map))

    def sort_key(self) -> tuple:
        return (self.image, self.node_map, tuple((w[1][0].key(), w[1][1].key()) for w in self.bare))

    def dedupe_key(self) -> tuple:
        return (self.node_map, self.internal, tuple(sorted((w[1][0].key(), w[1][1].key()) for w in self.bare)))


# matching -------------------------------------------------------------------------


def _source_first(a: Port, b: Port) -> tuple[Port, Port]:
    """Orient a host wire along the flow: boundary inputs and node outputs first."""

    def is_source(p: Port) -> bool:
        return (p.node is None) == (p.side == "in")

    if is_source(b) and not is_source(a):
        return b, a
    return a, b


class _Matcher:
    def __init__(self, pattern: Diagram, host: Diagram, env: Mapping[str, Any], all_legs: bool = False):
        self.all_legs = all_legs
        self.t = pattern
        self.g = host
        self.env0 = dict(env)
        self.sym = SYMMETRIC_KINDS.get(host.calculus, frozenset())
        self.internal: list[tuple[Port, Port]] = []
        self.boundary_ports: list[Port] = []
        self.bare: list[tuple[Port, Port]] = []
        for a, b in pattern.wires:
            if a.node is not None and b.node is not None:
                self.internal.append((a, b))
            elif a.node is None and b.node is None:
                self.bare.append((a, b))
            else:
                self.boundary_ports.append(a if a.node is not None else b)
        self.order = self._component_roots()
        self.results: list[Match] = []

    def _component_roots(self) -> list[int]:
        seen: set[int] = set()
        roots = []
        adj: dict[int, set[int]] = {v: set() for v in self.t.nodes}
        for a, b in self.internal:
            adj[a.node].add(b.node)
            adj[b.node].add(a.node)
        for v in self.t.nodes:
            if v in seen:
                continue
            roots.append(v)
            stack = [v]
            while stack:
                u = stack.pop()
                if u in seen:
                    continue
                seen.add(u)
                stack.extend(adj[u])
        return roots

    # --- parameters

    def _unify(self, tparam: Any, hparam: Any, env: dict, deferred: list) -> bool:
        if tparam is None or hparam is None:
            return tparam is None and hparam is None
        if not is_symbolic(tparam):
            if is_symbolic(hparam):
                return False
            return values_equal(tparam, hparam)
        if is_symbolic(hparam):
            return False
        expr: Expr = tparam
        if expr.free_vars() <= set(env):
            return _eq(expr.eval(env), hparam)
        sol = solve_for(expr, hparam, env)
        if sol is None:
            deferred.append((expr, hparam))
            return True
        name, value = sol
        env[name] = value
        return _eq(expr.eval(env), hparam)

    def _node_ok(self, tv: int, hv: int, state) -> bool:
        tn, hn = self.t.nodes[tv], self.g.nodes[hv]
        if (tn.kind, tn.n_in, tn.n_out) != (hn.kind, hn.n_in, hn.n_out) or hv in state["rev"]:
            return False
        return self._unify(tn.param, hn.param, state["env"], state["deferred"])

    # --- search

    def run(self) -> list[Match]:
        state = {"nm": {}, "rev": {}, "pm": {}, "used": set(), "env": dict(self.env0), "deferred": []}
        self._next_component(state, 0)
        return self.results

    def _copy(self, s):
        return {
            "nm": dict(s["nm"]),
            "rev": dict(s["rev"]),
            "pm": dict(s["pm"]),
            "used": set(s["used"]),
            "env": dict(s["env"]),
            "deferred": list(s["deferred"]),
        }

    def _assign(self, s, tv: int, hv: int) -> bool:
        if not self._node_ok(tv, hv, s):
            return False
        s["nm"][tv] = hv
        s["rev"][hv] = tv
        if self.t.nodes[tv].kind not in self.sym:
            for p in self.t.node_ports(tv):
                h = Port(hv, p.side, p.index)
                s["pm"][p] = h
                s["used"].add(h)
        return True

    def _next_component(self, s, k: int) -> None:
        if k == len(self.order):
            self._finish(s)
            return
        root = self.order[k]
        for hv in self.g.nodes:
            s2 = self._copy(s)
            if self._assign(s2, root, hv):
                self._wires(s2, k)

    def _pending_wire(self, s) -> Optional[tuple[Port, Port]]:
        for a, b in self.internal:
            for p, q in ((a, b), (b, a)):
                if p.node in s["nm"] and not (p in s["pm"] and q in s["pm"] and s["pm"][q] == self.g.partner(s["pm"][p])):
                    return p, q
        return None

    def _port_choices(self, s, p: Port) -> list[Port]:
        if p in s["pm"]:
            return [s["pm"][p]]
        hv = s["nm"][p.node]
        n = self.g.nodes[hv]
        count = n.n_in if p.side == "in" else n.n_out
        return [Port(hv, p.side, j) for j in range(count) if Port(hv, p.side, j) not in s["used"]]

    def _wires(self, s, k: int) -> None:
        pending = self._pending_wire(s)
        if pending is None:
            self._next_component(s, k + 1)
            return
        p, q = pending
        for hp in self._port_choices(s, p):
            hq = self.g.partner(hp)
            if hq.node is None or hq.side != q.side:
                continue
            s2 = self._copy(s)
            if p not in s2["pm"]:
                s2["pm"][p] = hp
                s2["used"].add(hp)
            if q.node not in s2["nm"]:
                if not self._assign(s2, q.node, hq.node):
                    continue
            elif s2["nm"][q.node] != hq.node:
                continue
            if q in s2["pm"]:
                if s2["pm"][q] != hq:
                    continue
            else:
                if hq in s2["used"]:
                    continue
                s2["pm"][q] = hq
                s2["used"].add(hq)
            self._wires(s2, k)

    def _finish(self, s) -> None:
        # boundary legs of symmetric nodes take the remaining host ports, in
        # order unless every assignment is requested
        groups = []
        for tv, hv in s["nm"].items():
            for side in ("in", "out"):
                tports = [p for p in self.t.node_ports(tv) if p.side == side and p not in s["pm"]]
                hports = [p for p in self.g.node_ports(hv) if p.side == side and p not in s["used"]]
                if tports:
                    groups.append((tports, hports))
        orders = [
            list(itertools.permutations(h)) if self.all_legs else [tuple(h)] for _, h in groups
        ]
        for choice in itertools.product(*orders):
            pm = dict(s["pm"])
            for (tports, _), hports in zip(groups, choice):
                pm.update(zip(tports, hports))
            self._complete(s, pm)

    def _complete(self, s, pm) -> None:
        env = s["env"]
        for expr, hparam in s["deferred"]:
            missing = expr.free_vars() - set(env)
            if missing:
                return self._defer_fail(missing)
            if not _eq(expr.eval(env), hparam):
                return None
        image = set(s["nm"].values())
        internal = frozenset(
            _wire_of(pm[a], pm[b]) for a, b in self.internal
        )
        free = [
            w
            for w in self.g.wires
            if w not in internal and w[0].node not in image and w[1].node not in image
        ]
        self._bare(s, pm, internal, free, 0, ())

    def _defer_fail(self, missing) -> None:
        raise _Unbound(missing)

    def _bare(self, s, pm, internal, free, i: int, chosen: tuple) -> None:
        if i == len(self.bare):
            self.results.append(
                Match(
                    rule="",
                    direction="",
                    legs=(),
                    bindings=dict(s["env"]),
                    node_map=tuple(sorted(s["nm"].items())),
                    port_map=pm,
                    bare=chosen,
                    internal=internal,
                )
            )
            return
        taken = {_wire_of(*w[1]) for w in chosen}
        for w in free:
            if w in taken:
                continue
            self._bare(s, pm, internal, free, i + 1, chosen + ((self.bare[i], _source_first(*w)),))


class _Unbound(Exception):
    pass


def _wire_of(a: Port, b: Port) -> tuple[Port, Port]:
    return (a, b) if a.key() <= b.key() else (b, a)


def _eq(a: Any, b: Any) -> bool:
    try:
        return values_equal(a, b)
    except (TypeError, ValueError):
        return False


def find_matches(
    rule: RewriteRule,
    host: Diagram,
    dir: str = FORWARD,
    legs: Optional[Sequence[int]] = None,
    bindings: Optional[Mapping[str, Any]] = None,
) -> list[Match]:
    """Every embedding of one side of ``rule`` into ``host``, in a fixed order.

    ``bindings`` pre-assigns rule parameters; parameters the host cannot
    determine (e.g. alpha in a node carrying 2*alpha) fall back to the slot
    default.
    """
    if rule.calculus != host.calculus:
        return []
    dir = direction(dir)
    legs = rule.check_legs(legs)
    pattern, _ = sides(rule, dir, legs)
    env = dict(bindings or {})
    try:
        found = _Matcher(pattern, host, env).run()
    except _Unbound:
        # fill undetermined parameters from slot defaults and retry
        for slot in rule.slots:
            env.setdefault(slot.name, slot.fallback())
        found = _Matcher(pattern, host, env).run()
    out: dict[tuple, Match] = {}
    for m in found:
        m = Match(rule.name, dir, legs, m.bindings, m.node_map, m.port_map, m.bare, m.internal)
        out.setdefault(m.dedupe_key(), m)
    return sorted(out.values(), key=Match.sort_key)


def equivalent(a: Diagram, b: Diagram) -> bool:
    """Structural equality up to node renaming and leg order of symmetric generators."""
    if (a.calculus, a.n_in, a.n_out, len(a.nodes), len(a.wires)) != (
        b.calculus,
        b.n_in,
        b.n_out,
        len(b.nodes),
        len(b.wires),
    ):
        return False
    if isomorphic(a, b):
        return True
    for m in _Matcher(a, b, {}, all_legs=True).run():
        if _boundary_agrees(a, b, m):
            return True
    return False


def _boundary_agrees(a: Diagram, b: Diagram, m: Match) -> bool:
    bare = dict(m.bare)
    for p in a.inputs + a.outputs:
        q = a.partner(p)
        if q.node is not None:
            if b.partner(p) != m.port_map[q]:
                return False
        else:
            w = (p, q) if (p, q) in bare else (q, p)
            if w not in bare or _wire_of(*bare[w]) != _wire_of(p, q):
                return False
    return True


# rewriting ---------------------------------------------------------------------------


def _check_fresh(rule: RewriteRule, host: Diagram, match: Match, pattern: Diagram) -> None:
    for tv, hv in match.node_map:
        if hv not in host.nodes:
            raise StaleMatch(f"node {hv} is no longer in the host")
        tn, hn = pattern.nodes[tv], host.nodes[hv]
        if (tn.kind, tn.n_in, tn.n_out) != (hn.kind, hn.n_in, hn.n_out):
            raise StaleMatch(f"node {hv} changed kind or arity")
    for a, b in pattern.wires:
        if a.node is not None and b.node is not None:
            try:
                if host.partner(match.port_map[a]) != match.port_map[b]:
                    raise StaleMatch("a matched wire is no longer present")
            except KeyError:
                raise StaleMatch("a matched port is no longer present") from None
    wires = set(host.wires)
    for _, hw in match.bare:
        if _wire_of(*hw) not in wires:
            raise StaleMatch("a matched bare wire is no longer present")


def apply_rewrite(host: Diagram, match: Match, rule: Optional[RewriteRule] = None, library_name: Optional[str] = None) -> Diagram:
    """Replace the matched side by the other side of the rule."""
    return rewrite_with_inverse(host, match, rule, library_name)[0]


def _lookup(match: Match, rule: Optional[RewriteRule], library_name: Optional[str]) -> RewriteRule:
    if rule is not None:
        return rule
    if library_name is None:
        raise ValueError("apply_rewrite needs the rule or its library name")
    return library(library_name).get(match.rule)


def rewrite_with_inverse(
    host: Diagram,
    match: Match,
    rule: Optional[RewriteRule] = None,
    library_name: Optional[str] = None,
) -> tuple[Diagram, Optional[Match]]:
    """The rewritten diagram and, when it can be read off, the match undoing it."""
    rule = _lookup(match, rule, library_name)
    pattern, _ = sides(rule, match.direction, match.legs)
    _check_fresh(rule, host, match, pattern)
    params = {s.name: match.bindings.get(s.name, s.fallback()) for s in rule.slots}
    lhs, rhs = instantiate(rule, dict(params, legs=match.legs))
    repl = rhs if match.direction == FORWARD else lhs

    image = {hv for _, hv in match.node_map}
    offset = max(host.next_id(), 0)
    repl = repl.relabel(offset)

    edges: list[tuple[Any, Any]] = []
    virtual: set = set()
    bare_host = {_wire_of(*hw) for _, hw in match.bare}
    for a, b in host.wires:
        if (a, b) in match.internal or (a, b) in bare_host:
            continue
        edges.append((("H", a), ("H", b)))
    for a, b in pattern.wires:
        if a.node is None and b.node is None:
            continue
        if a.node is not None and b.node is not None:
            continue
        t, bd = (a, b) if a.node is not None else (b, a)
        hp = match.port_map[t]
        edges.append((("H", hp), ("B", bd)))
        virtual.add(("H", hp))
        virtual.add(("B", bd))
    for (b1, b2), (h1, h2) in match.bare:
        edges.append((("H", h1), ("B", b1)))
        edges.append((("B", b2), ("H", h2)))
        virtual.add(("B", b1))
        virtual.add(("B", b2))
    for a, b in repl.wires:
        ea = ("B", a) if a.node is None else ("R", a)
        eb = ("B", b) if b.node is None else ("R", b)
        edges.append((ea, eb))
        virtual.update(e for e in (ea, eb) if e[0] == "B")
    links, loops = resolve_links(edges, virtual)
    nodes: dict[int, Node] = {v: n for v, n in host.nodes.items() if v not in image}
    nodes.update(repl.nodes)
    wires = [(a[1], b[1]) for a, b in links]
    ln, lw = loop_nodes(host.calculus, max(nodes, default=-1) + 1, loops)
    nodes.update(ln)
    out = Diagram(host.calculus, nodes, wires + lw, host.n_in, host.n_out)
    return out, _inverse_match(host, pattern, match, repl, out, offset)


def _inverse_match(
    host: Diagram, pattern: Diagram, match: Match, repl: Diagram, out: Diagram, offset: int
) -> Optional[Match]:
    """The match of the inserted side inside ``out``; None if bare wires got tangled."""
    node_map = tuple(sorted((v - offset, v) for v in repl.nodes))
    port_map = {}
    for v in repl.nodes:
        for p in repl.node_ports(v):
            port_map[Port(v - offset, p.side, p.index)] = p
    internal = []
    bare = []
    for a, b in repl.wires:
        if a.node is not None and b.node is not None:
            internal.append(_wire_of(a, b))
        elif a.node is None and b.node is None:
            # the host ends these boundary ports attach to
            ends = []
            for bp in (a, b):
                end = _attached_end(host, pattern, match, bp)
                if end is None:
                    return None
                ends.append(end)
            w = _wire_of(*ends)
            if w not in set(out.wires):
                return None
            bare.append(((a, b), _source_first(*w)))
    back = BACKWARD if match.direction == FORWARD else FORWARD
    return Match(match.rule, back, match.legs, match.bindings, node_map, port_map, tuple(bare), frozenset(internal))


def _attached_end(host: Diagram, pattern: Diagram, match: Match, bp: Port) -> Optional[Port]:
    """The host port outside the match that template boundary ``bp`` was joined to."""
    for (b1, b2), (h1, h2) in match.bare:
        if bp == b1:
            return h1
        if bp == b2:
            return h2
    t = pattern.partner(bp)
    if t.node is None:
        return None
    end = host.partner(match.port_map[t])
    image = {hv for _, hv in match.node_map}
    return None if end.node in image else end


# proof scripts ----------------------------------------------------------------------


@dataclass(frozen=True)
class ProofStep:
    rule: str
    library: str
    dir: str = FORWARD
    index: int = 0
    legs: Optional[tuple[int, ...]] = None
    bindings: Optional[Mapping[str, Any]] = None


@dataclass(frozen=True)
class ProofScript:
    initial: Diagram
    steps: tuple[ProofStep, ...]
    final: Diagram


@dataclass
class StepReport:
    index: int
    rule: str
    ok: bool
    matches: int = 0
    residual: Optional[float] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        d = {"index": self.index, "rule": self.rule, "ok": self.ok, "matches": self.matches}
        if self.residual is not None:
            d["residual"] = self.residual
        if self.error is not None:
            d["error"] = self.error
        return d


@dataclass
class ProofReport:
    valid: bool
    steps: list[StepReport]
    failed_step: Optional[int] = None
    final_matches: bool = False
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "failed_step": self.failed_step,
            "final_matches": self.final_matches,
            "error": self.error,
            "steps": [s.to_dict() for s in self.steps],
        }


def _semantic_residual(a: Diagram, b: Diagram, tol: float) -> tuple[bool, float]:
    sa, sb = interpret_cpm(a), interpret_cpm(b)
    if sa.exact and sb.exact:
        ok = mat_equal(sa.choi, sb.choi)
        return ok, 0.0 if ok else max_residual(sa.choi, sb.choi)
    res = max_residual(sa.matrix(), sb.matrix())
    return res <= tol, res


def verify_proof(
    script: ProofScript,
    semantic_check: bool = False,
    tol: float = 1e-9,
    max_wires: int = 6,
) -> ProofReport:
    """Replay a proof script; failures become report entries with the step index."""
    cur = script.initial
    reports: list[StepReport] = []
    for i, step in enumerate(script.steps):
        rep = StepReport(i, step.rule, ok=False)
        reports.append(rep)
        if step.rule == NOOP:
            rep.ok, rep.matches = True, 1
            rep.residual = 0.0 if semantic_check else None
            continue
        try:
            rule = library(step.library).get(step.rule)
            matches = find_matches(rule, cur, step.dir, step.legs, step.bindings)
            rep.matches = len(matches)
            if not 0 <= step.index < len(matches):
                rep.error = f"no match with index {step.index} ({len(matches)} found)"
                return ProofReport(False, reports, i)
            nxt = apply_rewrite(cur, matches[step.index], rule)
        except (KeyError, ValueError, DiagramError) as exc:
            rep.error = f"{type(exc).__name__}: {exc}"
            return ProofReport(False, reports, i)
        if semantic_check and cur.n_in + cur.n_out <= max_wires:
            ok, rep.residual = _semantic_residual(cur, nxt, tol)
            if not ok:
                rep.error = f"semantics changed (residual {rep.residual:.3e})"
                return ProofReport(False, reports, i)
        rep.ok = True
        cur = nxt
    same = equivalent(cur, script.final)
    err = None if same else "final diagram differs from the claimed one"
    return ProofReport(same, reports, None if same else len(script.steps), same, err)


def fuzz_hosts(
    rule: RewriteRule,
    rng: np.random.Generator,
    count: int,
    dir: str = FORWARD,
    max_nodes: int = 20,
) -> Iterable[tuple[Diagram, Match]]:
    """Hosts that contain an instance of one side of ``rule``, with a match.

    The instance is wrapped by random context diagrams on up to 4 wires.
    """
    from .random_diagrams import random_context

    made = 0
    attempts = 0
    while made < count and attempts < 50 * count:
        attempts += 1
        legs = tuple(int(rng.choice(list(r))) for r in rule.legs)
        params = {s.name: _sample_slot(s, rng) for s in rule.slots}
        lhs, rhs = instantiate(rule, dict(params, legs=legs))
        side = lhs if direction(dir) == FORWARD else rhs
        if side.n_in > 4 or side.n_out > 4:
            continue
        host = random_context(side, rng, max_wires=4, max_nodes=max_nodes)
        matches = find_matches(rule, host, dir, legs, params)
        if not matches:
            continue
        made += 1
        yield host, matches[int(rng.integers(len(matches)))]


def _sample_slot(slot, rng: np.random.Generator):
    from .params import Phase
    from .scalars import ExactScalar

    if slot.kind == "phase":
        return Phase.pi(int(rng.integers(8)), 4)
    return ExactScalar.omega_power(int(rng.integers(8))) * ExactScalar.from_int(int(rng.integers(1, 3)))

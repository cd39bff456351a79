"""Rule libraries for ZX, ZX_pi/2, ZW and ZH, their ground axioms, and a
soundness verifier.

A rule is a function ``build(legs, params) -> (lhs, rhs)``. Calling it with
:class:`~groundzx.params.Var` placeholders gives the matching templates;
calling it with concrete values gives an instance. ``legs`` fixes the
variadic wire counts.

Scalars are kept explicit so that every rule holds on the nose, not just up
to a global factor.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Any, Callable, Mapping, Optional, Sequence

import numpy as np

from . import builders as B
from .cpm import interpret_cpm
from .diagram import (
    Diagram,
    DiagramError,
    Node,
    compose_all,
    empty,
    identity,
    isomorphic,
    permutation,
    single,
    swap_colours,
    tensor,
    tensor_all,
    transpose_diagram,
)
from .params import Phase, Var
from .scalars import ExactScalar
from .semantics import EXACT, FLOAT, exact_representable, interp
from .tensors import equal_up_to_global_phase, mat_equal, max_residual, proportionality

LEGS = range(0, 4)


class UnknownLibrary(KeyError):
    pass


class BindingError(ValueError):
    pass


@dataclass(frozen=True)
class Slot:
    """A rule parameter: ``kind`` is "phase" or "weight"."""

    name: str
    kind: str = "phase"
    default: Any = None

    def fallback(self) -> Any:
        if self.default is not None:
            return self.default
        return Phase(0) if self.kind == "phase" else ExactScalar.from_int(1)


@dataclass(frozen=True)
class RewriteRule:
    name: str
    calculus: str
    build: Callable[[tuple, Mapping[str, Any]], tuple[Diagram, Diagram]] = field(repr=False)
    slots: tuple[Slot, ...] = ()
    legs: tuple[range, ...] = ()
    default_legs: tuple[int, ...] = ()
    mode: str = "pure"
    provisional: bool = False
    phase_den: int = 4
    note: str = ""
    # for ground rules ground o g = ground: builds g from (legs, params)
    pure_part: Optional[Callable[[tuple, Mapping[str, Any]], Diagram]] = field(default=None, repr=False)

    def template(self, legs: Optional[Sequence[int]] = None) -> tuple[Diagram, Diagram]:
        legs = self.check_legs(legs)
        return self.build(legs, {s.name: Var(s.name) for s in self.slots})

    def check_legs(self, legs: Optional[Sequence[int]]) -> tuple:
        legs = tuple(self.default_legs if legs is None else legs)
        if len(legs) != len(self.legs):
            raise BindingError(f"{self.name} takes {len(self.legs)} leg counts, got {len(legs)}")
        for k, r in zip(legs, self.legs):
            if k not in r:
                raise BindingError(f"{self.name}: leg count {k} outside {r.start}..{r.stop - 1}")
        return legs


@dataclass(frozen=True)
class RuleLibrary:
    name: str
    rules: tuple[RewriteRule, ...]

    def __post_init__(self):
        names = [r.name for r in self.rules]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate rule names in {self.name}")

    def __iter__(self):
        return iter(self.rules)

    def __len__(self) -> int:
        return len(self.rules)

    def get(self, name: str) -> RewriteRule:
        for r in self.rules:
            if r.name == name:
                return r
        raise KeyError(f"no rule {name!r} in library {self.name}")

    @property
    def names(self) -> list[str]:
        return [r.name for r in self.rules]


def instantiate(rule: RewriteRule, bindings: Mapping[str, Any]) -> tuple[Diagram, Diagram]:
    """Concrete (lhs, rhs); ``bindings`` holds every slot plus optional ``legs``."""
    legs = rule.check_legs(bindings.get("legs"))
    missing = [s.name for s in rule.slots if s.name not in bindings]
    if missing:
        raise BindingError(f"{rule.name}: missing bindings for {missing}")
    lhs, rhs = rule.build(legs, {s.name: bindings[s.name] for s in rule.slots})
    if (lhs.n_in, lhs.n_out) != (rhs.n_in, rhs.n_out):
        raise DiagramError(f"{rule.name}: sides have different boundaries")
    return lhs, rhs


# template helpers -------------------------------------------------------------------


def fuse(calculus: str, a: Node, b: Node, n1: int, m1: int, n2: int, m2: int, via: Optional[Node] = None) -> Diagram:
    """Node a (n1 -> m1+1) whose last output feeds input 0 of b (1+n2 -> m2).

    Inputs are a's then b's remaining; outputs likewise. ``via`` is an
    optional 1 -> 1 node on the connecting wire.
    """
    nodes = [a, b] + ([via] if via is not None else [])
    w = []
    for j in range(n1):
        w.append(((None, "in", j), (0, "in", j)))
    for j in range(n2):
        w.append(((None, "in", n1 + j), (1, "in", 1 + j)))
    for j in range(m1):
        w.append(((0, "out", j), (None, "out", j)))
    for j in range(m2):
        w.append(((1, "out", j), (None, "out", m1 + j)))
    if via is None:
        w.append(((0, "out", m1), (1, "in", 0)))
    else:
        w.append(((0, "out", m1), (2, "in", 0)))
        w.append(((2, "out", 0), (1, "in", 0)))
    return Diagram.make(calculus, nodes, w, n1 + n2, m1 + m2)


def scalar_times(d: Diagram, *scalars: Diagram) -> Diagram:
    return tensor_all([d, *scalars])


def _spider_fusion(calculus: str, kind: str, combine) -> Callable:
    def build(legs, p):
        n1, m1, n2, m2 = legs
        a, b = p.get("alpha", p.get("r")), p.get("beta", p.get("s"))
        lhs = fuse(calculus, Node(kind, n1, m1 + 1, a), Node(kind, 1 + n2, m2, b), n1, m1, n2, m2)
        rhs = single(calculus, Node(kind, n1 + n2, m1 + m2, combine(a, b)))
        return lhs, rhs

    return build


def _bialgebra(calculus: str, top: Callable, bottom: Callable) -> tuple[Diagram, Diagram]:
    lhs = top(2, 1) >> bottom(1, 2)
    rhs = compose_all(
        [tensor(bottom(1, 2), bottom(1, 2)), permutation([0, 2, 1, 3], calculus), tensor(top(2, 1), top(2, 1))]
    )
    return lhs, rhs


def _var_sum(a, b):
    return a + b


def _var_mul(a, b):
    return a * b


# ZX ---------------------------------------------------------------------------------

P = Phase.pi
Zx = B.z_spider
Xx = B.x_spider


def _zx_rules(pi2: bool) -> list[RewriteRule]:
    den = 2 if pi2 else 4
    s1 = RewriteRule(
        "S1",
        "ZX",
        _spider_fusion("ZX", "Z", _var_sum),
        (Slot("alpha"), Slot("beta")),
        (LEGS,) * 4,
        (1, 0, 0, 1),
        provisional=True,
        phase_den=den,
        note="spider fusion along one wire",
    )
    s2 = RewriteRule("S2", "ZX", lambda l, p: (Zx(1, 1, 0), identity(1, "ZX")), provisional=True, phase_den=den)
    b1 = RewriteRule(
        "B1",
        "ZX",
        lambda l, p: (scalar_times(Xx(0, 1, 0) >> Zx(1, 2, 0), B.sqrt2()), tensor(Xx(0, 1, 0), Xx(0, 1, 0))),
        provisional=True,
        phase_den=den,
        note="copy of the X state through a Z spider",
    )

    def b2(l, p):
        lhs, rhs = _bialgebra("ZX", lambda n, m: Xx(n, m, 0), lambda n, m: Zx(n, m, 0))
        return lhs, scalar_times(rhs, B.sqrt2())

    b2r = RewriteRule("B2", "ZX", b2, provisional=True, phase_den=den, note="bialgebra")

    def eu(l, p):
        zxz = compose_all([Zx(1, 1, P(1, 2)), Xx(1, 1, P(1, 2)), Zx(1, 1, P(1, 2))])
        return B.h(), scalar_times(zxz, B.omega_bar())

    eur = RewriteRule("EU", "ZX", eu, provisional=True, phase_den=den, note="Euler decomposition of H")
    h2 = RewriteRule("h2", "ZX", lambda l, p: (B.h() >> B.h(), identity(1, "ZX")), phase_den=den)
    rules = [s1, s2, b1, b2r, eur, h2]
    if pi2:
        rules.insert(
            2,
            RewriteRule(
                "IV",
                "ZX",
                lambda l, p: (tensor(B.sqrt2(), B.inv_sqrt2()), empty("ZX")),
                provisional=True,
                phase_den=den,
                note="sqrt2 and 1/sqrt2 cancel",
            ),
        )

        def zero(l, p):
            z = Zx(0, 0, P(1))
            return tensor(z, identity(1, "ZX")), tensor(z, Zx(1, 0, 0) >> Zx(0, 1, 0))

        rules.append(RewriteRule("ZO", "ZX", zero, provisional=True, phase_den=den, note="zero scalar disconnects"))
    else:

        def k(l, p):
            (m,) = l
            a = p["alpha"]
            lhs = Xx(1, 1, P(1)) >> Zx(1, m, a)
            pis = tensor_all([Xx(1, 1, P(1)) for _ in range(m)], "ZX")
            rhs = scalar_times(Zx(1, m, -a) >> pis, B.global_phase(a))
            return lhs, rhs

        def sup(l, p):
            a = p["alpha"]
            lhs = tensor(Zx(0, 1, a), Zx(0, 1, a + P(1))) >> Xx(2, 1, 0)
            rhs = scalar_times(Xx(0, 1, 0), single("ZX", Node("Z", 0, 0, a * 2 + P(1))), B.half())
            return lhs, rhs

        def c(l, p):
            a = p["alpha"]
            core = tensor(Zx(1, 2, 0), identity(1)) >> tensor(identity(1), Xx(2, 1, 0))
            ph = tensor(Zx(1, 1, a), identity(1))
            return ph >> core, core >> ph

        def bw(l, p):
            return Zx(1, 2, 0) >> Xx(2, 1, 0), scalar_times(Zx(1, 0, 0) >> Xx(0, 1, 0), B.half())

        def a_rule(l, p):
            lhs = compose_all([Xx(1, 1, P(1)), Zx(1, 1, P(1)), Xx(1, 1, P(1)), Zx(1, 1, P(1))])
            return lhs, scalar_times(identity(1, "ZX"), B.global_phase(P(1)))

        rules[2:2] = [
            RewriteRule(
                "E",
                "ZX",
                lambda l, p: (Zx(0, 1, P(1, 4)) >> Xx(1, 0, P(-1, 4)), empty("ZX")),
                provisional=True,
                note="a pi/4 bicoloured scalar equals 1",
            )
        ]
        rules += [
            RewriteRule("K", "ZX", k, (Slot("alpha"),), (LEGS,), (1,), provisional=True, note="pi copies through a spider"),
            RewriteRule("SUP", "ZX", sup, (Slot("alpha"),), provisional=True, note="supplementarity"),
            RewriteRule("C", "ZX", c, (Slot("alpha"),), provisional=True, note="Z phase commutes with a CNot control"),
            RewriteRule("BW", "ZX", bw, provisional=True, note="Hopf law"),
            RewriteRule("A", "ZX", a_rule, provisional=True, note="(XZ)^2 = -1"),
        ]
    return _with_variants(rules)


def _map_rule(rule: RewriteRule, suffix: str, fn: Callable[[Diagram], Diagram]) -> RewriteRule:
    def build(legs, p, _b=rule.build):
        lhs, rhs = _b(legs, p)
        return fn(lhs), fn(rhs)

    return RewriteRule(
        rule.name + suffix,
        rule.calculus,
        build,
        rule.slots,
        rule.legs,
        rule.default_legs,
        rule.mode,
        rule.provisional,
        rule.phase_den,
        (rule.note + f" ({suffix[1:]} variant)").strip(),
    )


def _with_variants(rules: list[RewriteRule]) -> list[RewriteRule]:
    """Add upside-down and colour-swapped versions that differ structurally."""
    out: list[RewriteRule] = []
    for r in rules:
        seen = [r.template()]
        out.append(r)
        for suffix, fn in (
            ("-flip", transpose_diagram),
            ("-swap", swap_colours),
            ("-flipswap", lambda d: swap_colours(transpose_diagram(d))),
        ):
            v = _map_rule(r, suffix, fn)
            t = v.template()
            if any(_same_rule(t, u) for u in seen):
                continue
            seen.append(t)
            out.append(v)
    return out


def _same_rule(t: tuple[Diagram, Diagram], u: tuple[Diagram, Diagram]) -> bool:
    for a, b in ((t[0], t[1]), (t[1], t[0])):
        if isomorphic(a, u[0]) and isomorphic(b, u[1]):
            return True
    return False


# ZW ---------------------------------------------------------------------------------

W = B.w_node


def _zw_z(n, m, r):
    return single("ZW", Node("Z", n, m, r))


def _zw_rules() -> list[RewriteRule]:
    def ket1_copy(l, p):
        (m,) = l
        r = p["r"]
        lhs = W(0, 1) >> _zw_z(1, m, r)
        rhs = scalar_times(tensor_all([W(0, 1) for _ in range(m)], "ZW"), _zw_z(0, 0, r - 1))
        return lhs, rhs

    def ket0_copy(l, p):
        (m,) = l
        return B.ket0("ZW") >> _zw_z(1, m, p["r"]), tensor_all([B.ket0("ZW") for _ in range(m)], "ZW")

    def fs_phase(l, p):
        zz = tensor(_zw_z(1, 1, -1), _zw_z(1, 1, -1))
        return zz >> B.fswap(), B.fswap() >> zz

    def yang_baxter(l, p):
        a = tensor(B.fswap(), identity(1, "ZW"))
        b = tensor(identity(1, "ZW"), B.fswap())
        return compose_all([a, b, a]), compose_all([b, a, b])

    weight = Slot
    return [
        RewriteRule(
            "ZW0",
            "ZW",
            _spider_fusion("ZW", "Z", _var_mul),
            (weight("r", "weight"), weight("s", "weight")),
            (LEGS,) * 4,
            (1, 0, 0, 1),
            provisional=True,
            note="Z fusion multiplies parameters",
        ),
        RewriteRule("ZW1", "ZW", lambda l, p: (_zw_z(1, 1, ExactScalar.from_int(1)), identity(1, "ZW")), provisional=True),
        RewriteRule(
            "ZW2",
            "ZW",
            lambda l, p: (
                fuse("ZW", Node("W", l[0], l[1] + 1), Node("W", 1 + l[2], l[3]), *l, via=Node("W", 1, 1)),
                single("ZW", Node("W", l[0] + l[2], l[1] + l[3])),
            ),
            (),
            (LEGS,) * 4,
            (1, 1, 0, 1),
            provisional=True,
            note="W nodes joined through a negation fuse",
        ),
        RewriteRule("ZW3", "ZW", lambda l, p: (W(1, 1) >> W(1, 1), identity(1, "ZW")), provisional=True),
        RewriteRule(
            "ZW4", "ZW", ket1_copy, (weight("r", "weight"),), (LEGS,), (2,), provisional=True, note="|1> copied by Z"
        ),
        RewriteRule(
            "ZW5", "ZW", ket0_copy, (weight("r", "weight"),), (LEGS,), (2,), provisional=True, note="|0> copied by Z"
        ),
        RewriteRule(
            "ZW6", "ZW", lambda l, p: (B.fswap() >> B.fswap(), identity(2, "ZW")), provisional=True, note="FSwap involution"
        ),
        RewriteRule("ZW7", "ZW", fs_phase, provisional=True, note="Z(-1) pairs commute with FSwap"),
        RewriteRule("R3", "ZW", yang_baxter, provisional=True, note="Yang-Baxter for FSwap"),
    ]


# ZH ---------------------------------------------------------------------------------


def _zh_z(n, m):
    return single("ZH", Node("Z", n, m))


def _zh_x(n, m):
    return single("ZH", Node("X", n, m))


def _zh_scalar(c: ExactScalar) -> Diagram:
    return B.h_box(0, 0, c)


def _zh_rules() -> list[RewriteRule]:
    def zs1(l, p):
        n1, m1, n2, m2 = l
        return fuse("ZH", Node("Z", n1, m1 + 1), Node("Z", 1 + n2, m2), *l), _zh_z(n1 + n2, m1 + m2)

    def hs1(l, p):
        return B.h_box(1, 1) >> B.h_box(1, 1), scalar_times(identity(1, "ZH"), _zh_scalar(ExactScalar.from_int(2)))

    def red(l, p):
        n, m = l
        hs_in = tensor_all([B.h_box(1, 1) for _ in range(n)], "ZH")
        hs_out = tensor_all([B.h_box(1, 1) for _ in range(m)], "ZH")
        rhs = compose_all([hs_in, _zh_z(n, m), hs_out])
        return _zh_x(n, m), scalar_times(rhs, _zh_scalar(ExactScalar.sqrt2_power(-(n + m + 2))))

    def ba1(l, p):
        lhs, rhs = _bialgebra("ZH", _zh_x, _zh_z)
        return lhs, scalar_times(rhs, _zh_scalar(ExactScalar.sqrt2_power(3)))

    def ba2(l, p):
        lhs, rhs = _bialgebra("ZH", _zh_z, _zh_x)
        return lhs, scalar_times(rhs, _zh_scalar(_BA2_SCALAR))

    def neg(l, p):
        (m,) = l
        nots = tensor_all([B.negation() for _ in range(m)], "ZH")
        return B.negation() >> _zh_z(1, m), _zh_z(1, m) >> nots

    def mult(l, p):
        (n,) = l
        a, b = p["a"], p["b"]
        nodes = [Node("HBox", n, 0, a), Node("HBox", n, 0, b)] + [Node("Z", 1, 2) for _ in range(n)]
        w = []
        for j in range(n):
            w.append(((None, "in", j), (2 + j, "in", 0)))
            w.append(((2 + j, "out", 0), (0, "in", j)))
            w.append(((2 + j, "out", 1), (1, "in", j)))
        return Diagram.make("ZH", nodes, w, n, 0), B.h_box(n, 0, a * b)

    def unit(l, p):
        n, m = l
        rhs = tensor(
            tensor_all([_zh_z(1, 0) for _ in range(n)], "ZH"), tensor_all([_zh_z(0, 1) for _ in range(m)], "ZH")
        )
        return B.h_box(n, m, ExactScalar.from_int(1)), rhs

    def ortho(l, p):
        return B.h_box(1, 0, ExactScalar.from_int(0)), scalar_times(_zh_x(1, 0), _zh_scalar(ExactScalar.sqrt2_power(1)))

    return [
        RewriteRule("ZS1", "ZH", zs1, (), (LEGS,) * 4, (1, 0, 0, 1), provisional=True, note="Z fusion"),
        RewriteRule("ZS2", "ZH", lambda l, p: (_zh_z(1, 1), identity(1, "ZH")), provisional=True),
        RewriteRule("HS1", "ZH", hs1, provisional=True, note="H-box squared"),
        RewriteRule("RED", "ZH", red, (), (LEGS, LEGS), (1, 1), provisional=True, note="X spider as H-conjugated Z"),
        RewriteRule("BA1", "ZH", ba1, provisional=True, note="Z/X bialgebra"),
        RewriteRule("BA2", "ZH", ba2, provisional=True, note="X/Z bialgebra"),
        RewriteRule("N", "ZH", neg, (), (LEGS,), (2,), provisional=True, note="negation through Z"),
        RewriteRule(
            "M", "ZH", mult, (Slot("a", "weight"), Slot("b", "weight")), (LEGS,), (1,), provisional=True,
            note="H-boxes on copied legs multiply",
        ),
        RewriteRule("U", "ZH", unit, (), (LEGS, LEGS), (1, 1), provisional=True, note="H-box with a = 1 disconnects"),
        RewriteRule("I", "ZH", lambda l, p: (B.negation() >> B.negation(), identity(1, "ZH")), provisional=True),
        RewriteRule("O", "ZH", ortho, provisional=True, note="H-box with a = 0 is a scaled X effect"),
    ]


_BA2_SCALAR = ExactScalar.sqrt2_power(3)


# ground axioms ---------------------------------------------------------------------


def _ground_rule(name: str, calculus: str, iso: Callable, slots=(), legs=(), default_legs=()) -> RewriteRule:
    """ground^{out} after g equals ground^{in}."""

    def build(l, p):
        g = iso(l, p)
        lhs = g >> B.ground(g.n_out, calculus) if g.n_out else g
        rhs = B.ground(g.n_in, calculus) if g.n_in else empty(calculus)
        return lhs, rhs

    return RewriteRule(
        name, calculus, build, tuple(slots), tuple(legs), tuple(default_legs), mode="cpm", pure_part=iso
    )


FANOUT = range(1, 4)


def _zx_ground() -> list[RewriteRule]:
    a = (Slot("alpha"),)
    return [
        _ground_rule("ground-phase", "ZX", lambda l, p: B.global_phase(p["alpha"]), a),
        _ground_rule("ground-ket0", "ZX", lambda l, p: B.ket0()),
        _ground_rule("ground-H", "ZX", lambda l, p: B.h()),
        _ground_rule("ground-gn", "ZX", lambda l, p: Zx(1, l[0], p["alpha"]), a, (FANOUT,), (1,)),
        _ground_rule("ground-cnot", "ZX", lambda l, p: B.cnot()),
    ]


def _zw_ground() -> list[RewriteRule]:
    a = (Slot("alpha"),)
    return [
        _ground_rule("ground-zw-phase", "ZW", lambda l, p: B.global_phase(p["alpha"], "ZW"), a),
        _ground_rule("ground-zw-ket1", "ZW", lambda l, p: B.ket1("ZW")),
        _ground_rule(
            "ground-zw-ghz", "ZW", lambda l, p: _zw_z(1, l[0], B.unit_weight(p["alpha"])), a, (FANOUT,), (1,)
        ),
        _ground_rule("ground-zw-h", "ZW", lambda l, p: B.h("ZW")),
        _ground_rule("ground-fermionic-swap", "ZW", lambda l, p: B.fswap()),
    ]


def _zh_ground() -> list[RewriteRule]:
    a = (Slot("alpha"),)
    return [
        _ground_rule("ground-zh-phase", "ZH", lambda l, p: B.global_phase(p["alpha"], "ZH"), a),
        _ground_rule("ground-zh-ket0", "ZH", lambda l, p: B.ket0("ZH")),
        _ground_rule("ground-zh-H", "ZH", lambda l, p: B.h("ZH")),
        _ground_rule("ground-zh-RZ", "ZH", lambda l, p: B.rz(p["alpha"], "ZH"), a),
        _ground_rule("ground-zh-CZ", "ZH", lambda l, p: B.cz("ZH")),
    ]


_LIBRARIES: dict[str, Callable[[], list[RewriteRule]]] = {
    "zx-full": lambda: _zx_rules(pi2=False),
    "zx-pi2": lambda: _zx_rules(pi2=True),
    "zw": _zw_rules,
    "zh": _zh_rules,
    "zx-ground": _zx_ground,
    "zw-ground": _zw_ground,
    "zh-ground": _zh_ground,
}
LIBRARY_NAMES = tuple(_LIBRARIES)
_CACHE: dict[str, RuleLibrary] = {}


def library(name: str) -> RuleLibrary:
    if name not in _LIBRARIES:
        raise UnknownLibrary(f"unknown library {name!r}; expected one of {', '.join(LIBRARY_NAMES)}")
    if name not in _CACHE:
        _CACHE[name] = RuleLibrary(name, tuple(_LIBRARIES[name]()))
    return _CACHE[name]


# soundness -------------------------------------------------------------------------

_EXACT_WEIGHTS = (
    ExactScalar.from_int(0),
    ExactScalar.from_int(1),
    ExactScalar.from_int(-1),
    ExactScalar.omega_power(2),
    ExactScalar.omega_power(1),
    ExactScalar.from_gaussian(1, 2),
    ExactScalar.sqrt2_power(-1),
    ExactScalar.from_int(3) - ExactScalar.omega_power(3),
)


@dataclass
class RuleReport:
    name: str
    library: str
    mode: str
    instantiations: int = 0
    max_residual: float = 0.0
    verdict: str = "exact"
    scalar_factor: Optional[complex] = None
    provisional: bool = False
    failure: Optional[dict] = None
    note: str = ""

    @property
    def sound(self) -> bool:
        return self.verdict != "unsound"

    def to_dict(self) -> dict:
        d = {
            "rule": self.name,
            "mode": self.mode,
            "instantiations": self.instantiations,
            "max_residual": self.max_residual,
            "verdict": self.verdict,
            "sound": self.sound,
            "provisional": self.provisional,
            "scalar_factor": None,
        }
        if self.scalar_factor is not None:
            d["scalar_factor"] = [self.scalar_factor.real, self.scalar_factor.imag]
        if self.failure is not None:
            d["failure"] = self.failure
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class SoundnessReport:
    library: str
    seed: int
    samples: int
    tol: float
    entries: list[RuleReport]
    max_legs: int = 3

    @property
    def sound(self) -> bool:
        return all(e.sound for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "library": self.library,
            "seed": self.seed,
            "samples": self.samples,
            "tol": self.tol,
            "legs_bound": self.max_legs,
            "sound": self.sound,
            "rules": [e.to_dict() for e in self.entries],
        }

    def table(self) -> str:
        lines = [f"{'rule':<24}{'mode':<6}{'n':>6}  {'residual':>10}  verdict"]
        for e in self.entries:
            flag = " (provisional)" if e.provisional else ""
            lines.append(f"{e.name:<24}{e.mode:<6}{e.instantiations:>6}  {e.max_residual:>10.2e}  {e.verdict}{flag}")
        lines.append(f"library {self.library}: {'sound' if self.sound else 'UNSOUND'}")
        return "\n".join(lines)


def _grid(slot: Slot, den: int) -> list:
    if slot.kind == "phase":
        return [Phase.pi(j, den) for j in range(2 * den)]
    return list(_EXACT_WEIGHTS)


def _random_value(slot: Slot, rng: random.Random):
    if slot.kind == "phase":
        return Phase(radians=rng.uniform(0, 2 * np.pi))
    return complex(rng.gauss(0, 1), rng.gauss(0, 1))


def _semantics(d: Diagram, mode: str, backend: str):
    if mode == "cpm":
        return interpret_cpm(d, backend).choi
    return interp(d, backend)


def compare(
    lhs: Diagram, rhs: Diagram, mode: str, tol: float, backend: Optional[str] = None
) -> tuple[str, float, Optional[complex]]:
    """('exact' | 'tolerance' | 'projective' | 'unsound', residual, factor).

    Exact arithmetic is used whenever both sides allow it, unless ``backend``
    is FLOAT.
    """
    exact = backend != FLOAT and exact_representable(lhs) and exact_representable(rhs)
    backend = EXACT if exact else FLOAT
    a, b = _semantics(lhs, mode, backend), _semantics(rhs, mode, backend)
    res = max_residual(a, b)
    if exact and mat_equal(a, b):
        return "exact", res, None
    if res <= tol:
        return "tolerance", res, None
    lam = equal_up_to_global_phase(a, b, tol) if mode == "pure" else None
    if lam is None:
        lam = proportionality(a, b, tol)
    if lam is not None:
        return "projective", res, lam
    return "unsound", res, None


_RANK = {"exact": 0, "tolerance": 1, "projective": 2, "unsound": 3}


def instances(rule: RewriteRule, samples: int, rng: random.Random, exact_only: bool = False, max_legs: int = 3):
    """Yield (legs, params) covering the grid, every leg count, and random floats."""
    slots, den = rule.slots, rule.phase_den
    ranges = [[k for k in r if k <= max_legs] for r in rule.legs]
    leg_combos = list(itertools.product(*ranges)) if rule.legs else [()]
    grids = [_grid(s, den) for s in slots]
    default = rule.check_legs(None)
    # the full exact grid at the default arity
    for vals in itertools.product(*grids):
        yield default, dict(zip([s.name for s in slots], vals))
    # every arity, cycling through the grid
    for i, legs in enumerate(leg_combos):
        vals = [g[(i * (k + 1)) % len(g)] for k, g in enumerate(grids)]
        yield legs, dict(zip([s.name for s in slots], vals))
    if exact_only or not slots:
        return
    for _ in range(samples):
        legs = leg_combos[rng.randrange(len(leg_combos))]
        vals = [_random_value(s, rng) for s in slots]
        yield legs, dict(zip([s.name for s in slots], vals))


def verify_rule(
    rule: RewriteRule,
    samples: int = 25,
    tol: float = 1e-9,
    seed: int = 0,
    library_name: str = "",
    exact_only: bool = False,
    max_legs: int = 3,
    backend: Optional[str] = None,
) -> RuleReport:
    rng = random.Random(f"{seed}:{library_name}:{rule.name}")
    rep = RuleReport(rule.name, library_name, rule.mode, provisional=rule.provisional, note=rule.note)
    seen = set()
    for legs, params in instances(rule, samples, rng, exact_only, max_legs):
        key = (legs, tuple(sorted((k, repr(v)) for k, v in params.items())))
        if key in seen:
            continue
        seen.add(key)
        lhs, rhs = instantiate(rule, dict(params, legs=legs))
        verdict, res, lam = compare(lhs, rhs, rule.mode, tol, backend)
        rep.instantiations += 1
        rep.max_residual = max(rep.max_residual, res) if verdict != "projective" else rep.max_residual
        if _RANK[verdict] > _RANK[rep.verdict]:
            rep.verdict = verdict
            if lam is not None:
                rep.scalar_factor = lam
            if verdict == "unsound":
                rep.failure = {"legs": list(legs), "params": {k: str(v) for k, v in params.items()}, "residual": res}
                break
    return rep


def verify_library(
    name: str,
    samples: int = 25,
    tol: float = 1e-9,
    seed: int = 0,
    max_legs: int = 3,
    backend: Optional[str] = None,
) -> SoundnessReport:
    """Check every rule of a library on exact grids, all leg counts and random samples."""
    lib = library(name)
    exact_only = name == "zx-pi2"
    entries = [verify_rule(r, samples, tol, seed, name, exact_only, max_legs, backend) for r in lib]
    entries.sort(key=lambda e: e.name)
    return SoundnessReport(name, seed, samples, tol, entries, max_legs)

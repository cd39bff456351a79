"""Generator and circuit builders for each calculus.

Every builder takes a ``calculus`` keyword and returns a diagram whose
interpretation is exactly the named matrix (ket0 = (1, 0)^T, CNot with
control on the left wire, ...). Where the calculus' generators only produce
the matrix up to a scalar, explicit scalar sub-diagrams are tensored in.
"""
from __future__ import annotations

import cmath
from typing import Optional, Sequence, Union

from .diagram import (
    Diagram,
    DiagramError,
    Node,
    compose_all,
    empty,
    ground as _ground,
    identity as _identity,
    permutation,
    single,
    tensor,
    tensor_all,
)
from .params import Apply, Expr, Phase, Weight, weight_to_complex
from .scalars import ExactScalar


class BuilderUnavailable(DiagramError):
    """The requested gate has no builder in this calculus."""


PhaseLike = Union[Phase, int, float]


def as_phase(alpha: PhaseLike) -> Phase:
    if isinstance(alpha, (Phase, Expr)):
        return alpha
    if isinstance(alpha, int):
        return Phase(alpha)
    return Phase(radians=float(alpha))


def phase_of_unit(w: Weight) -> Optional[Phase]:
    """The phase alpha with e^{i alpha} = w, or None when |w| != 1."""
    if isinstance(w, ExactScalar):
        for j in range(8):
            if w == ExactScalar.omega_power(j):
                return Phase.pi(j, 4)
    z = weight_to_complex(w)
    if abs(abs(z) - 1) > 1e-12:
        return None
    return Phase(radians=cmath.phase(z))


def unit_weight(alpha: PhaseLike) -> Weight:
    """e^{i alpha}, exact when alpha is a multiple of pi/4."""
    if isinstance(alpha, Expr):
        return Apply(unit_weight, alpha, "exp_i", phase_of_unit)
    p = as_phase(alpha)
    if p.exact_representable:
        return p.exact_unit()
    return p.unit()


def _minus_one(w: Weight) -> Weight:
    return w - 1


# raw generators ------------------------------------------------------------------


def z_spider(n: int, m: int, alpha: PhaseLike = 0, calculus: str = "ZX") -> Diagram:
    if calculus == "ZX":
        return single("ZX", Node("Z", n, m, as_phase(alpha)))
    if calculus == "ZH":
        return single("ZH", Node("Z", n, m))
    raise BuilderUnavailable(f"z_spider with a phase is not a {calculus} generator; use zw_z")


def x_spider(n: int, m: int, alpha: PhaseLike = 0, calculus: str = "ZX") -> Diagram:
    if calculus == "ZX":
        return single("ZX", Node("X", n, m, as_phase(alpha)))
    if calculus == "ZH":
        return single("ZH", Node("X", n, m))
    raise BuilderUnavailable(f"x_spider is not a {calculus} generator")


def zw_z(n: int, m: int, r: Weight) -> Diagram:
    return single("ZW", Node("Z", n, m, r))


def w_node(n: int, m: int) -> Diagram:
    return single("ZW", Node("W", n, m))


def fswap() -> Diagram:
    return single("ZW", Node("FSwap", 2, 2))


def h_box(n: int, m: int, a: Weight = ExactScalar.from_int(-1)) -> Diagram:
    return single("ZH", Node("HBox", n, m, a))


def negation() -> Diagram:
    return single("ZH", Node("Not", 1, 1))


# structural ---------------------------------------------------------------------


def identity(n: int = 1, calculus: str = "ZX") -> Diagram:
    return _identity(n, calculus)


def swap(calculus: str = "ZX") -> Diagram:
    return single(calculus, Node("Swap", 2, 2))


def cup(calculus: str = "ZX") -> Diagram:
    return single(calculus, Node("Cup", 2, 0))


def cap(calculus: str = "ZX") -> Diagram:
    return single(calculus, Node("Cap", 0, 2))


def ground(n: int = 1, calculus: str = "ZX") -> Diagram:
    return _ground(n, calculus)


# scalars ------------------------------------------------------------------------


def _zx_sqrt2() -> Diagram:
    return z_spider(0, 1, 0) >> x_spider(1, 0, 0)


def inv_sqrt2(calculus: str = "ZX") -> Diagram:
    """The scalar 1/sqrt2."""
    if calculus == "ZX":
        # Z(0,3) joined by three wires to X(3,0)
        return z_spider(0, 3, 0) >> x_spider(3, 0, 0)
    if calculus == "ZW":
        return zw_z(0, 0, ExactScalar.sqrt2_power(-1) - 1)
    return h_box(0, 0, ExactScalar.sqrt2_power(-1))


def half(calculus: str = "ZX") -> Diagram:
    """The scalar 1/2."""
    return tensor(inv_sqrt2(calculus), inv_sqrt2(calculus)) if calculus == "ZX" else scalar(
        ExactScalar.sqrt2_power(-2), calculus
    )


def omega_bar(calculus: str = "ZX") -> Diagram:
    """The scalar e^{-i pi/4}; in ZX built from pi/2 phases only."""
    if calculus == "ZX":
        return z_spider(0, 3, Phase.pi(3, 2)) >> x_spider(3, 0, Phase.pi(3, 2))
    return scalar(ExactScalar.omega_power(7), calculus)


def sqrt2(calculus: str = "ZX") -> Diagram:
    if calculus == "ZX":
        return _zx_sqrt2()
    if calculus == "ZW":
        return zw_z(0, 0, ExactScalar.sqrt2_power(1) - 1)
    return h_box(0, 0, ExactScalar.sqrt2_power(1))


def scalar(value: Weight, calculus: str = "ZW") -> Diagram:
    """A 0 -> 0 diagram with the given value (ZW and ZH only)."""
    if calculus == "ZW":
        return zw_z(0, 0, _minus_one(value))
    if calculus == "ZH":
        return h_box(0, 0, value)
    raise BuilderUnavailable("arbitrary scalars are not a single ZX generator")


def global_phase(alpha: PhaseLike, calculus: str = "ZX") -> Diagram:
    """The scalar e^{i alpha}."""
    if calculus == "ZX":
        # Z(1,0,a) after X(0,1,pi) is sqrt2 e^{ia}
        core = x_spider(0, 1, Phase(1)) >> z_spider(1, 0, alpha)
        return tensor(core, inv_sqrt2("ZX"))
    return scalar(unit_weight(alpha), calculus)


# single-qubit gates -----------------------------------------------------------------


def ket0(calculus: str = "ZX") -> Diagram:
    if calculus == "ZX":
        return tensor(x_spider(0, 1, 0), inv_sqrt2("ZX"))
    if calculus == "ZW":
        return w_node(0, 1) >> w_node(1, 1)
    # X(0,1) is |0>/sqrt2 under the 1/2 convention
    return tensor(x_spider(0, 1, calculus="ZH"), sqrt2("ZH"))


def ket1(calculus: str = "ZX") -> Diagram:
    if calculus == "ZX":
        return tensor(x_spider(0, 1, Phase(1)), inv_sqrt2("ZX"))
    if calculus == "ZW":
        return w_node(0, 1)
    return ket0("ZH") >> negation()


def bra0(calculus: str = "ZX") -> Diagram:
    from .diagram import dagger

    return dagger(ket0(calculus))


def rz(alpha: PhaseLike, calculus: str = "ZX") -> Diagram:
    """diag(1, e^{i alpha})."""
    if calculus == "ZX":
        return z_spider(1, 1, alpha)
    if calculus == "ZW":
        return zw_z(1, 1, unit_weight(alpha))
    return z_spider(1, 2, calculus="ZH") >> tensor(identity(1, "ZH"), h_box(1, 0, unit_weight(alpha)))


def s(calculus: str = "ZX") -> Diagram:
    return rz(Phase.pi(1, 2), calculus)


def t(calculus: str = "ZX") -> Diagram:
    return rz(Phase.pi(1, 4), calculus)


def _zw_lower(a: Weight) -> Diagram:
    """[[1, 0], [a, 1]] from a W-node fed by the state |0> + a|1>."""
    return tensor(identity(1, "ZW"), zw_z(0, 1, a)) >> w_node(2, 1) >> w_node(1, 1)


def _zw_upper(b: Weight) -> Diagram:
    return w_node(1, 1) >> _zw_lower(b) >> w_node(1, 1)


def h(calculus: str = "ZX") -> Diagram:
    """The Hadamard gate [[1,1],[1,-1]]/sqrt2."""
    if calculus == "ZX":
        return single("ZX", Node("H", 1, 1))
    if calculus == "ZW":
        one = ExactScalar.from_int(1)
        core = compose_all([_zw_upper(one), zw_z(1, 1, ExactScalar.from_int(-2)), _zw_lower(one)])
        return tensor(core, inv_sqrt2("ZW"))
    return tensor(h_box(1, 1), inv_sqrt2("ZH"))


# two-qubit gates -----------------------------------------------------------------


def cz(calculus: str = "ZX") -> Diagram:
    if calculus == "ZX":
        core = compose_all(
            [
                tensor(z_spider(1, 2, 0), identity(1)),
                tensor_all([identity(1), h("ZX"), identity(1)]),
                tensor(identity(1), z_spider(2, 1, 0)),
            ]
        )
        return tensor(core, sqrt2("ZX"))
    if calculus == "ZW":
        return fswap() >> swap("ZW")
    spl = tensor(z_spider(1, 2, calculus="ZH"), z_spider(1, 2, calculus="ZH"))
    return spl >> tensor_all([identity(1, "ZH"), h_box(2, 0), identity(1, "ZH")])


def cnot(calculus: str = "ZX") -> Diagram:
    """CNot, control on the left wire."""
    if calculus == "ZX":
        core = tensor(z_spider(1, 2, 0), identity(1)) >> tensor(identity(1), x_spider(2, 1, 0))
        return tensor(core, sqrt2("ZX"))
    if calculus == "ZW":
        raise BuilderUnavailable("cnot has no ZW builder; use cz_swap (CZ o SWAP)")
    hh = tensor(identity(1, "ZH"), h("ZH"))
    return compose_all([hh, cz("ZH"), hh])


def cz_swap(calculus: str = "ZW") -> Diagram:
    """CZ o SWAP; in ZW this is the fermionic swap."""
    if calculus == "ZW":
        return fswap()
    return swap(calculus) >> cz(calculus)


# circuits ------------------------------------------------------------------------


def embed(gate: Diagram, targets: Sequence[int], n_wires: int) -> Diagram:
    """Place ``gate`` on the listed wires of an ``n_wires`` register."""
    k = len(targets)
    if gate.n_in != k or gate.n_out != k:
        raise DiagramError("embed needs a k -> k gate for k targets")
    rest = [w for w in range(n_wires) if w not in targets]
    order = list(targets) + rest  # position p holds wire order[p]
    # bring wire order[p] to position p
    to_front = [0] * n_wires
    for p, w in enumerate(order):
        to_front[w] = p
    back = [0] * n_wires
    for w, p in enumerate(to_front):
        back[p] = w
    body = tensor(gate, identity(n_wires - k, gate.calculus)) if n_wires > k else gate
    return compose_all(
        [permutation(to_front, gate.calculus), body, permutation(back, gate.calculus)]
    )


GATES = {
    "h": h,
    "s": s,
    "t": t,
    "cnot": cnot,
    "cz": cz,
}


def circuit(gates: Sequence[tuple], n_wires: int, calculus: str = "ZX") -> Diagram:
    """Build a circuit from (name, wires[, phase]) tuples applied left to right."""
    d = identity(n_wires, calculus)
    for g in gates:
        name, wires = g[0], g[1]
        if name == "rz":
            gate = rz(g[2], calculus)
        else:
            gate = GATES[name](calculus)
        d = compose_all([d, embed(gate, list(wires), n_wires)])
    return d


def empty_diagram(calculus: str = "ZX") -> Diagram:
    return empty(calculus)

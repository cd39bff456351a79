"""JSON reading and writing for diagrams, proof scripts, tensors and reports.

Diagram schema::

    {"calculus": "ZX",
     "nodes":   [{"id": 0, "kind": "Z", "params": [{"pi": "1/4"}],
                  "in_ports": 1, "out_ports": 1}, ...],
     "wires":   [[{"node": 0, "side": "out", "index": 0},
                  {"node": 1, "side": "in", "index": 0}], ...],
     "inputs":  [{"node": 0, "side": "in", "index": 0}, ...],
     "outputs": [{"boundary": "in", "index": 0}, ...]}

``wires`` holds node-to-node wires; ``inputs[j]`` and ``outputs[k]`` give
the port each boundary wire reaches (possibly the other boundary). Phases
are ``{"pi": "p/q"}`` or ``{"rad": x}``; weights are ``{"ring": [a0, a1,
a2, a3], "k": k}`` (the value (a0 + a1 w + a2 w^2 + a3 w^3)/sqrt2^k) or
``{"re": x, "im": y}``.
"""
from __future__ import annotations

import json
import math
import re
from fractions import Fraction
from typing import Any, Mapping, Optional

import numpy as np

from .diagram import CALCULUS_KINDS, STRUCTURAL, Diagram, DiagramError, Node, Port, validate
from .params import Phase
from .rewrite import ProofScript, ProofStep, direction
from .scalars import ExactScalar, from_text
from .tensors import ExactTensor, Tensor

PHASE_KINDS = {"ZX": {"Z", "X"}}
WEIGHT_KINDS = {"ZW": {"Z"}, "ZH": {"HBox"}}


class ParseError(ValueError):
    """Malformed input; ``where`` names the offending field."""

    def __init__(self, message: str, where: str = "", line: Optional[int] = None):
        self.where = where
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        prefix += f"{where}: " if where else ""
        super().__init__(prefix + message)


# parameter values ---------------------------------------------------------------------


def encode_value(v: Any) -> Any:
    if v is None:
        return None
    if isinstance(v, Phase):
        f = v.fraction
        if f is not None:
            return {"pi": f"{f.numerator}/{f.denominator}"}
        return {"rad": v.radians()}
    if isinstance(v, ExactScalar):
        return {"ring": list(v.coords), "k": v.k}
    if isinstance(v, (complex, float, int)):
        c = complex(v)
        return {"re": c.real, "im": c.imag}
    raise TypeError(f"cannot encode parameter {v!r}")


_PI_TEXT = re.compile(r"^\s*(?P<sign>-)?\s*(?P<num>\d+)?\s*\*?\s*pi\s*(/\s*(?P<den>\d+))?\s*$")


def _phase_text(s: str) -> Optional[Phase]:
    m = _PI_TEXT.match(s.replace("π", "pi"))
    if not m:
        return None
    num = int(m.group("num") or 1) * (-1 if m.group("sign") else 1)
    return Phase(Fraction(num, int(m.group("den") or 1)))


def decode_value(raw: Any, where: str = "") -> Any:
    """Inverse of :func:`encode_value`; also accepts "3pi/4" style phases."""
    if raw is None:
        return None
    if isinstance(raw, Mapping):
        try:
            if "pi" in raw:
                return Phase(Fraction(str(raw["pi"])))
            if "rad" in raw:
                return Phase(radians=float(raw["rad"]))
            if "ring" in raw:
                coords = [int(x) for x in raw["ring"]]
                if len(coords) != 4:
                    raise ParseError("ring coordinates need four integers", where)
                return ExactScalar(coords, int(raw.get("k", 0)))
            if "re" in raw or "im" in raw:
                return complex(float(raw.get("re", 0.0)), float(raw.get("im", 0.0)))
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad parameter value {raw!r} ({exc})", where) from None
        raise ParseError(f"unrecognised parameter object {raw!r}", where)
    if isinstance(raw, str):
        p = _phase_text(raw)
        if p is not None:
            return p
        if raw.strip() == "0":
            return Phase(0)
        try:
            return from_text(raw)
        except (ValueError, SyntaxError):
            raise ParseError(f"bad parameter text {raw!r}", where) from None
    if isinstance(raw, bool):
        raise ParseError(f"bad parameter value {raw!r}", where)
    if isinstance(raw, int):
        return ExactScalar.from_int(raw)
    if isinstance(raw, float):
        return complex(raw)
    raise ParseError(f"bad parameter value {raw!r}", where)


def _coerce_param(calculus: str, kind: str, v: Any, where: str) -> Any:
    """Fit a decoded value to what the generator expects."""
    if kind in PHASE_KINDS.get(calculus, ()):
        if v is None:
            return Phase(0)
        if isinstance(v, ExactScalar) and v.is_zero:
            return Phase(0)
        if not isinstance(v, Phase):
            raise ParseError(f"{kind} spider in {calculus} needs a phase, got {v!r}", where)
        return v
    if kind in WEIGHT_KINDS.get(calculus, ()):
        if v is None:
            return ExactScalar.from_int(-1) if kind == "HBox" else ExactScalar.from_int(1)
        if isinstance(v, Phase):
            raise ParseError(f"{kind} in {calculus} needs a complex weight, got a phase", where)
        return v
    if v is not None:
        raise ParseError(f"{kind} takes no parameter", where)
    return None


# diagrams -----------------------------------------------------------------------------


def _port_ref(p: Port) -> dict:
    if p.node is None:
        return {"boundary": p.side, "index": p.index}
    return {"node": p.node, "side": p.side, "index": p.index}


def diagram_to_json(d: Diagram) -> dict:
    nodes = []
    for v, n in d.nodes.items():
        params = [] if n.param is None else [encode_value(n.param)]
        nodes.append({"id": v, "kind": n.kind, "params": params, "in_ports": n.n_in, "out_ports": n.n_out})
    wires, inputs, outputs = [], [None] * d.n_in, [None] * d.n_out
    for a, b in d.wires:
        for x, y in ((a, b), (b, a)):
            if x.node is None:
                (inputs if x.side == "in" else outputs)[x.index] = _port_ref(y)
        if a.node is not None and b.node is not None:
            wires.append([_port_ref(a), _port_ref(b)])
    return {"calculus": d.calculus, "nodes": nodes, "wires": wires, "inputs": inputs, "outputs": outputs}


def print_diagram(d: Diagram, indent: Optional[int] = 1) -> str:
    """Deterministic JSON text (nodes sorted by id)."""
    return json.dumps(diagram_to_json(d), indent=indent, sort_keys=False)


def _int_field(obj: Mapping, key: str, where: str) -> int:
    if key not in obj:
        raise ParseError(f"missing field {key!r}", where)
    v = obj[key]
    if isinstance(v, bool) or not isinstance(v, int) or v < 0:
        raise ParseError(f"field {key!r} must be a non-negative integer, got {v!r}", where)
    return v


def _parse_port(raw: Any, where: str) -> Port:
    if not isinstance(raw, Mapping):
        raise ParseError(f"port reference must be an object, got {raw!r}", where)
    index = _int_field(raw, "index", where)
    if "boundary" in raw:
        side = raw["boundary"]
        if side not in ("in", "out"):
            raise ParseError(f"boundary must be 'in' or 'out', got {side!r}", where)
        return Port(None, side, index)
    if "node" not in raw:
        raise ParseError("port reference needs 'node' or 'boundary'", where)
    node = raw["node"]
    if isinstance(node, bool) or not isinstance(node, int):
        raise ParseError(f"node id must be an integer, got {node!r}", where)
    side = raw.get("side")
    if side not in ("in", "out"):
        raise ParseError(f"side must be 'in' or 'out', got {side!r}", where)
    return Port(node, side, index)


def diagram_from_json(obj: Any, where: str = "") -> Diagram:
    def at(field: str) -> str:
        return f"{where}.{field}" if where else field

    if not isinstance(obj, Mapping):
        raise ParseError("diagram must be a JSON object", where)
    calculus = obj.get("calculus")
    if calculus not in CALCULUS_KINDS:
        raise ParseError(f"unknown calculus {calculus!r}; expected one of {sorted(CALCULUS_KINDS)}", at("calculus"))
    valid = sorted(CALCULUS_KINDS[calculus] | STRUCTURAL)
    nodes: dict[int, Node] = {}
    for i, raw in enumerate(obj.get("nodes", [])):
        w = at(f"nodes[{i}]")
        if not isinstance(raw, Mapping):
            raise ParseError("node must be an object", w)
        v = _int_field(raw, "id", w)
        if v in nodes:
            raise ParseError(f"duplicate node id {v}", w)
        kind = raw.get("kind")
        if kind not in valid:
            raise ParseError(f"unknown generator kind {kind!r} for {calculus}; valid kinds: {', '.join(valid)}", w + ".kind")
        params = raw.get("params", [])
        if not isinstance(params, list) or len(params) > 1:
            raise ParseError("params must be a list with at most one value", w + ".params")
        value = decode_value(params[0], w + ".params[0]") if params else None
        value = _coerce_param(calculus, kind, value, w + ".params")
        nodes[v] = Node(kind, _int_field(raw, "in_ports", w), _int_field(raw, "out_ports", w), value)
    wires: list[tuple[Port, Port]] = []
    for i, raw in enumerate(obj.get("wires", [])):
        w = at(f"wires[{i}]")
        if not isinstance(raw, list) or len(raw) != 2:
            n = len(raw) if isinstance(raw, list) else "no"
            raise ParseError(f"wire {i} must have exactly two endpoints, got {n}", w)
        wires.append((_parse_port(raw[0], w + "[0]"), _parse_port(raw[1], w + "[1]")))
    inputs = obj.get("inputs", [])
    outputs = obj.get("outputs", [])
    if not isinstance(inputs, list) or not isinstance(outputs, list):
        raise ParseError("inputs and outputs must be lists", where)
    seen = set()
    for side, refs in (("in", inputs), ("out", outputs)):
        for j, raw in enumerate(refs):
            w = at(f"{'inputs' if side == 'in' else 'outputs'}[{j}]")
            b = Port(None, side, j)
            q = _parse_port(raw, w)
            key = frozenset((b, q))
            if q.node is None:
                if key in seen:
                    continue
            seen.add(key)
            wires.append((b, q))
    try:
        d = Diagram(calculus, nodes, wires, len(inputs), len(outputs))
    except DiagramError as exc:
        raise ParseError(str(exc), where) from None
    problems = validate(d)
    if problems:
        raise ParseError("; ".join(str(p) for p in problems), where)
    return d


def _loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, f"column {exc.colno}", exc.lineno) from None


def parse_diagram(text: str) -> Diagram:
    return diagram_from_json(_loads(text))


# proof scripts -----------------------------------------------------------------------


def proof_from_json(obj: Any) -> ProofScript:
    if not isinstance(obj, Mapping):
        raise ParseError("proof script must be a JSON object")
    for key in ("initial", "steps", "final"):
        if key not in obj:
            raise ParseError(f"missing field {key!r}")
    steps = []
    for i, raw in enumerate(obj["steps"]):
        w = f"steps[{i}]"
        if not isinstance(raw, Mapping) or "rule" not in raw:
            raise ParseError("step needs at least a 'rule'", w)
        try:
            dir_ = direction(raw.get("dir", "L->R"))
        except ValueError as exc:
            raise ParseError(str(exc), w + ".dir") from None
        legs = raw.get("legs")
        if legs is not None:
            if not isinstance(legs, list) or not all(isinstance(x, int) for x in legs):
                raise ParseError("legs must be a list of integers", w + ".legs")
            legs = tuple(legs)
        bindings = raw.get("bindings")
        if bindings is not None:
            bindings = {k: decode_value(v, f"{w}.bindings.{k}") for k, v in bindings.items()}
        index = raw.get("index", 0)
        if isinstance(index, bool) or not isinstance(index, int):
            raise ParseError("index must be an integer", w + ".index")
        steps.append(ProofStep(str(raw["rule"]), str(raw.get("library", "")), dir_, index, legs, bindings))
    return ProofScript(
        diagram_from_json(obj["initial"], "initial"), tuple(steps), diagram_from_json(obj["final"], "final")
    )


def proof_to_json(script: ProofScript) -> dict:
    steps = []
    for s in script.steps:
        d = {"rule": s.rule, "library": s.library, "dir": s.dir, "index": s.index}
        if s.legs is not None:
            d["legs"] = list(s.legs)
        if s.bindings:
            d["bindings"] = {k: encode_value(v) for k, v in s.bindings.items()}
        steps.append(d)
    return {"initial": diagram_to_json(script.initial), "steps": steps, "final": diagram_to_json(script.final)}


def parse_proof(text: str) -> ProofScript:
    return proof_from_json(_loads(text))


def print_proof(script: ProofScript) -> str:
    return json.dumps(proof_to_json(script), indent=1)


# tensors -----------------------------------------------------------------------------


def tensor_to_json(t: Tensor) -> dict:
    """Exact tensors list ring coordinates per entry; float ones list re and im parts."""
    if isinstance(t, ExactTensor):
        entries = t.entries()
        flat = [encode_value(x) for x in entries.ravel()]
        return {"shape": list(t.shape), "exact": True, "entries": flat}
    a = np.asarray(t, dtype=complex)
    return {
        "shape": list(a.shape),
        "exact": False,
        "re": [_num(x) for x in a.real.ravel()],
        "im": [_num(x) for x in a.imag.ravel()],
    }


def _num(x: float) -> float:
    x = float(x)
    return 0.0 if x == 0 else x


def tensor_from_json(obj: Mapping) -> Tensor:
    shape = tuple(obj["shape"])
    if obj.get("exact"):
        vals = [decode_value(e) for e in obj["entries"]]
        return ExactTensor.from_scalars(vals, shape)
    return (np.asarray(obj["re"], dtype=float) + 1j * np.asarray(obj["im"], dtype=float)).reshape(shape)


def complex_pair(z: complex) -> list[float]:
    return [_num(z.real), _num(z.imag)]


def dumps(obj: Any) -> str:
    """Stable JSON for reports."""
    return json.dumps(obj, indent=1, sort_keys=True, default=_default)


def _default(o: Any) -> Any:
    if isinstance(o, (Phase, ExactScalar)):
        return encode_value(o)
    if isinstance(o, complex):
        return complex_pair(o)
    if isinstance(o, np.ndarray):
        return tensor_to_json(o)
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, Fraction):
        return str(o)
    if isinstance(o, float) and math.isnan(o):
        return None
    raise TypeError(f"cannot serialise {type(o).__name__}")

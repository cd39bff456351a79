"""Command-line entry point.

Every subcommand prints JSON on stdout and diagnostics on stderr. Exit codes:
0 when the command succeeds and any check it runs passes, 1 when a check
fails, 2 on usage or parse errors.

Global flags can also be set through environment variables named
``GROUNDZX_<FLAG>`` (e.g. ``GROUNDZX_TOL=1e-8``); explicit flags win.
"""
from __future__ import annotations

import argparse
import os
import sys
import time
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .axioms import LIBRARY_NAMES, UnknownLibrary, verify_library
from .cpm import cp_equal, cp_residual, interpret_cpm
from .diagram import Diagram, DiagramError, GroundPresent
from .io import (
    ParseError,
    complex_pair,
    decode_value,
    diagram_to_json,
    dumps,
    parse_diagram,
    parse_proof,
    tensor_to_json,
)
from .properties import (
    check_iso_related,
    cliffordt_counterexample,
    clifford_word,
    is_causal,
    is_isometry,
    iso_witness_qubit,
    purify,
    stab_conjugate_witness,
)
from .rewrite import verify_proof
from .scalars import ExactScalar
from .semantics import EXACT, FLOAT, choose_backend, interp
from .stabilizer import phase_between, stabilizer_states
from .tensors import mat_equal, max_residual, to_complex

ENV_PREFIX = "GROUNDZX_"


@dataclass(frozen=True)
class CliConfig:
    backend: Optional[str] = None
    tol: float = 1e-9
    seed: int = 0
    samples: int = 25
    legs: int = 3

    def __post_init__(self):
        if self.backend not in (None, EXACT, FLOAT):
            raise ValueError(f"backend must be {EXACT} or {FLOAT}, got {self.backend!r}")
        if not self.tol > 0:
            raise ValueError("tol must be positive")
        if self.samples < 1:
            raise ValueError("samples must be at least 1")
        if self.legs < 0:
            raise ValueError("legs must be non-negative")


class UsageError(Exception):
    pass


def _env(name: str, cast, default):
    raw = os.environ.get(ENV_PREFIX + name.upper())
    if raw is None or raw == "":
        return default
    try:
        return cast(raw)
    except ValueError:
        raise UsageError(f"bad value {raw!r} for {ENV_PREFIX}{name.upper()}") from None


def config_from_args(args: argparse.Namespace) -> CliConfig:
    def pick(name, cast, default):
        v = getattr(args, name, None)
        return v if v is not None else _env(name, cast, default)

    try:
        return CliConfig(
            backend=pick("backend", str, None),
            tol=pick("tol", float, 1e-9),
            seed=pick("seed", int, 0),
            samples=pick("samples", int, 25),
            legs=pick("legs", int, 3),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _read(path: str) -> str:
    try:
        if path == "-":
            return sys.stdin.read()
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _diagram(path: str) -> Diagram:
    try:
        return parse_diagram(_read(path))
    except ParseError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _emit(obj) -> None:
    sys.stdout.write(dumps(obj) + "\n")


def _split(values: Optional[Sequence[int]]) -> tuple[int, int]:
    return tuple(values) if values else (0, 0)  # type: ignore[return-value]


# subcommands -------------------------------------------------------------------------


def cmd_interp(args, cfg: CliConfig) -> int:
    d = _diagram(args.file)
    if d.contains_ground:
        print("diagram contains ground; use cpm-interp for its CP semantics", file=sys.stderr)
        return 1
    backend = choose_backend(d, cfg.backend)
    t = interp(d, backend)
    _emit({"backend": backend, "n_in": d.n_in, "n_out": d.n_out, "matrix": tensor_to_json(t)})
    return 0


def cmd_cpm_interp(args, cfg: CliConfig) -> int:
    d = _diagram(args.file)
    s = interpret_cpm(d, cfg.backend)
    _emit({"backend": EXACT if s.exact else FLOAT, "n_in": s.n_in, "n_out": s.n_out, "choi": tensor_to_json(s.choi)})
    return 0


def cmd_check_equal(args, cfg: CliConfig) -> int:
    a, b = _diagram(args.a), _diagram(args.b)
    if a.contains_ground or b.contains_ground:
        print("check-equal compares pure diagrams; use cp-equal for diagrams with ground", file=sys.stderr)
        return 2
    if (a.n_in, a.n_out) != (b.n_in, b.n_out):
        _emit({"equal": False, "reason": "boundary mismatch"})
        return 1
    ta, tb = interp(a, choose_backend(a, cfg.backend)), interp(b, choose_backend(b, cfg.backend))
    exact = not isinstance(ta, np.ndarray) and not isinstance(tb, np.ndarray)
    eq = mat_equal(ta, tb) if exact else mat_equal(to_complex(ta), to_complex(tb), cfg.tol)
    _emit({"equal": eq, "exact": exact, "residual": max_residual(to_complex(ta), to_complex(tb))})
    return 0 if eq else 1


def cmd_cp_equal(args, cfg: CliConfig) -> int:
    a, b = _diagram(args.a), _diagram(args.b)
    split = _split(args.split)
    if a.contains_ground or b.contains_ground:
        sa, sb = interpret_cpm(a, cfg.backend), interpret_cpm(b, cfg.backend)
        if (sa.n_in, sa.n_out) != (sb.n_in, sb.n_out):
            _emit({"cp_equal": False, "reason": "boundary mismatch"})
            return 1
        eq = sa.equals(sb, cfg.tol)
        res = sa.residual(sb)
    else:
        try:
            eq = cp_equal(a, b, split, cfg.tol, cfg.backend)
        except ValueError as exc:
            _emit({"cp_equal": False, "reason": str(exc)})
            return 1
        res = cp_residual(a, b, split)
    _emit({"cp_equal": eq, "split": list(split), "residual": res})
    return 0 if eq else 1


def cmd_isometry(args, cfg: CliConfig) -> int:
    d = _diagram(args.file)
    if d.contains_ground:
        print("isometry needs a ground-free diagram", file=sys.stderr)
        return 1
    ok = is_isometry(d, cfg.tol, cfg.backend)
    _emit({"isometry": ok})
    return 0 if ok else 1


def cmd_causal(args, cfg: CliConfig) -> int:
    ok = is_causal(_diagram(args.file), cfg.tol, cfg.backend)
    _emit({"causal": ok})
    return 0 if ok else 1


def cmd_purify(args, cfg: CliConfig) -> int:
    p = purify(_diagram(args.file))
    _emit(
        {
            "ancilla_count": p.ancilla_count,
            "placement": [list(x) for x in p.placement],
            "pure": diagram_to_json(p.pure),
        }
    )
    return 0


def cmd_iso_witness(args, cfg: CliConfig) -> int:
    f, g = _diagram(args.f), _diagram(args.g)
    if f.contains_ground or g.contains_ground:
        print("iso-witness compares purifications; purify the diagrams first", file=sys.stderr)
        return 2
    split = _split(args.split)
    try:
        w = iso_witness_qubit(f, g, split, tol=max(cfg.tol, 1e-8))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if w is None:
        _emit({"witness": None, "cp_equal": False})
        return 1
    ok = check_iso_related(f, g, w, tol=max(cfg.tol, 1e-8))
    _emit({"witness": {"u": tensor_to_json(w.u), "v": tensor_to_json(w.v)}, "residual": w.residual, "checked": ok})
    return 0 if ok else 1


def cmd_verify_axioms(args, cfg: CliConfig) -> int:
    names = list(LIBRARY_NAMES) if args.library == ["all"] else args.library
    reports = []
    sound = True
    for name in names:
        t0 = time.perf_counter()
        try:
            rep = verify_library(name, cfg.samples, cfg.tol, cfg.seed, cfg.legs, cfg.backend)
        except UnknownLibrary as exc:
            raise UsageError(exc.args[0]) from None
        elapsed = time.perf_counter() - t0
        print(rep.table(), file=sys.stderr)
        print(f"({elapsed:.2f} s)", file=sys.stderr)
        reports.append(rep.to_dict())
        sound = sound and rep.sound
    _emit({"sound": sound, "libraries": reports} if len(reports) > 1 else reports[0])
    return 0 if sound else 1


def cmd_verify_proof(args, cfg: CliConfig) -> int:
    try:
        script = parse_proof(_read(args.file))
    except ParseError as exc:
        raise UsageError(f"{args.file}: {exc}") from None
    rep = verify_proof(script, semantic_check=args.semantic_check, tol=cfg.tol)
    for s in rep.steps:
        if not s.ok:
            print(f"step {s.index} ({s.rule}) failed: {s.error}", file=sys.stderr)
    if rep.error:
        print(rep.error, file=sys.stderr)
    _emit(rep.to_dict())
    return 0 if rep.valid else 1


def cmd_counterexample(args, cfg: CliConfig) -> int:
    phi = None
    if args.phi is not None:
        try:
            phi = decode_value(args.phi)
        except ParseError as exc:
            raise UsageError(str(exc)) from None
        if not isinstance(phi, ExactScalar):
            raise UsageError("--phi must be an exact ring element such as ((1,0,2,0),0)")
    rep = cliffordt_counterexample(phi)
    _emit(rep.to_dict() | {"float_quotient": complex_pair(rep.float_quotient)})
    return 0 if rep.passed else 1


def cmd_stab_witness(args, cfg: CliConfig) -> int:
    out = []
    ok = True
    for n in args.qubits:
        if n not in (1, 2):
            raise UsageError("tables are bundled for 1 and 2 qubits")
        for i, phi in enumerate(stabilizer_states(n)):
            u = stab_conjugate_witness(phi)
            entry = {"qubits": n, "state": i, "found": u is not None}
            if u is not None:
                lam = phase_between(u @ phi, phi.conj(), 1e-10)
                entry["word"] = list(clifford_word(u) or ())
                entry["residual"] = float(np.abs(u @ phi - lam * phi.conj()).max())
            ok = ok and u is not None
            out.append(entry)
    _emit({"all_found": ok, "states": out})
    return 0 if ok else 1


# parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--backend", choices=[EXACT, FLOAT], default=None)
    common.add_argument("--tol", type=float, default=None)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--samples", type=int, default=None)
    common.add_argument("--legs", type=int, default=None, help="largest variadic leg count to sweep")

    p = argparse.ArgumentParser(
        prog="groundzx",
        description="Ground-extended ZX, ZW and ZH diagrams: semantics, axioms and proof checking.",
        epilog=f"Flags may also be given as {ENV_PREFIX}<FLAG> environment variables.",
    )
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("interp", cmd_interp, "matrix of a ground-free diagram").add_argument("file")
    add("cpm-interp", cmd_cpm_interp, "Choi matrix of a diagram").add_argument("file")
    sp = add("check-equal", cmd_check_equal, "compare two pure diagrams")
    sp.add_argument("a")
    sp.add_argument("b")
    sp = add("cp-equal", cmd_cp_equal, "compare as CP maps")
    sp.add_argument("a")
    sp.add_argument("b")
    sp.add_argument("--split", type=int, nargs=2, metavar=("X", "Y"), help="trailing ancilla outputs of a and b")
    add("isometry", cmd_isometry, "is the diagram an isometry").add_argument("file")
    add("causal", cmd_causal, "is the diagram causal").add_argument("file")
    add("purify", cmd_purify, "replace grounds by ancilla outputs").add_argument("file")
    sp = add("iso-witness", cmd_iso_witness, "isometries relating two purifications")
    sp.add_argument("f")
    sp.add_argument("g")
    sp.add_argument("--split", type=int, nargs=2, metavar=("X", "Y"))
    sp = add("verify-axioms", cmd_verify_axioms, "soundness of rule libraries")
    sp.add_argument("library", nargs="+", help=f"one or more of {', '.join(LIBRARY_NAMES)}, or all")
    sp = add("verify-proof", cmd_verify_proof, "replay a proof script")
    sp.add_argument("file")
    sp.add_argument("--semantic-check", action="store_true", help="compare CP semantics after every step")
    sp = add("counterexample-cliffordt", cmd_counterexample, "cp-equal scalars with no Clifford+T witness")
    sp.add_argument("--phi", default=None, help="ring element, default 1+2i")
    sp = add("stab-witness", cmd_stab_witness, "Clifford U with U phi = conj(phi) for stabilizer states")
    sp.add_argument("--qubits", type=int, nargs="+", default=[1, 2])
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else 2
    try:
        cfg = config_from_args(args)
        return args.fn(args, cfg)
    except UsageError as exc:
        print(f"groundzx: error: {exc}", file=sys.stderr)
        return 2
    except GroundPresent as exc:
        print(f"groundzx: {exc}", file=sys.stderr)
        return 1
    except DiagramError as exc:
        print(f"groundzx: error: {exc}", file=sys.stderr)
        return 2


def run() -> None:
    sys.exit(main())


__all__ = ["CliConfig", "ENV_PREFIX", "build_parser", "main"]

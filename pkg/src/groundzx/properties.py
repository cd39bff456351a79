"""Isometry and causality checks, purification, and isometry witnesses."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Union

import numpy as np
import scipy.linalg

from .cpm import Operand, Superoperator, cp_map, interpret_cpm, partial_trace_outputs, _pure_matrix
from .diagram import Diagram, GroundPresent
from .purify import PurificationResult, purify
from .scalars import ExactScalar, quotient_in_field, ring_divide_exact, to_complex as scalar_to_complex, to_text
from .semantics import FLOAT, choose_backend, interp
from .stabilizer import clifford_group, find_in_table, phase_between
from .tensors import ExactTensor, Tensor, mat_dagger, mat_equal, mat_mul, stack_identity, to_complex

__all__ = [
    "IsoWitness",
    "PurificationResult",
    "check_iso_related",
    "cliffordt_counterexample",
    "is_causal",
    "is_isometry",
    "iso_witness_qubit",
    "purify",
    "stab_conjugate_witness",
]

RANK_CUTOFF = 1e-8


def is_isometry(d: Union[Diagram, Tensor], tol: float = 1e-9, backend: Optional[str] = None) -> bool:
    """M^dagger M = I, exactly on the exact backend."""
    if isinstance(d, Diagram):
        if d.contains_ground:
            raise GroundPresent("is_isometry needs a ground-free diagram")
        m = interp(d, choose_backend(d, backend))
    else:
        m = d
    gram = mat_mul(mat_dagger(m), m)
    ident = stack_identity(gram.shape[0], isinstance(gram, ExactTensor))
    return mat_equal(gram, ident, tol)


def discard_choi(s: Superoperator) -> Superoperator:
    """The CP map followed by discarding every output."""
    return partial_trace_outputs(s, range(s.n_out))


def is_causal(d: Diagram, tol: float = 1e-9, backend: Optional[str] = None) -> bool:
    """Discarding all outputs of d equals discarding its inputs."""
    t = discard_choi(interpret_cpm(d, backend)).choi
    ident = stack_identity(2**d.n_in, isinstance(t, ExactTensor))
    return mat_equal(t, ident, tol)


# isometry witnesses ---------------------------------------------------------------


@dataclass(frozen=True)
class IsoWitness:
    """Isometries u: X -> Z and v: Y -> Z with (1 (x) u) f = (1 (x) v) g."""

    u: np.ndarray
    v: np.ndarray
    residual: float = 0.0


def _env_matrix(m: np.ndarray, n_anc: int) -> np.ndarray:
    """V[(i, b), e] = M[(b, e), i] for the last ``n_anc`` outputs as environment."""
    rows, cols = m.shape
    x = 2**n_anc
    b = rows // x
    return m.reshape(b, x, cols).transpose(2, 0, 1).reshape(cols * b, x)


def _complete_rows(p: np.ndarray) -> np.ndarray:
    """Extend the orthonormal columns of p (X x r) to a unitary X x X."""
    x, r = p.shape
    if r == x:
        return p
    null = scipy.linalg.null_space(p.conj().T)
    return np.hstack([p, null[:, : x - r]])


def _place(u_cols: np.ndarray, z: int) -> np.ndarray:
    """X x Z with the given X x X block in the first columns."""
    x = u_cols.shape[0]
    out = np.zeros((x, z), dtype=complex)
    out[:, : u_cols.shape[1]] = u_cols
    return out


def iso_witness_qubit(
    f: Operand,
    g: Operand,
    split: tuple[int, int] = (0, 0),
    tol: float = 1e-8,
) -> Optional[IsoWitness]:
    """Stinespring-style witness for f ~iso g, or None when f and g differ as CP maps.

    Both are compared as ``A -> B (x) X`` and ``A -> B (x) Y`` with X, Y the
    trailing ``split`` outputs. Z has dimension max(dim X, dim Y).
    """
    mf = to_complex(_pure_matrix(f, FLOAT))
    mg = to_complex(_pure_matrix(g, FLOAT))
    xf, yg = 2 ** split[0], 2 ** split[1]
    if mf.shape[1] != mg.shape[1] or mf.shape[0] // xf != mg.shape[0] // yg:
        raise ValueError(f"boundary mismatch between f {mf.shape} and g {mg.shape} with split {split}")
    vf = _env_matrix(mf, split[0])
    vg = _env_matrix(mg, split[1])
    jf = vf @ vf.conj().T
    jg = vg @ vg.conj().T
    scale = max(1.0, float(np.abs(jf).max(initial=0.0)))
    if np.abs(jf - jg).max(initial=0.0) > tol * scale:
        return None
    w, e = np.linalg.eigh((jf + jg) / 2)
    top = w.max(initial=0.0)
    keep = w > RANK_CUTOFF * top if top > 0 else np.zeros_like(w, dtype=bool)
    lam, er = w[keep], e[:, keep]
    inv = er / np.sqrt(lam)
    # V = W A with W = E sqrt(Lam); A has orthonormal rows
    af = inv.conj().T @ vf
    ag = inv.conj().T @ vg
    z = max(xf, yg)
    uf = _place(_complete_rows(af.conj().T), z)
    ug = _place(_complete_rows(ag.conj().T), z)
    # rows of uf are orthonormal; the isometry itself is the transpose
    u, v = uf.T, ug.T
    res = _witness_residual(mf, mg, u, v)
    return IsoWitness(u, v, res)


def _witness_residual(mf: np.ndarray, mg: np.ndarray, u: np.ndarray, v: np.ndarray) -> float:
    bf = mf.shape[0] // u.shape[1]
    bg = mg.shape[0] // v.shape[1]
    if bf != bg:
        raise ValueError("witness shapes do not fit the operands")
    lhs = np.kron(np.eye(bf), u) @ mf
    rhs = np.kron(np.eye(bg), v) @ mg
    return float(np.abs(lhs - rhs).max(initial=0.0))


def check_iso_related(
    f: Operand,
    g: Operand,
    w: IsoWitness,
    tol: float = 1e-8,
) -> bool:
    """u and v are isometries and (1 (x) u) f = (1 (x) v) g within tol."""
    mf = to_complex(_pure_matrix(f, FLOAT))
    mg = to_complex(_pure_matrix(g, FLOAT))
    u, v = np.asarray(w.u, dtype=complex), np.asarray(w.v, dtype=complex)
    if u.shape[0] != v.shape[0]:
        raise ValueError("u and v must share their target space")
    if mf.shape[0] % u.shape[1] or mg.shape[0] % v.shape[1]:
        raise ValueError("witness shapes do not fit the operands")
    for a in (u, v):
        if np.abs(a.conj().T @ a - np.eye(a.shape[1])).max(initial=0.0) > tol:
            return False
    try:
        return _witness_residual(mf, mg, u, v) <= tol
    except ValueError:
        return False


# Clifford+T counterexample -------------------------------------------------------


@dataclass
class CounterexampleReport:
    phi: str
    phi_conj: str
    in_ring: bool
    cp_equal: bool
    exact_quotient: Optional[str]
    float_quotient: complex
    field_quotient: tuple
    facts: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.facts.values())

    def to_dict(self) -> dict:
        q = self.float_quotient
        return {
            "phi": self.phi,
            "phi_conj": self.phi_conj,
            "in_ring": self.in_ring,
            "cp_equal": self.cp_equal,
            "exact_quotient": self.exact_quotient,
            "float_quotient": [q.real, q.imag],
            "facts": dict(self.facts),
            "passed": self.passed,
        }


def cliffordt_counterexample(phi: Optional[ExactScalar] = None) -> CounterexampleReport:
    """Check that phi and conj(phi) are equal as CP maps but not isometry related.

    With the default phi = 1 + 2i the three facts hold: both scalars are in
    the ring, they are cp-equal, and their quotient is not in the ring, so no
    Clifford+T morphism w with conj(phi) w = phi exists.
    """
    if phi is None:
        phi = ExactScalar.from_gaussian(1, 2)
    psi = phi.conjugate()
    f = ExactTensor.from_scalars([[phi]])
    g = ExactTensor.from_scalars([[psi]])
    cp = cp_map(f).equals(cp_map(g))
    q = ring_divide_exact(phi, psi)
    fq = scalar_to_complex(phi) / scalar_to_complex(psi)
    in_ring = isinstance(phi, ExactScalar) and isinstance(psi, ExactScalar)
    rep = CounterexampleReport(
        phi=to_text(phi),
        phi_conj=to_text(psi),
        in_ring=in_ring,
        cp_equal=cp,
        exact_quotient=None if q is None else to_text(q),
        float_quotient=complex(fq),
        field_quotient=quotient_in_field(phi, psi),
    )
    rep.facts = {
        "in_ring": in_ring,
        "cp_equal": cp,
        "quotient_not_in_ring": q is None,
    }
    return rep


# stabilizer conjugate witness ---------------------------------------------------------


def stab_conjugate_witness(phi: Union[np.ndarray, Tensor], tol: float = 1e-10) -> Optional[np.ndarray]:
    """A Clifford U with U phi = conj(phi) up to global phase, or None.

    phi must be one of the bundled 1- or 2-qubit stabilizer states.
    """
    v = to_complex(phi).ravel()
    if find_in_table(v, tol) is None:
        raise ValueError("state is not in the bundled stabilizer tables")
    n = v.size.bit_length() - 1
    target = v.conj()
    for _, u in clifford_group(n):
        if phase_between(u @ v, target, tol) is not None:
            return u
    return None


def clifford_word(u: np.ndarray) -> Optional[tuple[str, ...]]:
    """The generator word recorded for a Clifford matrix in the tables."""
    n = u.shape[0].bit_length() - 1
    for word, m in clifford_group(n):
        if phase_between(u.ravel(), m.ravel(), 1e-9) is not None:
            return word
    return None

import numpy as np
import pytest

from groundzx import builders as B
from groundzx.cpm import interpret_cpm, traced_double
from groundzx.diagram import GroundPresent, identity, tensor
from groundzx.params import Phase
from groundzx.properties import (
    check_iso_related,
    cliffordt_counterexample,
    is_causal,
    is_isometry,
    iso_witness_qubit,
    purify,
    stab_conjugate_witness,
)
from groundzx.properties import IsoWitness
from groundzx.random_diagrams import random_ground_diagram, random_isometry, random_matrix
from groundzx.scalars import ExactScalar
from groundzx.semantics import interp
from groundzx.stabilizer import clifford_group, stabilizer_states
from groundzx.tensors import to_complex

import oracles as O

V = O.load()


def test_isometry_examples():
    assert is_isometry(B.cnot())
    assert is_isometry(B.ket0())
    assert is_isometry(B.z_spider(1, 2)) == V["copy_is_isometry"]
    assert is_isometry(B.cup()) == V["cup_is_isometry"]
    assert not is_isometry(B.z_spider(0, 0))
    with pytest.raises(GroundPresent):
        is_isometry(B.ground(1))


def test_causal_examples():
    assert is_causal(B.cnot())
    assert is_causal(B.ground(2))
    assert is_causal(B.h() >> B.ground(1))
    assert is_causal(B.z_spider(0, 0)) == V["is_causal_z00"]
    assert np.isclose(interpret_cpm(B.z_spider(0, 0)).matrix()[0, 0], V["z00_doubled"])
    assert not is_causal(B.cup())


def test_purify_counts_and_semantics(rng):
    d = tensor(B.ground(1), identity(1))
    p = purify(d)
    assert p.ancilla_count == 1 and not p.pure.contains_ground
    assert p.pure.n_out == d.n_out + 1
    for _ in range(30):
        g = random_ground_diagram(rng)
        p = purify(g)
        s = traced_double(interp(p.pure), p.ancilla_count)
        assert s.residual(interpret_cpm(g, "float")) <= 1e-9


def test_purify_without_grounds_is_identity():
    p = purify(B.cnot())
    assert p.ancilla_count == 0 and p.pure == B.cnot()


def test_witness_for_ancilla_padding():
    f = interp(B.cnot())
    g = interp(tensor(B.cnot(), B.ket0()))
    w = iso_witness_qubit(f, g, split=(0, 1))
    assert w is not None
    assert check_iso_related(f, g, w)
    # u sends the trivial environment to a unit vector, v is unitary on one qubit
    assert w.u.shape == (2, 1) and w.v.shape == (2, 2)


def test_witness_for_cliffordt_scalars():
    f = np.array([[1 + 2j]])
    g = np.array([[1 - 2j]])
    w = iso_witness_qubit(f, g)
    assert check_iso_related(f, g, w)
    u, v = complex(w.u[0, 0]), complex(w.v[0, 0])
    # the witness is unique up to a common phase
    ref_u, ref_v = complex(*V["witness_u"]), complex(*V["witness_v"])
    assert np.isclose(u / v, ref_u / ref_v)
    assert np.isclose(abs((1 + 2j) * u), abs(complex(*V["witness_common"])))


def test_witness_none_when_cp_differs(rng):
    f = random_matrix(rng, 4, 2)
    g = random_matrix(rng, 4, 2)
    assert iso_witness_qubit(f, g, split=(1, 1)) is None


def test_witness_random_pairs(rng):
    for _ in range(20):
        f = random_matrix(rng, 4, 2)
        u = random_isometry(rng, 2, 4)
        g = np.kron(np.eye(2), u) @ f
        w = iso_witness_qubit(f, g, split=(1, 2))
        assert w is not None and check_iso_related(f, g, w)


def test_check_iso_related_rejects_non_isometry():
    f = np.eye(2)
    bad = IsoWitness(np.array([[2.0]]), np.array([[2.0]]))
    assert not check_iso_related(f, f, bad)


def test_cliffordt_counterexample():
    r = cliffordt_counterexample()
    assert r.passed
    assert r.exact_quotient is None
    assert abs(r.float_quotient - complex(*V["cliffordt_quotient"])) <= 1e-12
    assert r.to_dict()["facts"] == {"in_ring": True, "cp_equal": True, "quotient_not_in_ring": True}


def test_counterexample_discriminates():
    r = cliffordt_counterexample(ExactScalar.from_gaussian(1, 1))
    assert not r.passed
    assert r.exact_quotient == "((0,0,1,0),0)"
    assert np.isclose(r.float_quotient, complex(*V["ring_quotient_1pi"]))


def test_group_and_state_counts():
    assert len(clifford_group(1)) == 24
    assert len(clifford_group(2)) == 11520
    assert [len(stabilizer_states(n)) for n in (1, 2)] == V["stab_counts"]


def test_stab_witness_y_plus():
    phi = np.array([1, 1j]) / np.sqrt(2)
    u = stab_conjugate_witness(phi)
    out = u @ phi
    k = np.vdot(phi.conj(), out)
    assert np.isclose(abs(k), 1)
    assert np.allclose(out, k * phi.conj())


def test_stab_witness_rejects_non_stabilizer():
    with pytest.raises(ValueError):
        stab_conjugate_witness(to_complex(interp(B.h() >> B.t())) @ np.array([1, 0]))


def test_spider_phase_states_cp():
    a = interpret_cpm(B.z_spider(0, 1, Phase.pi(1, 4)))
    b = interpret_cpm(B.z_spider(0, 1, Phase.pi(-1, 4)))
    assert not a.equals(b)

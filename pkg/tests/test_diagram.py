import numpy as np
import pytest

from groundzx import builders as B
from groundzx.diagram import (
    ArityMismatch,
    CalculusMismatch,
    Diagram,
    Node,
    Port,
    compose,
    conjugate,
    dagger,
    empty,
    identity,
    isomorphic,
    permutation,
    single,
    swap_colours,
    tensor,
    transpose_diagram,
    validate,
)
from groundzx.params import Phase
from groundzx.semantics import EXACT, interp
from groundzx.tensors import to_complex

import oracles as O


def m(d):
    return to_complex(interp(d))


def test_compose_order_and_arity():
    d = compose(B.h(), B.s())
    assert np.allclose(m(d), O.H @ O.S)
    assert np.allclose(m(B.s() >> B.h()), O.H @ O.S)
    with pytest.raises(ArityMismatch):
        compose(B.cnot(), B.h())


def test_hh_is_identity():
    assert np.allclose(m(B.h() >> B.h()), np.eye(2))


def test_tensor_is_kron():
    assert np.allclose(m(tensor(B.h(), B.t())), np.kron(O.H, O.T))
    assert np.allclose(m(B.h() @ B.h()), np.kron(O.H, O.H))


def test_calculus_mismatch():
    with pytest.raises(CalculusMismatch):
        tensor(B.h(), B.negation())


def test_identity_and_empty():
    assert m(identity(0)).shape == (1, 1)
    assert np.allclose(m(identity(2)), np.eye(4))
    e = empty("ZX")
    assert (e.n_in, e.n_out) == (0, 0)
    assert np.allclose(m(tensor(e, B.h())), O.H)


def test_dagger_spider():
    d = dagger(B.z_spider(1, 2, Phase.pi(1, 4)))
    node = next(iter(d.nodes.values()))
    assert (node.n_in, node.n_out) == (2, 1)
    assert node.param == Phase.pi(-1, 4)
    assert np.allclose(m(d), O.z_spider(1, 2, np.pi / 4).conj().T)


def test_dagger_matches_matrix(rng):
    from groundzx.random_diagrams import random_tensor_diagram

    for _ in range(10):
        d = random_tensor_diagram(rng)
        assert np.allclose(m(dagger(d)), m(d).conj().T)
        assert np.allclose(m(conjugate(d)), m(d).conj())
        assert np.allclose(m(transpose_diagram(d)), m(d).T)


def test_conjugate_scalar():
    z = to_complex(interp(conjugate(B.z_spider(0, 0, Phase.pi(1, 2))), EXACT))
    assert np.allclose(z, [[1 - 1j]])


def test_swap_colours():
    d = swap_colours(B.z_spider(1, 2, Phase.pi(1, 4)))
    assert np.allclose(m(d), O.x_spider(1, 2, np.pi / 4))


def test_permutation():
    assert np.allclose(m(permutation([1, 0])), O.SWAP)
    p = permutation([2, 0, 1])
    assert np.allclose(m(p) @ m(dagger(p)), np.eye(8))


def test_validate_flags_bad_parameter():
    d = Diagram("ZX", {0: Node("Z", 1, 1, "nonsense")}, [(Port(None, "in", 0), Port(0, "in", 0)), (Port(0, "out", 0), Port(None, "out", 0))], 1, 1)
    assert validate(d)
    assert not validate(B.cnot())


def test_ground_builder():
    g = B.ground(2)
    assert g.contains_ground
    assert (g.n_in, g.n_out) == (2, 0)


def test_isomorphic_up_to_renaming():
    a = B.h() >> B.s()
    b = a.relabel(10)
    assert isomorphic(a, b)
    assert not isomorphic(a, B.s() >> B.h())


def test_validate_flags_unknown_kind():
    assert validate(single("ZX", Node("Bogus", 1, 1)))
    assert validate(single("ZX", Node("W", 1, 1)))

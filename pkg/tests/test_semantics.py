import numpy as np
import pytest

from groundzx import builders as B
from groundzx.diagram import tensor
from groundzx.params import Phase
from groundzx.scalars import ExactScalar, from_complex
from groundzx.semantics import EXACT, FLOAT, InexactParameter, choose_backend, exact_representable, interp
from groundzx.tensors import ExactTensor, mat_dagger, mat_equal, mat_mul, proportionality, to_complex

import oracles as O


def builder_for(name):
    fixed = {
        "H": B.h,
        "S": B.s,
        "T": B.t,
        "CNOT": B.cnot,
        "ket0": B.ket0,
        "cup": B.cup,
        "cap": B.cap,
        "swap": B.swap,
        "fswap": B.fswap,
        "not": B.negation,
    }
    if name in fixed:
        return fixed[name]()
    head, _, k = name.partition("_")
    if head.startswith("ZHX"):
        return B.x_spider(int(head[3]), int(head[4]), calculus="ZH")
    if head.startswith("ZWZ"):
        return B.zw_z(int(head[3]), int(head[4]), ExactScalar.omega_power(int(k)))
    if head.startswith("HB"):
        return B.h_box(int(head[2]), int(head[3]), ExactScalar.omega_power(int(k)))
    n, m = int(head[1]), int(head[2])
    if head[0] == "W":
        return B.w_node(n, m)
    spider = B.z_spider if head[0] == "Z" else B.x_spider
    return spider(n, m, Phase.pi(int(k), 4))


def exact_of(a):
    entries = [from_complex(complex(z)) for z in a.ravel()]
    assert all(e is not None for e in entries)
    return ExactTensor.from_scalars(entries, a.shape)


GOLDEN = O.golden_matrices()


@pytest.mark.parametrize("name", sorted(GOLDEN))
def test_golden_generator(name):
    d = builder_for(name)
    want = GOLDEN[name]
    e = interp(d, EXACT)
    assert mat_equal(e, exact_of(want))
    assert np.abs(interp(d, FLOAT) - want).max(initial=0) <= 1e-12


def test_h_squared_exact():
    h = interp(B.h(), EXACT)
    assert mat_equal(mat_mul(h, h), ExactTensor.identity(2))


def test_t_unitary_exact():
    t = interp(B.t(), EXACT)
    assert mat_equal(mat_mul(mat_dagger(t), t), ExactTensor.identity(2))


def test_functoriality_on_tensor():
    assert mat_equal(interp(tensor(B.h(), B.h()), EXACT), exact_of(np.kron(O.H, O.H)))


def test_zero_scalar():
    assert mat_equal(interp(B.z_spider(0, 0, Phase.pi(1, 1)), EXACT), ExactTensor.zeros((1, 1)))


def test_proportionality_none_for_different_spiders():
    a = interp(B.z_spider(1, 1, Phase.pi(1, 2)))
    b = interp(B.x_spider(1, 1, Phase.pi(1, 2)))
    assert proportionality(a, b) is None


def test_backend_choice():
    assert exact_representable(B.t())
    assert choose_backend(B.t()) == EXACT
    d = B.z_spider(1, 1, 0.3)
    assert not exact_representable(d)
    assert choose_backend(d) == FLOAT
    with pytest.raises(InexactParameter):
        interp(d, EXACT)


def test_interp_rejects_ground():
    with pytest.raises(Exception):
        interp(B.ground(1))


def test_contraction_order_independent(rng):
    from groundzx.random_diagrams import random_tensor_diagram

    for _ in range(10):
        d = random_tensor_diagram(rng, width=3)
        a = to_complex(interp(d, FLOAT, order="greedy"))
        b = to_complex(interp(d, FLOAT, order="sequential"))
        assert np.allclose(a, b)

import cmath

import numpy as np

from groundzx.scalars import (
    ExactScalar,
    from_text,
    quotient_in_field,
    ring_add,
    ring_conj,
    ring_divide_exact,
    ring_mul,
    to_complex,
    to_text,
)

import oracles as O


def rand_scalar(rng):
    return ExactScalar([int(x) for x in rng.integers(-5, 6, size=4)], int(rng.integers(0, 4)))


def test_omega_and_sqrt2():
    w = ExactScalar.omega_power(1)
    assert np.isclose(to_complex(w), cmath.exp(1j * cmath.pi / 4))
    assert w * w * w * w * w * w * w * w == ExactScalar.from_int(1)
    r = ExactScalar.sqrt2_power(1)
    assert r * r == ExactScalar.from_int(2)
    assert np.isclose(to_complex(ExactScalar.sqrt2_power(-3)), 2 ** -1.5)


def test_ring_laws_match_floats(rng):
    for _ in range(200):
        a, b = rand_scalar(rng), rand_scalar(rng)
        assert np.isclose(to_complex(ring_add(a, b)), to_complex(a) + to_complex(b))
        assert np.isclose(to_complex(ring_mul(a, b)), to_complex(a) * to_complex(b))
        assert np.isclose(to_complex(ring_conj(a)), to_complex(a).conjugate())
        assert a * b == b * a


def test_canonical_form():
    # 2/sqrt2^2 == 1
    assert ExactScalar((2, 0, 0, 0), 2) == ExactScalar.from_int(1)
    assert hash(ExactScalar((2, 0, 0, 0), 2)) == hash(ExactScalar.from_int(1))


def test_text_round_trip(rng):
    for _ in range(50):
        a = rand_scalar(rng)
        assert from_text(to_text(a)) == a
    assert to_text(ExactScalar.from_int(1)) == "((1,0,0,0),0)"


def test_divide_exact_cliffordt_pair():
    phi = ExactScalar.from_gaussian(1, 2)
    assert ring_divide_exact(phi, phi.conjugate()) is None
    q, k = quotient_in_field(phi, phi.conjugate())
    z = complex(sum(float(c) * cmath.exp(1j * cmath.pi * j / 4) for j, c in enumerate(q)) / 2 ** (k / 2))
    assert np.allclose([z.real, z.imag], O.load()["cliffordt_quotient"], atol=1e-12)


def test_divide_exact_in_ring():
    phi = ExactScalar.from_gaussian(1, 1)
    q = ring_divide_exact(phi, phi.conjugate())
    assert q == ExactScalar.from_gaussian(0, 1)
    assert np.allclose([to_complex(q).real, to_complex(q).imag], O.load()["ring_quotient_1pi"])


def test_divide_by_sqrt2_power():
    a = ExactScalar.from_gaussian(3, -1)
    d = ExactScalar.sqrt2_power(5)
    assert ring_divide_exact(a, d) * d == a


def test_spider_scalar_cross_backend():
    from groundzx import builders as B
    from groundzx.params import Phase
    from groundzx.semantics import EXACT, FLOAT, interp
    from groundzx.tensors import to_complex as tc

    d = B.z_spider(0, 0, Phase.pi(1, 4))
    e = tc(interp(d, EXACT))[0, 0]
    f = tc(interp(d, FLOAT))[0, 0]
    assert abs(e - f) < 1e-12
    assert abs(e - (1 + cmath.exp(1j * cmath.pi / 4))) < 1e-12

import numpy as np
import pytest

from groundzx import builders as B
from groundzx.cpm import (
    DensityMatrix,
    Superoperator,
    apply,
    cp_equal,
    cp_residual,
    double,
    interpret_cpm,
    partial_trace_outputs,
    traced_double,
)
from groundzx.diagram import identity, tensor
from groundzx.params import Phase
from groundzx.random_diagrams import random_isometry, random_matrix
from groundzx.scalars import ExactScalar
from groundzx.semantics import interp
from groundzx.tensors import ExactTensor

import oracles as O

V = O.load()


def test_choi_of_pure_matches_oracle(rng):
    for n, m in [(1, 1), (1, 2), (2, 1), (0, 2)]:
        a = random_matrix(rng, 2**m, 2**n)
        assert np.allclose(double(a).matrix(), O.choi([a]))


def test_ground_after_ket0_is_one():
    s = interpret_cpm(B.ket0() >> B.ground(1))
    assert (s.n_in, s.n_out) == (0, 0)
    assert s.exact
    assert np.allclose(s.matrix(), [[V["ground_ket0"]]])


def test_double_t_on_plus():
    plus = np.full((2, 2), 0.5)
    out = apply(double(interp(B.t())), plus).matrix
    assert np.isclose(out[1, 0], complex(*V["double_t_plus_offdiag"]), atol=1e-12)
    assert np.isclose(out[0, 1], complex(*V["double_t_plus_offdiag_upper"]), atol=1e-12)
    assert np.isclose(out[0, 1], np.exp(-1j * np.pi / 4) / 2)


def test_ground_absorbs_h():
    a = interpret_cpm(B.h() >> B.ground(1))
    b = interpret_cpm(B.ground(1))
    assert a.equals(b)
    assert a.exact


def test_cnot_then_discard_second():
    d = B.cnot() >> tensor(identity(1), B.ground(1))
    want = np.array(V["cnot_discard_choi_re"]) + 1j * np.array(V["cnot_discard_choi_im"])
    assert np.allclose(interpret_cpm(d).matrix(), want)


def test_partial_trace_matches_oracle(rng):
    a = random_matrix(rng, 8, 2)
    s = double(a)
    t = partial_trace_outputs(s, [2])
    j = O.choi([a])
    rho = O.random_density(rng, 1)
    want = O.partial_trace_last(a @ rho @ a.conj().T, 2, 1)
    assert np.allclose(apply(t, rho).matrix, want)
    assert np.allclose(traced_double(a, 1).matrix(), t.matrix())
    assert j.shape == s.matrix().shape


def test_partial_trace_range():
    with pytest.raises(ValueError):
        partial_trace_outputs(double(np.eye(2)), [3])


def test_apply_shape_check():
    with pytest.raises(ValueError):
        apply(double(np.eye(2)), np.eye(4))


def test_apply_matches_kraus_oracle(rng):
    for _ in range(20):
        n_in, n_out = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        kraus = O.random_cp(rng, n_in, n_out, int(rng.integers(1, 4)))
        j = O.choi(kraus)
        s = Superoperator(n_in, n_out, j)
        rho = O.random_density(rng, n_in)
        assert np.allclose(apply(s, rho).matrix, O.kraus_apply(j, rho, 2**n_in, 2**n_out), atol=1e-9)


def test_cp_equal_cliffordt_scalars():
    f = B.scalar(ExactScalar.from_gaussian(1, 2))
    g = B.scalar(ExactScalar.from_gaussian(1, -2))
    assert cp_equal(f, g)
    assert not cp_equal(f, B.scalar(ExactScalar.from_gaussian(1, 1)))


def test_cp_equal_global_phase():
    assert cp_equal(B.t(), tensor(B.global_phase(Phase.pi(1, 4)), B.t()))
    a = interp(B.t())
    assert cp_equal(a, np.exp(0.7j) * a)


def test_cp_equal_isometry_on_environment(rng):
    for _ in range(10):
        f = random_matrix(rng, 4, 2)
        u = random_isometry(rng, 2, 4)
        g = np.kron(np.eye(2), u) @ f
        assert cp_equal(f, g, split=(1, 2))
        assert cp_residual(f, g, split=(1, 2)) < 1e-9


def test_cp_equal_boundary_mismatch():
    with pytest.raises(ValueError):
        cp_equal(np.eye(2), np.eye(4))


def test_density_matrix_helpers(rng):
    rho = DensityMatrix(O.random_density(rng, 2))
    assert rho.n == 2
    assert np.isclose(rho.trace, 1)
    assert rho.is_hermitian() and rho.is_psd()


def test_exact_choi_is_exact():
    s = interpret_cpm(B.cnot())
    assert isinstance(s.choi, ExactTensor)

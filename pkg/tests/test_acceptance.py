import json
import subprocess
import sys
import time

import numpy as np

from groundzx import builders as B
from groundzx.axioms import verify_library
from groundzx.cpm import Superoperator, apply, cp_equal, interpret_cpm, traced_double
from groundzx.properties import check_iso_related, cliffordt_counterexample, iso_witness_qubit, purify
from groundzx.properties import stab_conjugate_witness
from groundzx.random_diagrams import random_ground_diagram, random_isometric_circuit, random_isometry, random_matrix
from groundzx.scalars import ExactScalar, ring_divide_exact
from groundzx.semantics import EXACT, FLOAT, interp
from groundzx.stabilizer import phase_between, stabilizer_states
from groundzx.tensors import mat_equal

import oracles as O
from test_semantics import GOLDEN, builder_for, exact_of

LIBRARIES = ("zx-full", "zx-pi2", "zw", "zh", "zx-ground", "zw-ground", "zh-ground")


def test_generator_golden(criterion):
    t0 = time.perf_counter()
    bad = []
    for name, want in GOLDEN.items():
        d = builder_for(name)
        if not mat_equal(interp(d, EXACT), exact_of(want)):
            bad.append(name)
        if np.abs(interp(d, FLOAT) - want).max(initial=0) > 1e-12:
            bad.append(name)
    dt = time.perf_counter() - t0
    ok = not bad and dt < 5
    criterion(1, ok, f"{len(GOLDEN)} generators, {len(bad)} mismatches, {dt:.2f} s")
    assert ok, bad


def test_axiom_soundness(criterion):
    t0 = time.perf_counter()
    reports = [verify_library(name, samples=25, tol=1e-9, seed=0, max_legs=3) for name in LIBRARIES]
    dt = time.perf_counter() - t0
    unsound = [f"{r.library}:{e.name}" for r in reports for e in r.entries if not e.sound]
    n = sum(e.instantiations for r in reports for e in r.entries)
    ok = not unsound and dt < 60
    criterion(2, ok, f"{sum(len(r.entries) for r in reports)} rules, {n} instances, {dt:.1f} s")
    assert ok, unsound


def test_cliffordt_counterexample(criterion):
    t0 = time.perf_counter()
    phi = ExactScalar.from_gaussian(1, 2)
    psi = ExactScalar.from_gaussian(1, -2)
    eq = cp_equal(exact_of(np.array([[1 + 2j]])), exact_of(np.array([[1 - 2j]])))
    none = ring_divide_exact(phi, psi) is None
    rep = cliffordt_counterexample()
    q = abs(rep.float_quotient - (-3 + 4j) / 5)
    dt = time.perf_counter() - t0
    ok = eq and none and rep.passed and q <= 1e-12 and dt < 1
    criterion(3, ok, f"quotient error {q:.1e}, {dt * 1000:.0f} ms")
    assert ok


def test_purification_round_trip(criterion):
    rng = np.random.default_rng(4)
    worst = 0.0
    for _ in range(200):
        d = random_ground_diagram(rng, max_boundary=4, max_nodes=15)
        p = purify(d)
        s = traced_double(interp(p.pure, FLOAT), p.ancilla_count)
        worst = max(worst, s.residual(interpret_cpm(d, FLOAT)))
        # and against the doubled-network oracle
        worst = max(worst, float(np.abs(s.matrix() - O.cp_choi(d)).max(initial=0)))
    ok = worst <= 1e-9
    criterion(4, ok, f"200 diagrams, max residual {worst:.1e}")
    assert ok


def _stinespring_pairs(seed):
    rng = np.random.default_rng(seed)
    for _ in range(100):
        n = int(rng.integers(0, 3))
        b = int(rng.integers(0, 3))
        x = int(rng.integers(0, 3))
        z = int(rng.integers(x, 3))
        f = random_matrix(rng, 2 ** (b + x), 2**n)
        u = random_isometry(rng, 2**x, 2**z)
        g = np.kron(np.eye(2**b), u) @ f
        other = random_matrix(rng, 2 ** (b + z), 2**n)
        yield f, g, other, (x, z)


def test_stinespring_witnesses(criterion):
    found = refused = 0
    worst = 0.0
    for f, g, other, split in _stinespring_pairs(5):
        w = iso_witness_qubit(f, g, split)
        if w is not None and check_iso_related(f, g, w, tol=1e-8):
            found += 1
            worst = max(worst, w.residual)
        if iso_witness_qubit(f, other, split) is None and not cp_equal(f, other, split):
            refused += 1
    ok = found == 100 and refused == 100
    criterion(5, ok, f"{found}/100 witnessed (max residual {worst:.1e}), {refused}/100 unrelated refused")
    assert ok


def test_causality_of_isometries(criterion):
    rng = np.random.default_rng(6)
    worst = 0.0
    for _ in range(100):
        d = random_isometric_circuit(rng, max_qubits=3, max_gates=10)
        a = interpret_cpm(d >> B.ground(d.n_out), FLOAT)
        b = interpret_cpm(B.ground(d.n_in), FLOAT)
        worst = max(worst, a.residual(b))
    ok = worst <= 1e-9
    criterion(6, ok, f"100 circuits, max residual {worst:.1e}")
    assert ok


def test_witness_implies_cp_equal(criterion):
    violations = witnessed = 0
    for f, g, _, split in _stinespring_pairs(5):
        if iso_witness_qubit(f, g, split) is not None:
            witnessed += 1
            violations += not cp_equal(f, g, split)
    ok = violations == 0 and witnessed == 100
    criterion(7, ok, f"{witnessed} witnessed pairs, {violations} violations")
    assert ok


def test_stab_conjugate_witness(criterion):
    t0 = time.perf_counter()
    states = list(stabilizer_states(1)) + list(stabilizer_states(2))
    worst, missing = 0.0, 0
    for phi in states:
        u = stab_conjugate_witness(phi)
        if u is None:
            missing += 1
            continue
        lam = phase_between(u @ phi, phi.conj(), 1e-10)
        worst = max(worst, float(np.abs(u @ phi - lam * phi.conj()).max()))
    dt = time.perf_counter() - t0
    counts = [len(stabilizer_states(1)), len(stabilizer_states(2))]
    ok = counts == [6, 60] and missing == 0 and worst <= 1e-10 and dt < 60
    criterion(8, ok, f"{len(states)} states, {missing} without witness, residual {worst:.1e}, {dt:.1f} s")
    assert ok


def test_apply_matches_kraus_oracle(criterion):
    rng = np.random.default_rng(9)
    worst = 0.0
    for _ in range(50):
        n_in, n_out = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        kraus = O.random_cp(rng, n_in, n_out, int(rng.integers(1, 5)))
        j = O.choi(kraus)
        rho = O.random_density(rng, n_in)
        got = apply(Superoperator(n_in, n_out, j), rho).matrix
        worst = max(worst, float(np.abs(got - O.kraus_apply(j, rho, 2**n_in, 2**n_out)).max()))
    ok = worst <= 1e-9
    criterion(9, ok, f"50 pairs, max residual {worst:.1e}")
    assert ok


def _cli(*args):
    p = subprocess.run([sys.executable, "-m", "groundzx", *map(str, args)], capture_output=True, text=True)
    return p.returncode, p.stdout


def test_proof_checker_end_to_end(criterion, fixtures):
    codes = [_cli("verify-proof", fixtures / f"{n}.json", "--semantic-check")[0] for n in ("proof_h2", "proof_spider_chain", "proof_ground_cnot")]
    code, out = _cli("verify-proof", fixtures / "proof_corrupted.json")
    failed = json.loads(out)["failed_step"]
    ok = codes == [0, 0, 0] and code == 1 and failed == 1
    criterion(10, ok, f"exit codes {codes}, corrupted script exit {code} at step {failed}")
    assert ok

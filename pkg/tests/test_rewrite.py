import numpy as np
import pytest

from groundzx import builders as B
from groundzx.axioms import library
from groundzx.cpm import interpret_cpm
from groundzx.diagram import empty, identity, isomorphic, tensor
from groundzx.io import parse_diagram, parse_proof
from groundzx.params import Phase
from groundzx.rewrite import (
    BACKWARD,
    FORWARD,
    ProofScript,
    ProofStep,
    StaleMatch,
    apply_rewrite,
    equivalent,
    find_matches,
    fuzz_hosts,
    rewrite_with_inverse,
    verify_proof,
)
from groundzx.semantics import interp
from groundzx.tensors import to_complex

ZX = library("zx-full")


def test_h2_matches_in_hhh():
    host = B.h() >> B.h() >> B.h()
    ms = find_matches(ZX.get("h2"), host)
    assert len(ms) == 2
    assert len({m.image for m in ms}) == 2


def test_h2_rewrite_gives_identity():
    out = apply_rewrite(B.h() >> B.h(), find_matches(ZX.get("h2"), B.h() >> B.h())[0], library_name="zx-full")
    assert isomorphic(out, identity(1))


def test_spider_fusion_rewrite():
    host = B.z_spider(1, 1, Phase.pi(1, 4)) >> B.z_spider(1, 1, Phase.pi(1, 2))
    ms = find_matches(ZX.get("S1"), host, legs=(1, 0, 0, 1))
    assert len(ms) == 1
    out = apply_rewrite(host, ms[0], ZX.get("S1"))
    assert isomorphic(out, B.z_spider(1, 1, Phase.pi(3, 4)))
    assert np.allclose(to_complex(interp(out)), to_complex(interp(host)))


def test_empty_host():
    assert find_matches(ZX.get("h2"), empty("ZX")) == []
    # the identity rule's right side is a bare wire loop free scalar here
    ms = find_matches(ZX.get("E"), empty("ZX"), BACKWARD)
    assert len(ms) == 1


def test_matching_is_deterministic():
    host = B.h() >> B.h() >> B.h() >> B.h()
    a = [m.sort_key() for m in find_matches(ZX.get("h2"), host)]
    b = [m.sort_key() for m in find_matches(ZX.get("h2"), host.relabel(0))]
    assert a == b == sorted(a)


def test_ground_h_rule():
    lib = library("zx-ground")
    host = B.h() >> B.ground(1)
    ms = find_matches(lib.get("ground-H"), host)
    out = apply_rewrite(host, ms[0], lib.get("ground-H"))
    assert isomorphic(out, B.ground(1))


def test_ground_cnot_rule():
    lib = library("zx-ground")
    host = B.cnot() >> B.ground(2)
    ms = find_matches(lib.get("ground-cnot"), host)
    assert ms
    out = apply_rewrite(host, ms[0], lib.get("ground-cnot"))
    assert isomorphic(out, B.ground(2))
    assert interpret_cpm(out).equals(interpret_cpm(host))


def test_stale_match_rejected():
    host = B.h() >> B.h() >> B.h()
    m = find_matches(ZX.get("h2"), host)[0]
    with pytest.raises(StaleMatch):
        apply_rewrite(B.s() >> B.s(), m, ZX.get("h2"))


def test_rewrite_inverse_restores_host():
    host = B.z_spider(1, 1, Phase.pi(1, 4)) >> B.z_spider(1, 1, Phase.pi(1, 2))
    rule = ZX.get("S1")
    m = find_matches(rule, host, legs=(1, 0, 0, 1))[0]
    out, inv = rewrite_with_inverse(host, m, rule)
    assert inv is not None
    back = apply_rewrite(out, inv, rule)
    assert equivalent(back, host)


def _rules():
    for name in ("zx-full", "zw", "zh", "zx-ground", "zw-ground", "zh-ground"):
        for r in library(name):
            yield name, r


@pytest.mark.parametrize("lib,rule", [(n, r) for n, r in _rules()], ids=lambda x: getattr(x, "name", x))
def test_fuzz_rewrite_preserves_semantics(lib, rule):
    rng = np.random.default_rng(sum(map(ord, lib + rule.name)))
    for dir in (FORWARD, BACKWARD):
        for host, m in fuzz_hosts(rule, rng, 2, dir):
            out, inv = rewrite_with_inverse(host, m, rule)
            assert interpret_cpm(host, "float").residual(interpret_cpm(out, "float")) < 1e-8
            if inv is not None:
                assert equivalent(apply_rewrite(out, inv, rule), host)


def test_proof_fixtures(fixtures):
    for name in ("proof_h2", "proof_spider_chain", "proof_ground_cnot"):
        script = parse_proof((fixtures / f"{name}.json").read_text())
        rep = verify_proof(script, semantic_check=True)
        assert rep.valid, rep.to_dict()
        assert all(s.residual is None or s.residual <= 1e-9 for s in rep.steps)


def test_corrupted_proof_index(fixtures):
    rep = verify_proof(parse_proof((fixtures / "proof_corrupted.json").read_text()))
    assert not rep.valid and rep.failed_step == 1


def test_ground_nonisometry_fails(fixtures):
    rep = verify_proof(parse_proof((fixtures / "proof_ground_nonisometry.json").read_text()))
    assert not rep.valid and rep.failed_step == 0


def test_wrong_final_diagram():
    script = ProofScript(B.h() >> B.h(), (ProofStep("h2", "zx-full"),), B.h())
    rep = verify_proof(script)
    assert not rep.valid and rep.failed_step == 1 and not rep.final_matches


def test_noop_step():
    script = ProofScript(B.h(), (ProofStep("refl", "zx-full"),), B.h())
    assert verify_proof(script).valid


def test_fixture_diagrams_parse(fixtures):
    d = parse_diagram((fixtures / "discard_cnot.json").read_text())
    assert d.contains_ground
    assert tensor(B.ground(1), B.ground(1)).n_in == 2

import random

import numpy as np
import pytest

from groundzx import builders as B
from groundzx.axioms import (
    LIBRARY_NAMES,
    BindingError,
    RewriteRule,
    UnknownLibrary,
    compare,
    instances,
    instantiate,
    library,
    verify_library,
    verify_rule,
)
from groundzx.diagram import isomorphic
from groundzx.params import Phase
from groundzx.properties import is_isometry
from groundzx.semantics import EXACT, interp
from groundzx.tensors import ExactTensor, mat_equal


def test_library_sizes():
    assert len(library("zx-ground")) == 5
    assert len(library("zh-ground")) == 5
    assert len(library("zw-ground")) == 5
    assert set(LIBRARY_NAMES) >= {"zx-full", "zx-pi2", "zw", "zh", "zx-ground", "zw-ground", "zh-ground"}
    with pytest.raises(UnknownLibrary):
        library("nope")


def test_zx_pi2_phases():
    rng = random.Random(0)
    for rule in library("zx-pi2"):
        for legs, params in instances(rule, 0, rng, exact_only=True, max_legs=2):
            for side in instantiate(rule, dict(params, legs=legs)):
                for node in side.nodes.values():
                    if isinstance(node.param, Phase):
                        assert node.param.fraction is not None
                        assert (node.param.fraction * 2).denominator == 1


def test_spider_fusion_instance():
    rule = library("zx-full").get("S1")
    lhs, rhs = instantiate(rule, {"alpha": Phase.pi(1, 4), "beta": Phase.pi(1, 2), "legs": (1, 0, 0, 1)})
    assert isomorphic(lhs, B.z_spider(1, 1, Phase.pi(1, 4)) >> B.z_spider(1, 1, Phase.pi(1, 2))) or isomorphic(
        lhs, B.z_spider(1, 1, Phase.pi(1, 2)) >> B.z_spider(1, 1, Phase.pi(1, 4))
    )
    assert isomorphic(rhs, B.z_spider(1, 1, Phase.pi(3, 4)))


def test_h2_needs_no_bindings():
    rule = library("zx-full").get("h2")
    lhs, rhs = instantiate(rule, {})
    assert isomorphic(lhs, B.h() >> B.h())
    assert mat_equal(interp(lhs, EXACT), ExactTensor.identity(2))
    rep = verify_rule(rule)
    assert rep.verdict == "exact" and rep.max_residual == 0


def test_binding_errors():
    rule = library("zx-full").get("S1")
    with pytest.raises(BindingError):
        instantiate(rule, {"alpha": Phase(0)})
    with pytest.raises(BindingError):
        instantiate(rule, {"alpha": Phase(0), "beta": Phase(0), "legs": (9, 0, 0, 1)})


def test_corrupted_rule_is_unsound():
    bad = RewriteRule("bad", "ZX", lambda legs, p: (B.h() >> B.h(), B.z_spider(1, 1, Phase.pi(1))))
    rep = verify_rule(bad)
    assert rep.verdict == "unsound"
    assert not rep.sound
    assert rep.failure["residual"] == pytest.approx(2.0)


def test_compare_verdicts():
    assert compare(B.h() >> B.h(), B.identity(1), "pure", 1e-9)[0] == "exact"
    assert compare(B.z_spider(1, 1, 0.1), B.z_spider(1, 1, 0.1), "pure", 1e-9)[0] == "tolerance"
    v, _, lam = compare(B.t(), B.t() @ B.z_spider(0, 0), "pure", 1e-9)
    assert v == "projective" and np.isclose(lam, 0.5)
    assert compare(B.t(), B.s(), "pure", 1e-9)[0] == "unsound"


@pytest.mark.parametrize("name", ["zx-ground", "zw-ground", "zh-ground"])
def test_ground_library_sound(name):
    rep = verify_library(name)
    assert rep.sound
    assert all(e.verdict in ("exact", "tolerance") for e in rep.entries)
    assert all(e.mode == "cpm" for e in rep.entries)


@pytest.mark.parametrize("name", ["zx-ground", "zw-ground", "zh-ground"])
def test_ground_pure_parts_are_isometries(name):
    rng = random.Random(1)
    for rule in library(name):
        for legs, params in instances(rule, 3, rng, max_legs=3):
            assert is_isometry(rule.pure_part(legs, params))


def test_zx_ground_exact_on_grid():
    for rule in library("zx-ground"):
        assert verify_rule(rule, samples=0, exact_only=True).verdict == "exact"


def test_report_fields():
    rep = verify_library("zx-ground", samples=2)
    d = rep.to_dict()
    assert d["library"] == "zx-ground" and d["sound"]
    entry = d["rules"][0]
    for key in ("rule", "instantiations", "max_residual", "verdict", "scalar_factor"):
        assert key in entry
    assert "ground-cnot" in rep.table()


def test_provisional_flags():
    assert not library("zx-full").get("h2").provisional
    assert library("zx-full").get("S1").provisional


def test_float_backend_forces_tolerance():
    rule = library("zx-full").get("h2")
    assert verify_rule(rule, backend="float").verdict == "tolerance"
    assert verify_rule(rule).verdict == "exact"

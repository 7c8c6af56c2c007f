import random

import pytest
from hypothesis import given, settings

from descent_kit.categories import Tag, f1_morphism, identity, is_morphism, make_morphism, make_object
from descent_kit.census import automorphisms, morphisms
from descent_kit.checkers import (
    RULE_LAX_BOTTOM,
    RULE_LAX_CHAINS,
    RULE_LAX_OPEN,
    RULE_LAX_SUFFICIENT,
    RULE_ORDX,
    Status,
    check_condition_a,
    check_condition_b,
    check_condition_b_prime,
    check_fiberwise_surjectivity,
    check_sim_preimage,
    decide_effective_descent,
)
from descent_kit.errors import PreconditionError
from descent_kit.generator import random_morphism, random_preorder
from descent_kit.fixtures import X1, X2, XV, fix_f, fix_g, fix_h, fix_l
from descent_kit.order import close

from conftest import morphisms as random_morphisms


def test_condition_a_examples():
    assert check_condition_a(identity(fix_f().target))
    r = check_condition_a(fix_h())
    assert not r and r.witness == ("b1", "b1", "b0")
    assert check_condition_a(fix_f())


def test_condition_b_examples():
    assert check_condition_b(fix_g())
    r = check_condition_b(fix_f())
    assert not r and r.witness == ("*", "b1", "b0")
    empty = make_object("OrdX", ["b"], base=X1)
    assert check_condition_b(identity(empty))


def test_condition_b_prime_examples():
    assert check_condition_b_prime(identity(fix_l().target))
    r = check_condition_b_prime(fix_l())
    assert not r and r.witness == ("x1", "b1", "b0")
    assert check_condition_b_prime(fix_l("x1"))


def test_surjectivity_and_sim_examples():
    assert check_fiberwise_surjectivity(fix_g())
    r = check_fiberwise_surjectivity(fix_f())
    assert not r and r.witness == ("*", "b1")
    B = fix_f().target
    assert check_fiberwise_surjectivity(identity(B))
    assert check_sim_preimage(identity(fix_l().target))
    r = check_sim_preimage(fix_l())
    assert not r and r.witness == ("b1",)
    assert check_sim_preimage(fix_l("x1"))


def test_surjectivity_reports_missed_image():
    B = make_object("C2", ["b0", "b1"], base=X1)
    E = make_object("C2", ["e"], base=X1)
    r = check_fiberwise_surjectivity(make_morphism(E, B, {"e": "b0"}))
    assert r.witness == (None, "b1")


def test_tag_guards():
    with pytest.raises(PreconditionError):
        check_condition_b(fix_l())
    with pytest.raises(PreconditionError):
        check_condition_b_prime(fix_f())
    with pytest.raises(PreconditionError):
        check_sim_preimage(fix_f())


def test_dispatcher_examples():
    g = decide_effective_descent(fix_g())
    assert g.status is Status.EFFECTIVE and g.theorem == RULE_ORDX
    f = decide_effective_descent(fix_f())
    assert f.status is Status.NOT_EFFECTIVE and f.witness == ("*", "b1", "b0")
    h = decide_effective_descent(fix_h())
    assert h.status is Status.NOT_EFFECTIVE and h.witness == ("b1", "b1", "b0")
    assert decide_effective_descent(fix_h("Prod")).status is Status.NOT_EFFECTIVE
    assert decide_effective_descent(fix_h("C2")).status is Status.EFFECTIVE
    L = decide_effective_descent(fix_l())
    assert L.status is Status.NOT_EFFECTIVE and L.theorem == RULE_LAX_CHAINS
    assert L.witness == ("x1", "b1", "b0")
    assert decide_effective_descent(fix_l("x1")).status is Status.EFFECTIVE
    assert [c.name for c in L.checks] == ["condition (a)", "condition (b')"]


def test_unknown_over_xv():
    B = make_object("LaxX", ["b"], base=XV, alpha={"b": "xt"})
    E = make_object("LaxX", ["e"], base=XV, alpha={"e": "xt"})
    v = decide_effective_descent(make_morphism(E, B, {"e": "b"}))
    assert v.status is Status.UNKNOWN and v.theorem == RULE_LAX_OPEN
    assert all(v.checks)
    assert not v.lattice.locally_complete


def test_bottom_and_sufficient_branches():
    diamond = close(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    B = make_object("LaxX", ["b"], base=diamond, alpha={"b": "1"})
    ok = make_morphism(make_object("LaxX", ["e"], base=diamond, alpha={"e": "1"}), B, {"e": "b"})
    v = decide_effective_descent(ok)
    assert v.status is Status.EFFECTIVE and v.theorem == RULE_LAX_BOTTOM
    Bc = make_object("LaxX", ["b1", "b0"], [("b1", "b0")], base=diamond, alpha={"b1": "1", "b0": "1"})
    Ed = make_object("LaxX", ["u", "v"], base=diamond, alpha={"u": "1", "v": "1"})
    v = decide_effective_descent(make_morphism(Ed, Bc, {"u": "b1", "v": "b0"}))
    assert v.status is Status.NOT_EFFECTIVE and v.theorem == RULE_LAX_BOTTOM
    assert v.witness == ("b1", "b1", "b0")
    # F1 p not fiberwise surjective and (b') fails: no rule applies
    low = make_morphism(make_object("LaxX", ["e"], base=diamond, alpha={"e": "a"}), B, {"e": "b"})
    v = decide_effective_descent(low)
    assert v.status is Status.UNKNOWN and len(v.checks) == 3
    # locally complete without bottom: only the sufficient condition applies
    nobot = close(["0", "a", "b", "1", "c"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    B2 = make_object("LaxX", ["b"], base=nobot, alpha={"b": "1"})
    E2 = make_object("LaxX", ["e"], base=nobot, alpha={"e": "1"})
    v = decide_effective_descent(make_morphism(E2, B2, {"e": "b"}))
    assert v.status is Status.EFFECTIVE_SUFFICIENT and v.theorem == RULE_LAX_SUFFICIENT


def test_unknown_only_where_left_open():
    rng = random.Random(5)
    seen = set()
    for _ in range(2000):
        X = random_preorder(rng, rng.randint(1, 4), rng.random(), 0.1)
        p = random_morphism(rng, "LaxX", X, rng.randint(1, 3), rng.randint(0, 4), 0.5, 0.1, 0.5)
        v = decide_effective_descent(p)
        seen.add(v.status)
        if v.status is Status.UNKNOWN:
            assert not (v.lattice.locally_complete and all(v.checks))
            assert not v.lattice.downsets_are_chains
    assert Status.UNKNOWN in seen and Status.EFFECTIVE in seen


@settings(max_examples=300)
@given(random_morphisms(max_x=3))
def test_b_implies_fiberwise_surjective(p):
    # (b) covers each p_x; surjectivity of p itself comes from (a)
    if p.tag in (Tag.ORDX, Tag.PROD) and check_condition_b(p):
        fs = check_fiberwise_surjectivity(p)
        assert fs or fs.witness[0] is None
        if check_condition_a(p):
            assert fs


@settings(max_examples=300)
@given(random_morphisms(tag="LaxX"))
def test_f1_transport(p):
    q = f1_morphism(p)
    assert check_condition_b_prime(p).passed == check_condition_b(q).passed
    assert check_condition_b_prime(p).witness == check_condition_b(q).witness
    assert check_sim_preimage(p).passed == check_fiberwise_surjectivity(q).passed


def test_verdicts_invariant_under_relabelling():
    for p in morphisms("OrdX", range(3), range(3), X2)[::7]:
        for g in automorphisms(p.target):
            q = make_morphism(p.source, p.target, {e: p.target.carrier[g[p.map[i]]]
                                                   for i, e in enumerate(p.source.carrier)})
            if not is_morphism(q):
                continue
            assert decide_effective_descent(q).status == decide_effective_descent(p).status


def test_verdict_json_shape():
    data = decide_effective_descent(fix_l()).to_json()
    assert data["status"] == "NotEffective" and data["theorem"] == RULE_LAX_CHAINS
    assert data["lattice"]["downsets_are_chains"] is True
    assert data["checks"][1]["witness"] == ["x1", "b1", "b0"]

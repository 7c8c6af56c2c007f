import random

import pytest

from descent_kit.categories import (
    Tag,
    f1,
    f1_inverse,
    f1_morphism,
    identity,
    is_morphism,
    make_morphism,
    make_object,
    pullback,
)
from descent_kit.census import morphisms, over_objects
from descent_kit.checkers import check_condition_a, check_condition_b, check_fiberwise_surjectivity
from descent_kit.errors import InputError, PreconditionError
from descent_kit.fixtures import X1, X2, XV, fix_f, fix_g, fix_l
from descent_kit.generator import random_morphism, random_over, random_preorder
from descent_kit.order import chain, is_upclosed
from descent_kit.witnesses import (
    build_two_element_witness,
    check_reflection,
    construct_alpha_by_join,
    construct_beta_doubleprime,
)


def test_two_element_witness_on_fixf():
    rep = build_two_element_witness(fix_f(), "*", "b1", "b0")
    A = rep.witness_object
    assert A.tag is Tag.PROD and A.carrier == ("a1", "a0")
    assert A.order.le(0, 1) and not A.order.le(1, 0)
    assert A.at("*") == {"a1"}
    assert rep.witness_morphism.map == (0, 1)
    P = rep.pullback_object
    assert P.carrier == ("(e1,a1)", "(e0,a0)") and P.at("*") == frozenset()
    assert rep.verified and len(rep.claims) == 3
    assert is_upclosed(P.order, P.at("*")).passed


def test_degenerate_witness():
    rep = build_two_element_witness(fix_f(), "*", "b1", "b1")
    assert rep.witness_morphism.map == (0, 0) and rep.verified


def test_witness_guards():
    with pytest.raises(PreconditionError):
        build_two_element_witness(fix_g(), "*", "b1", "b0")
    with pytest.raises(PreconditionError):
        build_two_element_witness(fix_f(), "*", "b0", "b1")
    with pytest.raises(PreconditionError):
        build_two_element_witness(fix_l(), "x1", "b1", "b0")


def test_witness_case_formula_over_chain():
    B = make_object("OrdX", ["b1", "b0"], [("b1", "b0")], base=X2,
                    filtration={"x0": ["b1", "b0"], "x1": ["b1", "b0"]})
    E = make_object("OrdX", ["e1", "e0"], [("e1", "e0")], base=X2,
                    filtration={"x0": ["e1", "e0"], "x1": ["e0"]})
    p = make_morphism(E, B, {"e1": "b1", "e0": "b0"})
    rep = build_two_element_witness(p, "x1", "b1", "b0")
    A = rep.witness_object
    assert A.at("x0") == {"a1", "a0"} and A.at("x1") == {"a1"}
    assert rep.verified


def test_witness_soundness_random():
    rng = random.Random(1)
    built = 0
    for _ in range(400):
        X = random_preorder(rng, rng.randint(1, 4), 0.4, 0.15)
        p = random_morphism(rng, "OrdX", X, rng.randint(1, 5), rng.randint(0, 5), 0.4, 0.1, 0.5)
        B = p.target
        for x in X.elements:
            for b1 in B.at(x):
                for b0 in B.at(x):
                    if not B.order.le(B.pos(b1), B.pos(b0)):
                        continue
                    try:
                        rep = build_two_element_witness(p, x, b1, b0)
                    except PreconditionError:
                        continue
                    built += 1
                    assert rep.verified, rep.claims
    assert built > 50


def test_reflection_examples():
    r = check_reflection(fix_f(), "OrdX", "Prod", 2)
    assert r.refuted and len(r.counterexample.source) == 2
    assert not check_reflection(fix_g(), "OrdX", "Prod", 2).refuted
    B = fix_f().target
    assert not check_reflection(identity(B), "OrdX", "Prod", 3).refuted
    L = fix_l("x1").target
    assert not check_reflection(identity(L), "LaxX", "OrdX", 3).refuted
    with pytest.raises(InputError):
        check_reflection(fix_f(), "Prod", "OrdX", 2)


@pytest.mark.parametrize("X", [X1, X2], ids=["X1", "X2"])
def test_reflection_complete_at_bound_two(X):
    for p in morphisms("OrdX", range(4), range(3), X):
        if not (check_condition_a(p) and check_fiberwise_surjectivity(p)):
            continue
        assert check_reflection(p, "OrdX", "Prod", 2).refuted == (not check_condition_b(p))


def test_alpha_examples():
    L = fix_l("x1").target
    A = f1(L)
    f = make_morphism(A, A, {b: b for b in A.carrier})
    got = construct_alpha_by_join(f, identity(L))
    assert got.alpha == f1_inverse(A).alpha
    # over X1, A = B with full filtration
    B1 = make_object("LaxX", ["b1", "b0"], [("b1", "b0")], base=X1, alpha={"b1": "*", "b0": "*"})
    FA = f1(B1)
    got = construct_alpha_by_join(make_morphism(FA, FA, {"b1": "b1", "b0": "b0"}), identity(B1))
    assert {got.alpha_of(a) for a in got.carrier} == {"*"}
    # over X2: A_x0 = A, A_x1 empty gives alpha = x0
    A2 = make_object("OrdX", ["a"], base=X2, filtration={"x0": ["a"]})
    FB = f1(L)
    got = construct_alpha_by_join(make_morphism(A2, FB, {"a": "b1"}), fix_l("x1"))
    assert got.alpha_of("a") == "x0"


def test_alpha_guards():
    L = fix_l()
    FA = f1(L.target)
    f = make_morphism(FA, FA, {b: b for b in FA.carrier})
    with pytest.raises(PreconditionError, match="fiberwise surjective"):
        construct_alpha_by_join(f, L)
    B = make_object("LaxX", ["b"], base=XV, alpha={"b": "xt"})
    with pytest.raises(PreconditionError, match="locally complete"):
        construct_alpha_by_join(f, identity(B))
    with pytest.raises(PreconditionError, match="LaxX"):
        construct_alpha_by_join(f, fix_f())


def test_alpha_never_fails_postconditions():
    rng = random.Random(9)
    done = 0
    for _ in range(300):
        p = random_morphism(rng, "LaxX", chain(["x0", "x1", "x2"]), rng.randint(1, 3), rng.randint(1, 4),
                            0.5, 0.1, 0.5)
        q = f1_morphism(p)
        if not check_fiberwise_surjectivity(q):
            continue
        f = random_over(rng, q.target, rng.randint(1, 3))
        P, _, _ = pullback(q, f)
        if f1_inverse(P) is None:
            continue
        L = construct_alpha_by_join(f, p)
        assert f1(L).filtration == f.source.filtration
        done += 1
    assert done > 20


def test_beta_doubleprime():
    L = fix_l()
    r = construct_beta_doubleprime(identity(L.target), "b1")
    assert r.value == "x1" and r.equivalent and r.bounded
    r = construct_beta_doubleprime(L, "b1")
    assert r.value == "x0" and not r.equivalent and r.bounded
    r = construct_beta_doubleprime(fix_l("x1"), "b1")
    assert r.value == "x1" and r.equivalent
    E = make_object("LaxX", ["e"], base=X2, alpha={"e": "x1"})
    B = make_object("LaxX", ["b", "c"], base=X2, alpha={"b": "x1", "c": "x1"})
    with pytest.raises(PreconditionError, match="empty fiber"):
        construct_beta_doubleprime(make_morphism(E, B, {"e": "b"}), "c")


def test_over_objects_feed_reflection():
    assert sum(1 for _ in over_objects(fix_f().target, 2)) > 0
    assert is_morphism(check_reflection(fix_f(), "OrdX", "Prod", 2).counterexample)

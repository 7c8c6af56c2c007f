import random
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from descent_kit.errors import InputError, PreconditionError
from descent_kit.fixtures import X1, X2, XV, fix_h
from descent_kit.generator import random_preorder
from descent_kit.order import (
    CheckResult,
    MonotoneMap,
    Preorder,
    ascending_chains,
    bits,
    chain,
    close,
    discrete,
    downset,
    equiv,
    is_monotone,
    is_upclosed,
    is_valid,
    join,
    join_below,
    lattice_report,
    lift_chain,
    lifts_all_chains,
    meet,
    meet_below,
    strict,
    up_closure,
    upset,
    validate_preorder,
)


def naive_closure(n, pairs):
    rel = {(i, i) for i in range(n)} | set(pairs)
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in product(list(rel), list(rel)):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


@given(st.integers(0, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, max(n - 1, 0)), st.integers(0, max(n - 1, 0))), max_size=12))))
def test_close_matches_naive_fixpoint(data):
    n, pairs = data
    if n == 0:
        pairs = []
    el = [f"v{i}" for i in range(n)]
    P = close(el, [(el[a], el[b]) for a, b in pairs])
    assert is_valid(P)
    assert {(P.pos(a), P.pos(b)) for a, b in P.pairs()} == naive_closure(n, pairs)


def test_validate_reports_missing_loop_and_transitivity():
    P = Preorder.from_pairs(["a", "b", "c"], [("a", "b"), ("b", "c"), ("b", "b"), ("c", "c")])
    axioms = {d.axiom for d in validate_preorder(P)}
    assert axioms == {"reflexivity", "transitivity"}


def test_duplicate_and_unknown_elements_rejected():
    with pytest.raises(InputError):
        Preorder(("a", "a"), (1, 2))
    with pytest.raises(InputError):
        close(["a"], [("a", "b")])


def test_relations_and_sets():
    P = close(["a", "b", "c"], [("a", "b"), ("b", "a"), ("b", "c")])
    assert equiv(P, "a", "b") and not strict(P, "a", "b") and strict(P, "a", "c")
    assert downset(P, "c") == {"a", "b", "c"} and upset(P, "c") == {"c"}
    assert up_closure(P, ["a"]) == {"a", "b", "c"}
    assert not is_upclosed(P, ["a"]).passed and is_upclosed(P, ["a", "b", "c"]).passed


def test_joins_and_meets():
    assert join(XV, ["xa", "xb"]) == "xt"
    assert meet(XV, ["xa", "xb"]) is None
    assert join_below(X2, [], "x1") == "x0"
    assert meet_below(X2, ["x0", "x1"], "x1") == "x0"
    with pytest.raises(PreconditionError):
        join_below(X2, ["x1"], "x0")


def test_lattice_report_examples():
    assert lattice_report(X2).downsets_are_chains and lattice_report(X2).locally_complete
    r = lattice_report(XV)
    assert not r.locally_complete and not r.downsets_are_chains and r.bottom is None
    assert r.failures == (("xt", ("xa", "xb")),)
    assert r.chain_failures == (("xt", ("xa", "xb")),)
    diamond = close(["0", "a", "b", "1"], [("0", "a"), ("0", "b"), ("a", "1"), ("b", "1")])
    d = lattice_report(diamond)
    assert d.locally_complete and not d.downsets_are_chains and d.bottom == "0"
    assert lattice_report(X1).bottom == "*"


def brute_locally_complete(X):
    for x in range(len(X)):
        d = X.down[x]
        for S in range(d + 1):
            if S & ~d:
                continue
            lb = d
            for s in bits(S):
                lb &= X.down[s]
            if not any(lb & ~X.down[g] == 0 for g in bits(lb)):
                return False
    return True


def brute_chain_downsets(X):
    for x in range(len(X)):
        d = X.down[x]
        for S in range(1, d + 1):
            if S & ~d:
                continue
            if not any(S & ~X.down[g] == 0 for g in bits(S)):
                return False
    return True


def test_lattice_report_matches_brute_force():
    rng = random.Random(7)
    for _ in range(400):
        X = random_preorder(rng, rng.randint(1, 5), rng.random(), rng.random() * 0.3)
        r = lattice_report(X)
        assert r.locally_complete == brute_locally_complete(X)
        assert r.downsets_are_chains == brute_chain_downsets(X)
        if r.downsets_are_chains:
            assert r.locally_complete


def test_lift_chain_examples():
    p = fix_h().underlying()
    assert lift_chain(p, ["b1", "b1"]) == ["u", "u"]
    assert lift_chain(p, ["b1", "b0"]) is None
    with pytest.raises(PreconditionError):
        lift_chain(p, ["b0", "b1"])
    res = lifts_all_chains(p, 3)
    assert not res.passed and res.witness == ("b1", "b1", "b0")


def brute_lifts(p, n):
    S, T = p.source, p.target
    for c in product(range(len(T)), repeat=n):
        if not all(T.le(c[i], c[i + 1]) for i in range(n - 1)):
            continue
        ok = any(all(p.map[e[i]] == c[i] for i in range(n)) and all(S.le(e[i], e[i + 1]) for i in range(n - 1))
                 for e in product(range(len(S)), repeat=n))
        if not ok:
            return c
    return None


def test_lifts_all_chains_matches_brute_force():
    rng = random.Random(11)
    for _ in range(300):
        B = random_preorder(rng, rng.randint(1, 4), 0.5, 0.2, "b")
        nE = rng.randint(0, 5)
        fmap = [rng.randrange(len(B)) for _ in range(nE)]
        pairs = [(f"e{i}", f"e{j}") for i in range(nE) for j in range(nE)
                 if B.le(fmap[i], fmap[j]) and rng.random() < 0.5]
        E = close([f"e{i}" for i in range(nE)], pairs)
        p = MonotoneMap(E, B, tuple(fmap))
        assert is_monotone(p).passed
        for n in (1, 2, 3):
            want = brute_lifts(p, n)
            got = lifts_all_chains(p, n)
            assert got.passed == (want is None)
            if want is not None:
                assert got.witness == tuple(B.elements[i] for i in want)


def test_ascending_chains_count_on_chain():
    assert len(list(ascending_chains(chain(["a", "b", "c"]), 3))) == 10
    assert len(list(ascending_chains(discrete(["a", "b"]), 3))) == 2


def test_failed_check_needs_witness():
    with pytest.raises(ValueError):
        CheckResult(False)
    assert CheckResult(True).to_json()["passed"]


@settings(max_examples=50)
@given(st.integers(0, 2**32 - 1))
def test_monotone_map_fibers_partition(seed):
    rng = random.Random(seed)
    B = random_preorder(rng, 3, 0.5, 0.2, "b")
    E = discrete(["e0", "e1", "e2", "e3"])
    p = MonotoneMap(E, B, tuple(rng.randrange(3) for _ in range(4)))
    total = 0
    for f in p.fibers:
        assert total & f == 0
        total |= f
    assert total == E.full

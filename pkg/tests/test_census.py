from itertools import permutations, product

import pytest

from descent_kit.categories import StructuredObject, Tag, is_morphism, is_object
from descent_kit.census import (
    automorphisms,
    labeled_preorders,
    morphisms,
    names,
    objects,
    over_objects,
    relabel_masks,
    relabel_up,
    relabel_values,
)
from descent_kit.fixtures import X1, X2, XV, fix_f
from descent_kit.order import Preorder


def canon(obj: StructuredObject):
    best = None
    for g in permutations(range(len(obj))):
        key = (relabel_up(obj.order.up, g) if obj.order else None,
               relabel_masks(obj.filtration, g) if obj.filtration is not None else None,
               relabel_values(obj.alpha, g) if obj.alpha is not None else None)
        best = key if best is None else min(best, key)
    return best


def brute_objects(tag: Tag, n: int, X):
    carrier = names(n)
    orders = labeled_preorders(n) if tag.ordered else (None,)
    out = set()
    for up in orders:
        order = Preorder(carrier, up) if up is not None else None
        fls = product(range(1 << n), repeat=len(X)) if tag.filtered else (None,)
        for fl in fls:
            als = product(range(len(X)), repeat=n) if tag is Tag.LAXX else (None,)
            for al in als:
                obj = StructuredObject(tag, carrier, order, X if tag.needs_base else None, fl, al)
                if is_object(obj):
                    out.add(canon(obj))
    return out


def test_preorder_counts():
    assert [len(labeled_preorders(n)) for n in range(5)] == [1, 1, 4, 29, 355]


def test_ordx_object_counts():
    assert [len(objects("OrdX", n, X1)) for n in range(4)] == [1, 2, 8, 34]
    assert [len(objects("OrdX", n, X2)) for n in range(4)] == [1, 3, 15, 82]


@pytest.mark.parametrize("tag", list(Tag))
@pytest.mark.parametrize("X", [X1, X2, XV], ids=["X1", "X2", "XV"])
def test_objects_are_all_classes_once(tag, X):
    for n in range(3 if len(X) > 2 else 4):
        got = objects(tag, n, X)
        keys = [canon(o) for o in got]
        assert all(is_object(o) for o in got)
        assert len(set(keys)) == len(keys)
        assert set(keys) == brute_objects(tag, n, X)


def over_canon(f):
    A = f.source
    best = None
    for g in permutations(range(len(A))):
        if any(f.map[g[i]] != f.map[i] for i in range(len(A))):
            continue
        key = (relabel_up(A.order.up, g) if A.order else None,
               relabel_masks(A.filtration, g) if A.filtration is not None else None,
               relabel_values(A.alpha, g) if A.alpha is not None else None)
        best = key if best is None else min(best, key)
    return best


def test_over_objects_valid_and_distinct():
    for B in [fix_f().target, objects("LaxX", 2, X2)[5], objects("C2", 2, X2)[3]]:
        seen = set()
        for f in over_objects(B, 3):
            assert is_object(f.source) and is_morphism(f)
            key = (f.map, over_canon(f))
            assert key not in seen
            seen.add(key)


def test_automorphisms_of_discrete_and_chain():
    assert len(automorphisms(objects("Ord", 3)[0])) in (1, 6)
    assert sorted(len(automorphisms(o)) for o in objects("Ord", 2)) == [1, 2, 2]


def test_morphisms_are_valid_and_cover_identity():
    ps = morphisms("OrdX", range(3), range(3), X1)
    assert all(is_morphism(p) for p in ps)
    ident = [p for p in ps if p.map == (0, 1) and p.source.order.up == p.target.order.up
             and p.source.filtration == p.target.filtration]
    assert len(ident) == len(objects("OrdX", 2, X1))

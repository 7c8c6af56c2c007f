"""Small named instances used by the tests, the README and ``descent-kit fixtures``."""

from __future__ import annotations

from .categories import StructuredMorphism, Tag, make_morphism, make_object
from .order import Preorder, chain, close

X1 = chain(["*"])
X2 = chain(["x0", "x1"])
XV = close(["xa", "xb", "xt"], [("xa", "xt"), ("xb", "xt")])


def fix_f(e_star: tuple[str, ...] = ()) -> StructuredMorphism:
    """Chains ``e1 <= e0 -> b1 <= b0`` over a point, ``B_* = B`` and ``E_* = e_star``."""
    B = make_object(Tag.ORDX, ["b1", "b0"], [("b1", "b0")], base=X1, filtration={"*": ["b1", "b0"]})
    E = make_object(Tag.ORDX, ["e1", "e0"], [("e1", "e0")], base=X1, filtration={"*": list(e_star)})
    return make_morphism(E, B, {"e1": "b1", "e0": "b0"})


def fix_g() -> StructuredMorphism:
    return fix_f(("e1", "e0"))


def fix_h(tag: Tag | str = Tag.ORD) -> StructuredMorphism:
    """Discrete ``{u, v}`` onto the chain ``b1 <= b0``: no lift of ``b1 <= b0``.

    Filtered tags use X1 with full filtrations; C2 drops the order.
    """
    tag = Tag(tag)
    kw = {}
    if tag.needs_base:
        kw["base"] = X1
        kw["filtration"] = {"*": ["b1", "b0"]} if tag.filtered else None
        kw["alpha"] = {"b1": "*", "b0": "*"} if tag is Tag.LAXX else None
    order = [("b1", "b0")] if tag.ordered else []
    B = make_object(tag, ["b1", "b0"], order, **kw)
    if tag.filtered:
        kw["filtration"] = {"*": ["u", "v"]}
    if tag is Tag.LAXX:
        kw["alpha"] = {"u": "*", "v": "*"}
    E = make_object(tag, ["u", "v"], **kw)
    return make_morphism(E, B, {"u": "b1", "v": "b0"})


def fix_l(eps_e1: str = "x0") -> StructuredMorphism:
    """Lax instance over the chain ``x0 <= x1``: ``beta`` constant at ``x1``."""
    B = make_object(Tag.LAXX, ["b1", "b0"], [("b1", "b0")], base=X2, alpha={"b1": "x1", "b0": "x1"})
    E = make_object(Tag.LAXX, ["e1", "e0"], [("e1", "e0")], base=X2, alpha={"e1": eps_e1, "e0": "x1"})
    return make_morphism(E, B, {"e1": "b1", "e0": "b0"})


def bases() -> dict[str, Preorder]:
    return {"X1": X1, "X2": X2, "XV": XV}

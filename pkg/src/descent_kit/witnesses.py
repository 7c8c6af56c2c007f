"""Constructions that certify or explain descent verdicts.

* the two-element object whose pullback shows a failure of condition (b)
  cannot be repaired inside filtered preorders;
* a bounded search for objects whose pullback lies in a subcategory while
  the object itself does not;
* the join-built ``alpha`` that puts a pulled-back object in the image of F1;
* the largest-fiber-value factor ``beta''`` used for sim-preimages.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .categories import (
    StructuredMorphism,
    StructuredObject,
    Tag,
    f1,
    f1_inverse,
    f1_morphism,
    is_morphism,
    is_object,
    pullback,
    relax,
    relax_morphism,
    validate_morphism,
    validate_object,
)
from .census import over_objects
from .checkers import check_fiberwise_surjectivity
from .errors import InputError, PreconditionError, VerificationError
from .order import Preorder, bits, greatest_idx, join_idx, lattice_report, upclosed_violation


@dataclass(frozen=True)
class Claim:
    name: str
    passed: bool
    detail: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass(frozen=True)
class WitnessReport:
    witness_object: StructuredObject
    witness_morphism: StructuredMorphism
    pullback_object: StructuredObject
    at: tuple[str, str, str]
    claims: tuple[Claim, ...] = field(default=())

    @property
    def verified(self) -> bool:
        return all(c.passed for c in self.claims)


def _not_upclosed_at(obj: StructuredObject) -> set[int]:
    return {x for x in range(len(obj.base)) if upclosed_violation(obj.order, obj.filtration[x]) is not None}


def _as_ordx(obj: StructuredObject) -> StructuredObject:
    return StructuredObject(Tag.ORDX, obj.carrier, obj.order, obj.base, obj.filtration)


def build_two_element_witness(p: StructuredMorphism, x: str, b1: str, b0: str) -> WitnessReport:
    """Two-element ``f: A -> B`` showing that (b) failing at ``(x, b1, b0)`` blocks effective descent.

    ``A = {a1 <= a0}`` with ``f(ai) = bi`` and ``A_{x'}`` equal to ``A`` when
    ``x' < x``, to ``{a1}`` when ``x' ~ x`` and empty otherwise. ``A`` is a
    Prod object outside OrdX while ``E x_B A`` is in OrdX.
    """
    if p.tag is not Tag.ORDX:
        raise PreconditionError("the two-element witness needs an OrdX morphism")
    E, B = p.source, p.target
    X = B.base
    xi, i1, i0 = X.pos(x), B.pos(b1), B.pos(b0)
    Bx = B.filtration[xi]
    if not (Bx >> i1 & 1 and Bx >> i0 & 1 and B.order.le(i1, i0)):
        raise PreconditionError(f"({b1}, {b0}) is not an ascending pair inside B_{x}")
    Ex = E.filtration[xi]
    fib = p.fibers
    if E.order.up_of(fib[i1] & Ex) & Ex & fib[i0]:
        raise PreconditionError(f"condition (b) holds at ({x}, {b1}, {b0})")

    filt = []
    for y in range(len(X)):
        below, above = X.le(y, xi), X.le(xi, y)
        filt.append(0b11 if below and not above else 0b01 if below else 0)
    order = Preorder(("a1", "a0"), (0b11, 0b10))
    A = StructuredObject(Tag.PROD, ("a1", "a0"), order, X, tuple(filt))
    f = StructuredMorphism(A, relax(B), (i1, i0))
    P, _, _ = pullback(relax_morphism(p), f)
    P = _as_ordx(P)

    sim = {y for y in range(len(X)) if X.le(y, xi) and X.le(xi, y)}
    bad = _not_upclosed_at(A)
    claims = (
        Claim("A is a Prod object failing up-closure exactly at indices equivalent to x",
              not validate_object(A) and bad == sim,
              f"not upclosed at {sorted(X.elements[y] for y in bad)}"),
        Claim("f is a Prod morphism", not validate_morphism(f)),
        Claim("pullback is an OrdX object", not validate_object(P),
              "; ".join(str(d) for d in validate_object(P))),
    )
    return WitnessReport(A, f, P, (x, b1, b0), claims)


@dataclass(frozen=True)
class ReflectionResult:
    counterexample: StructuredMorphism | None
    pullback_object: StructuredObject | None
    size_bound: int
    explored: int

    @property
    def refuted(self) -> bool:
        return self.counterexample is not None


def check_reflection(p: StructuredMorphism, sub: Tag | str, ambient: Tag | str,
                     size_bound: int) -> ReflectionResult:
    """First ambient ``f: A -> B`` (``|A| <= size_bound``) whose pullback lies in ``sub`` but ``A`` does not.

    Supported pairs: OrdX inside Prod (membership = every member up-closed)
    and LaxX inside OrdX (membership = in the image of F1).
    """
    sub, ambient = Tag(sub), Tag(ambient)
    if size_bound < 1:
        raise PreconditionError("size bound must be at least 1")
    if (sub, ambient) == (Tag.ORDX, Tag.PROD):
        q = relax_morphism(p)

        def member(obj: StructuredObject) -> bool:
            return not _not_upclosed_at(obj)
    elif (sub, ambient) == (Tag.LAXX, Tag.ORDX):
        q = f1_morphism(p)

        def member(obj: StructuredObject) -> bool:
            return f1_inverse(obj) is not None
    else:
        raise InputError(f"unsupported subcategory pair {sub.value} in {ambient.value}")
    if p.tag is not sub:
        raise PreconditionError(f"p must be tagged {sub.value}")
    explored = 0
    for f in over_objects(q.target, size_bound):
        explored += 1
        if member(f.source):
            continue
        P, _, _ = pullback(q, f)
        if member(P):
            return ReflectionResult(f, P, size_bound, explored)
    return ReflectionResult(None, None, size_bound, explored)


def construct_alpha_by_join(f: StructuredMorphism, p: StructuredMorphism) -> StructuredObject:
    """Put ``A`` in the image of F1 via ``alpha(a) = join{x | a in A_x}`` below ``beta f(a)``.

    ``f: A -> F1(B)`` is an OrdX morphism and ``p: E -> B`` a LaxX morphism.
    Returns the LaxX object ``(A, alpha)``; raises :class:`VerificationError`
    if a postcondition fails, which the hypotheses rule out.
    """
    if p.tag is not Tag.LAXX:
        raise PreconditionError("p must be a LaxX morphism")
    X = p.target.base
    if not lattice_report(X).locally_complete:
        raise PreconditionError("X is not locally complete")
    q = f1_morphism(p)
    if f.tag is not Tag.ORDX or f.target != q.target or not is_morphism(f):
        raise PreconditionError("f must be an OrdX morphism into F1(B)")
    if not check_fiberwise_surjectivity(q):
        raise PreconditionError("F1(p) is not fiberwise surjective")
    P, _, _ = pullback(q, f)
    if f1_inverse(P) is None:
        raise PreconditionError("the pullback is not in the image of F1")

    A = f.source
    beta = p.target.alpha
    alpha = []
    for a, xs in enumerate(A.members()):
        bound = beta[f.map[a]]
        if xs & ~X.down[bound]:
            raise VerificationError(f"{A.carrier[a]} lies in some A_x with x above beta f(a)")
        j = join_idx(X, xs, X.down[bound])
        if j is None:
            raise VerificationError(f"no join below {X.elements[bound]} for {A.carrier[a]}")
        if not A.filtration[j] >> a & 1:
            raise VerificationError(f"{A.carrier[a]} not in A_{X.elements[j]}")
        alpha.append(j)
    L = StructuredObject(Tag.LAXX, A.carrier, A.order, X, alpha=tuple(alpha))
    if not is_object(L):
        raise VerificationError("alpha is not monotone")
    if f1(L).filtration != A.filtration:
        raise VerificationError("F1 of the result differs from A")
    return L


@dataclass(frozen=True)
class BetaReport:
    value: str
    bounded: bool
    equivalent: bool


def construct_beta_doubleprime(p: StructuredMorphism, b: str) -> BetaReport:
    """Largest ``eps(e)`` over the fiber of ``b``, checked to lie between the fiber values and ``beta(b)``."""
    if p.tag is not Tag.LAXX:
        raise PreconditionError("p must be a LaxX morphism")
    E, B = p.source, p.target
    X = B.base
    i = B.pos(b)
    fiber = p.fibers[i]
    if not fiber:
        raise PreconditionError(f"empty fiber over {b}")
    values = 0
    for e in bits(fiber):
        values |= 1 << E.alpha[e]
    g = greatest_idx(X, values)
    if g is None:
        raise PreconditionError(f"the fiber values over {b} have no largest element")
    beta = B.alpha[i]
    bounded = all(X.le(v, g) for v in bits(values)) and X.le(g, beta)
    return BetaReport(X.elements[g], bounded, X.le(beta, g))

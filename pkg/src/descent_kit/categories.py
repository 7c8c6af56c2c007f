"""The five concrete categories over a base preorder X.

``Ord``   preorders and monotone maps.
``C2``    sets with an antitone X-indexed family of subsets.
``Prod``  preorders carrying such a family (no up-closure required).
``OrdX``  X-filtered preorders: every member of the family is up-closed.
``LaxX``  preorders with a monotone map to X, morphisms lax over X.

Filtrations are stored as one bitmask over the carrier per base element and
``alpha`` as a tuple of base positions. Pullbacks and coequalizers are the
chosen set-like ones; the lax coequalizer is partial.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import CoequalizerUnavailable, InputError, PreconditionError, PullbackUnavailable
from .order import (
    Diagnostic,
    MonotoneMap,
    Preorder,
    bits,
    close,
    close_masks,
    greatest_idx,
    join_idx,
    meet_idx,
    upclosed_violation,
    validate_preorder,
)


class Tag(str, Enum):
    ORD = "Ord"
    C2 = "C2"
    PROD = "Prod"
    ORDX = "OrdX"
    LAXX = "LaxX"

    @property
    def ordered(self) -> bool:
        return self is not Tag.C2

    @property
    def filtered(self) -> bool:
        return self in (Tag.C2, Tag.PROD, Tag.ORDX)

    @property
    def needs_base(self) -> bool:
        return self is not Tag.ORD


@dataclass(frozen=True)
class StructuredObject:
    tag: Tag
    carrier: tuple[str, ...]
    order: Preorder | None = None
    base: Preorder | None = None
    filtration: tuple[int, ...] | None = None
    alpha: tuple[int, ...] | None = None

    def __len__(self) -> int:
        return len(self.carrier)

    def at(self, x: str) -> frozenset[str]:
        """The member of the filtration indexed by base element ``x``."""
        m = self.filtration[self.base.pos(x)]
        return frozenset(self.carrier[i] for i in bits(m))

    def alpha_of(self, a: str) -> str:
        return self.base.elements[self.alpha[self.pos(a)]]

    def pos(self, a: str) -> int:
        if self.order is not None:
            return self.order.pos(a)
        try:
            return self.carrier.index(a)
        except ValueError:
            raise InputError(f"unknown element {a!r}") from None

    @property
    def full(self) -> int:
        return (1 << len(self.carrier)) - 1

    def members(self) -> tuple[int, ...]:
        """For each carrier element, the mask of base elements whose set contains it."""
        out = [0] * len(self.carrier)
        for x, m in enumerate(self.filtration):
            for a in bits(m):
                out[a] |= 1 << x
        return tuple(out)

    def up(self, i: int) -> int:
        return self.order.up[i] if self.order is not None else 1 << i


@dataclass(frozen=True)
class StructuredMorphism:
    source: StructuredObject
    target: StructuredObject
    map: tuple[int, ...]

    @property
    def tag(self) -> Tag:
        return self.source.tag

    def __call__(self, a: str) -> str:
        return self.target.carrier[self.map[self.source.pos(a)]]

    def as_dict(self) -> dict[str, str]:
        t = self.target.carrier
        return {a: t[self.map[i]] for i, a in enumerate(self.source.carrier)}

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.map[i]
        return out

    @property
    def fibers(self) -> tuple[int, ...]:
        fib = [0] * len(self.target)
        for i, v in enumerate(self.map):
            fib[v] |= 1 << i
        return tuple(fib)

    def underlying(self) -> MonotoneMap:
        return MonotoneMap(self.source.order, self.target.order, self.map)


@dataclass(frozen=True)
class Filtration:
    base: Preorder
    assign: Mapping[str, frozenset[str]]


@dataclass(frozen=True)
class Profunctor:
    base: Preorder
    carrier: Preorder
    rel: frozenset[tuple[str, str]]


# -- construction -----------------------------------------------------------

def make_object(
    tag: Tag | str,
    elements: Sequence[str],
    leq: Iterable[tuple[str, str]] = (),
    *,
    base: Preorder | None = None,
    filtration: Mapping[str, Iterable[str]] | None = None,
    alpha: Mapping[str, str] | None = None,
    closed: bool = True,
) -> StructuredObject:
    """Build an object from named data; ``closed`` closes ``leq`` reflexively-transitively.

    The result is not validated; call :func:`validate_object`.
    """
    tag = Tag(tag)
    elements = tuple(elements)
    if tag.needs_base and base is None:
        raise InputError(f"tag {tag.value} needs a base preorder")
    order = None
    if tag.ordered:
        order = close(elements, leq) if closed else Preorder.from_pairs(elements, leq)
    elif list(leq):
        raise InputError("C2 objects carry no order")
    filt = al = None
    if tag.filtered:
        filtration = filtration or {}
        unknown = set(filtration) - set(base.elements)
        if unknown:
            raise InputError(f"filtration indexed by unknown base elements {sorted(unknown)}")
        idx = {e: i for i, e in enumerate(elements)}
        masks = []
        for x in base.elements:
            m = 0
            for a in filtration.get(x, ()):
                if a not in idx:
                    raise InputError(f"filtration at {x} mentions unknown element {a!r}")
                m |= 1 << idx[a]
            masks.append(m)
        filt = tuple(masks)
    if tag is Tag.LAXX:
        if alpha is None or set(alpha) != set(elements):
            raise InputError("LaxX objects need alpha defined on every element")
        al = tuple(base.pos(alpha[a]) for a in elements)
    return StructuredObject(tag, elements, order, base if tag.needs_base else None, filt, al)


def make_morphism(source: StructuredObject, target: StructuredObject,
                  mapping: Mapping[str, str]) -> StructuredMorphism:
    missing = [a for a in source.carrier if a not in mapping]
    if missing:
        raise InputError(f"map is not total, missing {missing}")
    return StructuredMorphism(source, target, tuple(target.pos(mapping[a]) for a in source.carrier))


def identity(obj: StructuredObject) -> StructuredMorphism:
    return StructuredMorphism(obj, obj, tuple(range(len(obj))))


def compose(g: StructuredMorphism, f: StructuredMorphism) -> StructuredMorphism:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise PreconditionError("morphisms are not composable")
    return StructuredMorphism(f.source, g.target, tuple(g.map[i] for i in f.map))


# -- validation ---------------------------------------------------------------

def validate_object(obj: StructuredObject) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    tag = obj.tag
    if tag.needs_base and obj.base is None:
        return [Diagnostic("missing base", ())]
    if tag.needs_base:
        out += [Diagnostic(f"base {d.axiom}", d.witness) for d in validate_preorder(obj.base)]
    if tag.ordered:
        if obj.order is None:
            return out + [Diagnostic("missing order", ())]
        out += validate_preorder(obj.order)
    c = obj.carrier
    if tag.filtered:
        X, F = obj.base, obj.filtration
        if F is None or len(F) != len(X):
            return out + [Diagnostic("missing filtration", ())]
        for x in range(len(X)):
            for x2 in bits(X.down[x]):
                extra = F[x] & ~F[x2]
                if extra:
                    a = c[(extra & -extra).bit_length() - 1]
                    out.append(Diagnostic("not antitone", (X.elements[x2], X.elements[x], a)))
        if tag is Tag.ORDX:
            for x in range(len(X)):
                bad = upclosed_violation(obj.order, F[x])
                if bad is not None:
                    out.append(Diagnostic("not upclosed", (c[bad[0]], c[bad[1]]), X.elements[x]))
    if tag is Tag.LAXX:
        X, al = obj.base, obj.alpha
        if al is None or len(al) != len(c):
            return out + [Diagnostic("missing alpha", ())]
        for i in range(len(c)):
            for j in bits(obj.order.up[i]):
                if not X.le(al[i], al[j]):
                    out.append(Diagnostic("alpha not monotone", (c[i], c[j])))
    return out


def validate_morphism(m: StructuredMorphism) -> list[Diagnostic]:
    S, T = m.source, m.target
    if S.tag is not T.tag:
        return [Diagnostic("tag mismatch", (S.tag.value, T.tag.value))]
    if S.base != T.base:
        return [Diagnostic("base mismatch", ())]
    if len(m.map) != len(S) or any(not 0 <= v < len(T) for v in m.map):
        return [Diagnostic("map not total", ())]
    out: list[Diagnostic] = []
    sc, tc, f = S.carrier, T.carrier, m.map
    if S.tag.ordered:
        for i in range(len(sc)):
            for j in bits(S.order.up[i]):
                if not T.order.le(f[i], f[j]):
                    out.append(Diagnostic("not monotone", (sc[i], sc[j])))
    if S.tag.filtered:
        X = S.base
        for x in range(len(X)):
            for i in bits(S.filtration[x]):
                if not T.filtration[x] >> f[i] & 1:
                    out.append(Diagnostic("filtration not preserved", (sc[i], tc[f[i]]), X.elements[x]))
    if S.tag is Tag.LAXX:
        X = S.base
        for i in range(len(sc)):
            if not X.le(S.alpha[i], T.alpha[f[i]]):
                out.append(Diagnostic("not lax", (sc[i], X.elements[S.alpha[i]], X.elements[T.alpha[f[i]]])))
    return out


def is_object(obj: StructuredObject) -> bool:
    return not validate_object(obj)


def is_morphism(m: StructuredMorphism) -> bool:
    """Same answer as ``not validate_morphism(m)``, stopping at the first failure."""
    S, T, f = m.source, m.target, m.map
    if S.tag is not T.tag or S.base != T.base:
        return False
    nT = len(T)
    if len(f) != len(S) or any(not 0 <= v < nT for v in f):
        return False
    if S.tag.ordered:
        tu = T.order.up
        for i, row in enumerate(S.order.up):
            ti = tu[f[i]]
            for j in bits(row):
                if not ti >> f[j] & 1:
                    return False
    if S.tag.filtered:
        for sm, tm in zip(S.filtration, T.filtration):
            for i in bits(sm):
                if not tm >> f[i] & 1:
                    return False
    if S.tag is Tag.LAXX:
        xu, ta = S.base.up, T.alpha
        for i, a in enumerate(S.alpha):
            if not xu[a] >> ta[f[i]] & 1:
                return False
    return True


# -- filtrations and profunctors ---------------------------------------------

def filtration_from_profunctor(pf: Profunctor) -> Filtration:
    A, X = pf.carrier, pf.base
    for x, a in pf.rel:
        if x not in X.index or a not in A.index:
            raise InputError(f"pair ({x}, {a}) outside X x A")
    for x, a in pf.rel:
        for x2 in X.names(X.down[X.pos(x)]):
            for a2 in A.names(A.up[A.pos(a)]):
                if (x2, a2) not in pf.rel:
                    raise InputError(f"not a profunctor: ({x}, {a}) in rel but ({x2}, {a2}) is not")
    return Filtration(X, {x: frozenset(a for (y, a) in pf.rel if y == x) for x in X.elements})


def profunctor_from_filtration(ft: Filtration, order: Preorder) -> Profunctor:
    X = ft.base
    obj = make_object(Tag.ORDX, order.elements, order.pairs(), base=X, filtration=ft.assign)
    diags = validate_object(obj)
    if diags:
        raise InputError(f"not an X-filtration: {diags[0]}")
    return Profunctor(X, order, frozenset((x, a) for x in X.elements for a in ft.assign.get(x, ())))


# -- functors between the categories -------------------------------------------

def forget(obj: StructuredObject) -> StructuredObject:
    """Underlying preorder, as an ``Ord`` object."""
    return StructuredObject(Tag.ORD, obj.carrier, obj.order)


def relax(obj: StructuredObject, tag: Tag = Tag.PROD) -> StructuredObject:
    """Re-tag a filtered object (OrdX into Prod, or either into C2 by dropping the order)."""
    order = obj.order if tag.ordered else None
    return StructuredObject(tag, obj.carrier, order, obj.base, obj.filtration)


def relax_morphism(m: StructuredMorphism, tag: Tag = Tag.PROD) -> StructuredMorphism:
    return StructuredMorphism(relax(m.source, tag), relax(m.target, tag), m.map)


def f1(obj: StructuredObject) -> StructuredObject:
    """Send ``(A, alpha)`` to ``A`` filtered by ``A_x = {a | x <= alpha(a)}``."""
    if obj.tag is not Tag.LAXX:
        raise PreconditionError("F1 takes LaxX objects")
    X = obj.base
    filt = []
    for x in range(len(X)):
        up = X.up[x]
        m = 0
        for a, v in enumerate(obj.alpha):
            if up >> v & 1:
                m |= 1 << a
        filt.append(m)
    return StructuredObject(Tag.ORDX, obj.carrier, obj.order, X, tuple(filt))


def f1_morphism(m: StructuredMorphism) -> StructuredMorphism:
    return StructuredMorphism(f1(m.source), f1(m.target), m.map)


def f1_obstruction(obj: StructuredObject) -> str | None:
    """First element ``a`` whose index set ``{x | a in A_x}`` has no largest element."""
    for a, xs in enumerate(obj.members()):
        if greatest_idx(obj.base, xs) is None:
            return obj.carrier[a]
    return None


def f1_inverse(obj: StructuredObject) -> StructuredObject | None:
    """Recover ``(A, alpha)`` from a filtered preorder in the image of F1, else ``None``.

    ``alpha(a)`` is the largest base element whose set contains ``a``; inside
    an equivalence class the earliest element of the base wins.
    """
    if obj.tag is not Tag.ORDX:
        raise PreconditionError("F1 inverse takes OrdX objects")
    X = obj.base
    alpha = []
    for xs in obj.members():
        g = greatest_idx(X, xs)
        if g is None:
            return None
        alpha.append(g)
    return StructuredObject(Tag.LAXX, obj.carrier, obj.order, X, alpha=tuple(alpha))


def f1_inverse_morphism(m: StructuredMorphism) -> StructuredMorphism | None:
    s, t = f1_inverse(m.source), f1_inverse(m.target)
    if s is None or t is None:
        return None
    return StructuredMorphism(s, t, m.map)


def embed(obj: StructuredObject, tag: Tag | str, mode: str, base: Preorder) -> StructuredObject:
    """Right inverses of the forgetful functor to ``Ord``.

    ``mode="full"`` gives every member of the filtration the whole carrier
    (tags C2, Prod, OrdX); ``mode="bottom"`` sends every element to the bottom
    of ``base`` (tag LaxX).
    """
    tag = Tag(tag)
    if mode == "full":
        if not tag.filtered:
            raise PreconditionError(f"mode full needs a filtered tag, got {tag.value}")
        order = obj.order if tag.ordered else None
        return StructuredObject(tag, obj.carrier, order, base, tuple(obj.full for _ in base.elements))
    if mode == "bottom":
        if tag is not Tag.LAXX:
            raise PreconditionError("mode bottom builds LaxX objects")
        bottom = next((i for i in range(len(base)) if base.up[i] == base.full), None)
        if bottom is None:
            raise PreconditionError("base has no bottom element")
        return StructuredObject(Tag.LAXX, obj.carrier, obj.order, base, alpha=tuple(bottom for _ in obj.carrier))
    raise InputError(f"unknown embedding mode {mode!r}")


# -- chosen limits and colimits -------------------------------------------------

def _check_cospan(p: StructuredMorphism, f: StructuredMorphism) -> None:
    if p.tag is not f.tag:
        raise PreconditionError("pullback of morphisms with different tags")
    if p.target != f.target:
        raise PreconditionError("pullback needs a common codomain")


def pullback(p: StructuredMorphism, f: StructuredMorphism
             ) -> tuple[StructuredObject, StructuredMorphism, StructuredMorphism]:
    """Pairs ``(e, a)`` with ``p(e) = f(a)`` in lexicographic order, structure componentwise."""
    _check_cospan(p, f)
    E, A = p.source, f.source
    tag = p.tag
    pm, fm = p.map, f.map
    nE, nA = len(E), len(A)
    pairs = [(e, a) for e in range(nE) for a in range(nA) if pm[e] == fm[a]]
    col_e = [0] * nE
    col_a = [0] * nA
    for k, (e, a) in enumerate(pairs):
        col_e[e] |= 1 << k
        col_a[a] |= 1 << k
    carrier = tuple(f"({E.carrier[e]},{A.carrier[a]})" for e, a in pairs)
    order = None
    if tag.ordered:
        up_e = [0] * nE
        up_a = [0] * nA
        for e, row in enumerate(E.order.succ):
            m = 0
            for e2 in row:
                m |= col_e[e2]
            up_e[e] = m
        for a, row in enumerate(A.order.up):
            m = 0
            for a2 in bits(row):
                m |= col_a[a2]
            up_a[a] = m
        order = Preorder(carrier, tuple(up_e[e] & up_a[a] for e, a in pairs))
    filt = alpha = None
    if tag.filtered:
        fl = []
        for x in range(len(E.base)):
            me = ma = 0
            for e in bits(E.filtration[x]):
                me |= col_e[e]
            for a in bits(A.filtration[x]):
                ma |= col_a[a]
            fl.append(me & ma)
        filt = tuple(fl)
    if tag is Tag.LAXX:
        X = E.base
        al = []
        for e, a in pairs:
            g = meet_idx(X, (1 << E.alpha[e]) | (1 << A.alpha[a]))
            if g is None:
                raise PullbackUnavailable(
                    f"base not locally complete at ({X.elements[E.alpha[e]]},{X.elements[A.alpha[a]]})")
            al.append(g)
        alpha = tuple(al)
    P = StructuredObject(tag, carrier, order, E.base, filt, alpha)
    return P, StructuredMorphism(P, E, tuple(e for e, _ in pairs)), StructuredMorphism(P, A, tuple(a for _, a in pairs))


def generated_classes(n: int, glue: Iterable[tuple[int, int]]) -> list[int]:
    parent = list(range(n))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, j in glue:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[max(ri, rj)] = min(ri, rj)
    return [find(i) for i in range(n)]


def quotient(B: StructuredObject, glue: Iterable[tuple[int, int]]
             ) -> tuple[StructuredObject, StructuredMorphism]:
    """Quotient of ``B`` by the equivalence generated by ``glue``, with the smallest structure."""
    root = generated_classes(len(B), glue)
    reps = sorted(set(root))
    slot = {r: k for k, r in enumerate(reps)}
    q = tuple(slot[r] for r in root)
    carrier = tuple(B.carrier[r] for r in reps)
    m = len(reps)
    tag = B.tag
    order = None
    if tag.ordered:
        up = [0] * m
        for b, row in enumerate(B.order.up):
            for b2 in bits(row):
                up[q[b]] |= 1 << q[b2]
        order = Preorder(carrier, close_masks(up))
    filt = alpha = None
    if tag.filtered:
        fl = []
        for mask in B.filtration:
            img = 0
            for b in bits(mask):
                img |= 1 << q[b]
            if tag is Tag.ORDX:
                img = order.up_of(img)
            fl.append(img)
        filt = tuple(fl)
    if tag is Tag.LAXX:
        X = B.base
        al = []
        for c in range(m):
            vals = 0
            for b in range(len(B)):
                if order.le(q[b], c):
                    vals |= 1 << B.alpha[b]
            j = join_idx(X, vals)
            if j is None:
                raise CoequalizerUnavailable(
                    f"coequalizer does not exist in LaxX for this instance (no join of "
                    f"{sorted(X.names(vals))} for class of {carrier[c]})")
            al.append(j)
        alpha = tuple(al)
    Q = StructuredObject(tag, carrier, order, B.base, filt, alpha)
    return Q, StructuredMorphism(B, Q, q)


def coequalizer(f: StructuredMorphism, g: StructuredMorphism
                ) -> tuple[StructuredObject, StructuredMorphism]:
    if f.tag is not g.tag or f.source != g.source or f.target != g.target:
        raise PreconditionError("coequalizer needs a parallel pair")
    return quotient(f.target, zip(f.map, g.map))


# -- hom-sets ----------------------------------------------------------------

def allowed_targets(A: StructuredObject, B: StructuredObject) -> list[int]:
    """Per source element, the targets permitted by filtration / lax constraints alone."""
    allowed = [B.full] * len(A)
    if A.tag.filtered:
        for a, xs in enumerate(A.members()):
            for x in bits(xs):
                allowed[a] &= B.filtration[x]
    if A.tag is Tag.LAXX:
        X = A.base
        for a in range(len(A)):
            m = 0
            for b in range(len(B)):
                if X.le(A.alpha[a], B.alpha[b]):
                    m |= 1 << b
            allowed[a] &= m
    return allowed


def homs(A: StructuredObject, B: StructuredObject,
         restrict: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Every morphism ``A -> B`` in the common tag, in lexicographic order of maps.

    ``restrict`` optionally narrows the admissible targets per element (used
    for maps over a fixed base object).
    """
    allowed = allowed_targets(A, B)
    if restrict is not None:
        allowed = [x & r for x, r in zip(allowed, restrict)]
    n = len(A)
    ordered = A.tag.ordered
    img = [0] * n

    def go(i: int) -> Iterator[tuple[int, ...]]:
        if i == n:
            yield tuple(img)
            return
        cands = allowed[i]
        if ordered:
            AO, BO = A.order, B.order
            for j in range(i):
                if AO.le(i, j):
                    cands &= BO.down[img[j]]
                if AO.le(j, i):
                    cands &= BO.up[img[j]]
        for b in bits(cands):
            img[i] = b
            yield from go(i + 1)

    return go(0)


def hom_set(A: StructuredObject, B: StructuredObject) -> list[StructuredMorphism]:
    return [StructuredMorphism(A, B, m) for m in homs(A, B)]

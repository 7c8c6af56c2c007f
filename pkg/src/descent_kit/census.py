"""Exhaustive generation of small structures up to isomorphism.

Everything here works on carriers of at most a handful of elements, so
isomorph rejection is done the blunt way: canonical key = lexicographically
least relabelling over the relevant permutation group.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations, product
from typing import Iterable, Iterator, Sequence

from .categories import StructuredMorphism, StructuredObject, Tag, homs
from .order import Preorder, bits

Perm = tuple[int, ...]


@lru_cache(maxsize=None)
def labeled_preorders(n: int) -> tuple[tuple[int, ...], ...]:
    """All preorders on ``range(n)`` as up-mask tuples (1, 1, 4, 29, 355, 6942, ...)."""
    if n == 0:
        return ((),)
    out = []
    for up in labeled_preorders(n - 1):
        m = n - 1
        full = (1 << m) - 1
        down = [0] * m
        for i, row in enumerate(up):
            for j in bits(row):
                down[j] |= 1 << i
        upsets = [s for s in range(full + 1) if _closed(up, s)]
        downsets = [s for s in range(full + 1) if _closed(down, s)]
        for below in downsets:
            for above in upsets:
                # every old element below the new one must lie below every old element above it
                if all(above & ~up[i] == 0 for i in bits(below)):
                    new = [row | ((1 << m) if below >> i & 1 else 0) for i, row in enumerate(up)]
                    new.append(above | (1 << m))
                    out.append(tuple(new))
    return tuple(out)


def _closed(rel: Sequence[int], s: int) -> bool:
    for i in bits(s):
        if rel[i] & ~s:
            return False
    return True


@lru_cache(maxsize=None)
def _mask_table(perm: Perm) -> tuple[int, ...]:
    n = len(perm)
    table = []
    for m in range(1 << n):
        out = 0
        for i in bits(m):
            out |= 1 << perm[i]
        table.append(out)
    return tuple(table)


def relabel_up(up: Sequence[int], perm: Perm) -> tuple[int, ...]:
    t = _mask_table(perm)
    new = [0] * len(up)
    for i, row in enumerate(up):
        new[perm[i]] = t[row]
    return tuple(new)


def relabel_masks(masks: Sequence[int], perm: Perm) -> tuple[int, ...]:
    t = _mask_table(perm)
    return tuple(t[m] for m in masks)


def relabel_values(vals: Sequence[int], perm: Perm) -> tuple[int, ...]:
    new = [0] * len(vals)
    for i, v in enumerate(vals):
        new[perm[i]] = v
    return tuple(new)


def inverse(perm: Perm) -> Perm:
    inv = [0] * len(perm)
    for i, j in enumerate(perm):
        inv[j] = i
    return tuple(inv)


@lru_cache(maxsize=None)
def block_group(sizes: tuple[int, ...]) -> tuple[Perm, ...]:
    """Permutations of ``range(sum(sizes))`` preserving consecutive blocks of the given sizes."""
    offsets = []
    o = 0
    for s in sizes:
        offsets.append(o)
        o += s
    per_block = [list(permutations(range(s))) for s in sizes]
    out = []
    for choice in product(*per_block):
        perm = [0] * o
        for off, pb in zip(offsets, choice):
            for i, j in enumerate(pb):
                perm[off + i] = off + j
        out.append(tuple(perm))
    return tuple(out)


def orbit_reps(items: Iterable[tuple[int, ...]], group: Sequence[Perm]
               ) -> Iterator[tuple[tuple[int, ...], tuple[Perm, ...]]]:
    """Orders from ``items`` that are least in their orbit, with their stabilizers."""
    for up in items:
        best = True
        stab = []
        for g in group:
            img = relabel_up(up, g)
            if img < up:
                best = False
                break
            if img == up:
                stab.append(g)
        if best:
            yield up, tuple(stab)


def _subsets(mask: int) -> Iterator[int]:
    sub = mask
    while True:
        yield sub
        if sub == 0:
            return
        sub = (sub - 1) & mask


def _upsets(up: Sequence[int], within: int) -> list[int]:
    return [s for s in _subsets(within) if _closed(up, s)]


def filtrations(tag: Tag, up: Sequence[int] | None, X: Preorder, n: int,
                allowed: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Antitone families ``x -> A_x`` (up-closed for OrdX), each ``A_x`` inside ``allowed[x]``."""
    full = (1 << n) - 1
    allowed = allowed if allowed is not None else [full] * len(X)
    cache: dict[int, list[int]] = {}

    def cands(mask: int) -> list[int]:
        if mask not in cache:
            if tag is Tag.ORDX:
                cache[mask] = _upsets(up, mask)
            else:
                cache[mask] = list(_subsets(mask))
        return cache[mask]

    nx = len(X)
    out = [0] * nx

    def go(x: int) -> Iterator[tuple[int, ...]]:
        if x == nx:
            yield tuple(out)
            return
        hi = allowed[x]
        lo = 0
        for y in range(x):
            if X.le(y, x):
                hi &= out[y]
            if X.le(x, y):
                lo |= out[y]
        if lo & ~hi:
            return
        for s in cands(hi):
            if s & lo == lo:
                out[x] = s
                yield from go(x + 1)

    return go(0)


def alphas(up: Sequence[int], X: Preorder, allowed: Sequence[int]) -> Iterator[tuple[int, ...]]:
    """Monotone maps to ``X`` with ``alpha(a)`` inside ``allowed[a]``."""
    n = len(up)
    out = [0] * n

    def go(a: int) -> Iterator[tuple[int, ...]]:
        if a == n:
            yield tuple(out)
            return
        c = allowed[a]
        for b in range(a):
            if up[a] >> b & 1:
                c &= X.down[out[b]]
            if up[b] >> a & 1:
                c &= X.up[out[b]]
        for v in bits(c):
            out[a] = v
            yield from go(a + 1)

    return go(0)


def names(n: int, prefix: str = "a") -> tuple[str, ...]:
    return tuple(f"{prefix}{i}" for i in range(n))


def _structures(tag: Tag, up: tuple[int, ...] | None, X: Preorder | None, n: int,
                f_allowed_filt: Sequence[int] | None, alpha_allowed: Sequence[int] | None
                ) -> Iterator[tuple[tuple[int, ...] | None, tuple[int, ...] | None]]:
    if tag.filtered:
        for fl in filtrations(tag, up, X, n, f_allowed_filt):
            yield fl, None
    elif tag is Tag.LAXX:
        allowed = alpha_allowed if alpha_allowed is not None else [X.full] * n
        for al in alphas(up, X, allowed):
            yield None, al
    else:
        yield None, None


def _struct_key(fl, al, perm: Perm):
    return (relabel_masks(fl, perm) if fl is not None else None,
            relabel_values(al, perm) if al is not None else None)


def objects(tag: Tag | str, n: int, X: Preorder | None = None, prefix: str = "a"
            ) -> list[StructuredObject]:
    """Every object of the tag on ``n`` elements, one per isomorphism class."""
    tag = Tag(tag)
    group = block_group((n,))
    carrier = names(n, prefix)
    orders = labeled_preorders(n) if tag.ordered else (tuple(1 << i for i in range(n)),)
    out = []
    for up, stab in orbit_reps(orders, group):
        order = Preorder(carrier, up) if tag.ordered else None
        seen = set()
        for fl, al in _structures(tag, up, X, n, None, None):
            key = min(_struct_key(fl, al, g) for g in stab)
            if key in seen:
                continue
            seen.add(key)
            out.append(StructuredObject(tag, carrier, order, X if tag.needs_base else None, fl, al))
    return out


def compositions(total_max: int, parts: int) -> Iterator[tuple[int, ...]]:
    def go(k: int, left: int) -> Iterator[tuple[int, ...]]:
        if k == parts:
            yield ()
            return
        for s in range(left + 1):
            for rest in go(k + 1, left - s):
                yield (s,) + rest

    return go(0, total_max)


def over_objects(B: StructuredObject, max_size: int, min_size: int = 0, prefix: str = "a"
                 ) -> Iterator[StructuredMorphism]:
    """Objects ``f: A -> B`` over ``B`` with ``|A| <= max_size``, one per iso class over ``B``.

    Elements of ``A`` are laid out fiber by fiber, so isomorphisms over ``B``
    are exactly the permutations inside fibers. Generation is by size, then
    by fiber sizes in lexicographic order.
    """
    tag = B.tag
    X = B.base
    for size in range(min_size, max_size + 1):
        for sizes in compositions(size, len(B)):
            if sum(sizes) != size:
                continue
            yield from _over_with_sizes(B, sizes, tag, X, prefix)


def _over_with_sizes(B, sizes, tag, X, prefix):
    n = sum(sizes)
    fmap = tuple(b for b, s in enumerate(sizes) for _ in range(s))
    carrier = names(n, prefix)
    group = block_group(sizes)
    if tag.ordered:
        BO = B.order
        orders = (up for up in labeled_preorders(n)
                  if all(BO.up[fmap[i]] >> fmap[j] & 1 for i in range(n) for j in bits(up[i])))
    else:
        orders = iter([tuple(1 << i for i in range(n))])
    f_allowed = None
    al_allowed = None
    if tag.filtered:
        f_allowed = []
        for x in range(len(X)):
            m = 0
            for i in range(n):
                if B.filtration[x] >> fmap[i] & 1:
                    m |= 1 << i
            f_allowed.append(m)
    if tag is Tag.LAXX:
        al_allowed = [X.down[B.alpha[fmap[i]]] for i in range(n)]
    for up, stab in orbit_reps(orders, group):
        order = Preorder(carrier, up) if tag.ordered else None
        seen = set()
        for fl, al in _structures(tag, up if tag.ordered else None, X, n, f_allowed, al_allowed):
            key = min(_struct_key(fl, al, g) for g in stab)
            if key in seen:
                continue
            seen.add(key)
            A = StructuredObject(tag, carrier, order, X if tag.needs_base else None, fl, al)
            yield StructuredMorphism(A, B, fmap)


def automorphisms(obj: StructuredObject) -> list[Perm]:
    n = len(obj)
    out = []
    for g in permutations(range(n)):
        if obj.order is not None and relabel_up(obj.order.up, g) != obj.order.up:
            continue
        if obj.filtration is not None and relabel_masks(obj.filtration, g) != obj.filtration:
            continue
        if obj.alpha is not None and relabel_values(obj.alpha, g) != obj.alpha:
            continue
        out.append(g)
    return out


def morphisms(tag: Tag | str, sizes_E: Iterable[int], sizes_B: Iterable[int],
              X: Preorder | None = None) -> list[StructuredMorphism]:
    """Every morphism ``p: E -> B`` with the given carrier sizes, one per iso class of arrows."""
    tag = Tag(tag)
    Es = [E for n in sizes_E for E in objects(tag, n, X, "e")]
    Bs = [B for n in sizes_B for B in objects(tag, n, X, "b")]
    out = []
    for B in Bs:
        autB = automorphisms(B)
        for E in Es:
            autE = [inverse(g) for g in automorphisms(E)]
            seen = set()
            for m in homs(E, B):
                key = min(tuple(t[m[s[i]]] for i in range(len(m))) for s in autE for t in autB)
                if key in seen:
                    continue
                seen.add(key)
                out.append(StructuredMorphism(E, B, m))
    return out

"""Seeded random instances: random relations closed into preorders, filtrations
made antitone (and up-closed for OrdX) by construction rather than rejection."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .categories import StructuredMorphism, StructuredObject, Tag
from .census import names
from .documents import InstanceDocument
from .errors import InputError
from .order import Preorder, bits, close_masks


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    tag: Tag = Tag.ORDX
    x_size: int = 2
    b_size: int = 3
    e_size: int = 3
    density: float = 0.4
    back_density: float = 0.1
    filtration_density: float = 0.5

    def __post_init__(self) -> None:
        object.__setattr__(self, "tag", Tag(self.tag))
        if min(self.x_size, self.b_size, self.e_size) < 0:
            raise InputError("sizes must be non-negative")
        if self.tag.needs_base and self.x_size < 1:
            raise InputError(f"tag {self.tag.value} needs a non-empty base")
        if self.b_size == 0 and self.e_size > 0:
            raise InputError("a non-empty E cannot map into an empty B")
        for v in (self.density, self.back_density, self.filtration_density):
            if not 0.0 <= v <= 1.0:
                raise InputError("densities lie in [0, 1]")


def random_preorder(rng: random.Random, n: int, density: float, back_density: float,
                    prefix: str = "x") -> Preorder:
    """Random forward edges (a DAG) plus a few backward ones, closed."""
    up = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < density:
                up[i] |= 1 << j
            elif rng.random() < back_density:
                up[j] |= 1 << i
    return Preorder(names(n, prefix), close_masks(up))


def _order_over(rng: random.Random, fmap: list[int], BO: Preorder, density: float,
                back_density: float, prefix: str) -> Preorder:
    """Random preorder on the domain of ``fmap`` making it monotone into ``BO``."""
    n = len(fmap)
    up = [1 << i for i in range(n)]
    for i in range(n):
        for j in range(n):
            if i == j or not BO.le(fmap[i], fmap[j]):
                continue
            if rng.random() < (density if i < j else back_density):
                up[i] |= 1 << j
    return Preorder(names(n, prefix), close_masks(up))


def _filtration(rng: random.Random, X: Preorder, order: Preorder | None, allowed: list[int],
                density: float, upclosed: bool) -> tuple[int, ...]:
    """``A_x`` = (up-closure of) the union of random seeds at every ``y >= x``."""
    seeds = []
    for y in range(len(X)):
        s = 0
        for i in bits(allowed[y]):
            if rng.random() < density:
                s |= 1 << i
        seeds.append(s)
    out = []
    for x in range(len(X)):
        m = 0
        for y in bits(X.up[x]):
            m |= seeds[y]
        if upclosed:
            m = order.up_of(m)
        out.append(m)
    return tuple(out)


def _alpha(rng: random.Random, X: Preorder, order: Preorder, ceiling: list[int] | None) -> tuple[int, ...]:
    """Random monotone map into ``X``, below ``ceiling[a]`` when given.

    A greedy pass can get stuck when ``X`` lacks upper bounds; after a few
    attempts the map falls back to a constant. With a monotone ceiling the
    ceiling itself is always a candidate, so that case never gets stuck.
    """
    for _ in range(8):
        alpha = _alpha_attempt(rng, X, order, ceiling)
        if alpha is not None:
            return alpha
    return (rng.randrange(len(X)),) * len(order)


def _alpha_attempt(rng, X, order, ceiling):
    n = len(order)
    pending = sorted(range(n), key=lambda a: (bin(order.down[a]).count("1"), a))
    alpha = [-1] * n
    for a in pending:
        if alpha[a] >= 0:
            continue
        cands = X.full
        for c in bits(order.down[a]):
            if alpha[c] >= 0:
                cands &= X.up[alpha[c]]
        if ceiling is not None:
            cands &= X.down[ceiling[a]]
        if not cands:
            return None
        choice = list(bits(cands))
        v = choice[rng.randrange(len(choice))]
        for c in bits(order.down[a] & order.up[a]):
            alpha[c] = v
    return tuple(alpha)


def random_morphism(rng: random.Random, tag: Tag | str, X: Preorder | None, nB: int, nE: int,
                    density: float = 0.4, back_density: float = 0.1,
                    filtration_density: float = 0.5) -> StructuredMorphism:
    tag = Tag(tag)
    BO = random_preorder(rng, nB, density, back_density, "b")
    fmap = [rng.randrange(nB) for _ in range(nE)]
    EO = _order_over(rng, fmap, BO, density, back_density, "e")
    base = X if tag.needs_base else None
    bf = ef = ba = ea = None
    if tag.filtered:
        bf = _filtration(rng, X, BO, [BO.full] * len(X), filtration_density, tag is Tag.ORDX)
        allowed = []
        for x in range(len(X)):
            m = 0
            for e, b in enumerate(fmap):
                if bf[x] >> b & 1:
                    m |= 1 << e
            allowed.append(m)
        # preimages of up-closed sets are up-closed, so the closure stays inside ``allowed``
        ef = _filtration(rng, X, EO, allowed, filtration_density, tag is Tag.ORDX)
    if tag is Tag.LAXX:
        ba = _alpha(rng, X, BO, None)
        ea = _alpha(rng, X, EO, [ba[b] for b in fmap])
    if tag.ordered:
        B = StructuredObject(tag, BO.elements, BO, base, bf, ba)
        E = StructuredObject(tag, EO.elements, EO, base, ef, ea)
    else:
        B = StructuredObject(tag, BO.elements, None, base, bf, ba)
        E = StructuredObject(tag, EO.elements, None, base, ef, ea)
    return StructuredMorphism(E, B, tuple(fmap))


def generate(config: GeneratorConfig) -> InstanceDocument:
    """One document with base ``X`` (when the tag needs one), objects ``E``, ``B`` and ``p: E -> B``."""
    rng = random.Random(config.seed)
    X = random_preorder(rng, config.x_size, config.density, config.back_density, "x") \
        if config.tag.needs_base else None
    p = random_morphism(rng, config.tag, X, config.b_size, config.e_size, config.density,
                        config.back_density, config.filtration_density)
    return InstanceDocument(X, {"E": p.source, "B": p.target}, {"p": p})


def random_over(rng: random.Random, B: StructuredObject, n: int, density: float = 0.4,
                back_density: float = 0.1, filtration_density: float = 0.5,
                prefix: str = "a") -> StructuredMorphism:
    """Random object of size ``n`` with a morphism into ``B`` (same tag)."""
    tag = B.tag
    if n and not len(B):
        raise InputError("nothing maps into an empty object")
    fmap = [rng.randrange(len(B)) for _ in range(n)]
    X = B.base
    order = fl = al = None
    if tag.ordered:
        order = _order_over(rng, fmap, B.order, density, back_density, prefix)
    if tag.filtered:
        allowed = [sum(1 << i for i, b in enumerate(fmap) if B.filtration[x] >> b & 1) for x in range(len(X))]
        fl = _filtration(rng, X, order, allowed, filtration_density, tag is Tag.ORDX)
    if tag is Tag.LAXX:
        al = _alpha(rng, X, order, [B.alpha[b] for b in fmap])
    A = StructuredObject(tag, names(n, prefix), order, X, fl, al)
    return StructuredMorphism(A, B, tuple(fmap))

"""Finite preorders stored as rows of bitmasks.

Every preorder keeps its carrier as an ordered tuple of string identifiers.
Position in that tuple is the "carrier order" used for every deterministic
tie-break in the package. Internally element ``i`` is bit ``1 << i``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product
from typing import Iterable, Iterator, NamedTuple, Sequence

from .errors import InputError, PreconditionError


class Diagnostic(NamedTuple):
    axiom: str
    witness: tuple
    at: str | None = None

    def __str__(self) -> str:
        where = f" at {self.at}" if self.at is not None else ""
        return f"{self.axiom}{where}: {self.witness}"


@dataclass(frozen=True)
class CheckResult:
    """Outcome of a decision procedure; a failure always carries a witness."""

    passed: bool
    witness: tuple | None = None
    name: str = ""

    def __post_init__(self) -> None:
        if not self.passed and self.witness is None:
            raise ValueError("a failed check needs a witness")

    def __bool__(self) -> bool:
        return self.passed

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed,
                "witness": None if self.witness is None else list(self.witness)}


def bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def _warshall(up: list[int]) -> list[int]:
    n = len(up)
    for k in range(n):
        bk, uk = 1 << k, up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= uk
    return up


@dataclass(frozen=True)
class Preorder:
    """A finite carrier with a relation, ``up[i]`` holding every ``j`` with ``i <= j``.

    Instances built through :func:`close` are always valid preorders; the raw
    constructor accepts any relation so that :func:`validate_preorder` can
    report what is wrong with it.
    """

    elements: tuple[str, ...]
    up: tuple[int, ...]
    index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        if len(self.up) != len(self.elements):
            raise InputError("relation rows do not match carrier size")
        idx = {e: i for i, e in enumerate(self.elements)}
        if len(idx) != len(self.elements):
            raise InputError(f"duplicate element identifiers in {self.elements}")
        object.__setattr__(self, "index", idx)

    @classmethod
    def from_pairs(cls, elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> Preorder:
        elements = tuple(elements)
        idx = {e: i for i, e in enumerate(elements)}
        up = [0] * len(elements)
        for a, b in pairs:
            if a not in idx or b not in idx:
                raise InputError(f"pair ({a}, {b}) mentions an element outside {list(elements)}")
            up[idx[a]] |= 1 << idx[b]
        return cls(elements, tuple(up))

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def full(self) -> int:
        return (1 << len(self.elements)) - 1

    @cached_property
    def succ(self) -> tuple[tuple[int, ...], ...]:
        """``up`` rows unpacked into index tuples."""
        return tuple(tuple(bits(row)) for row in self.up)

    @cached_property
    def down(self) -> tuple[int, ...]:
        down = [0] * len(self.elements)
        for i, row in enumerate(self.up):
            for j in bits(row):
                down[j] |= 1 << i
        return tuple(down)

    def pos(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise InputError(f"unknown element {x!r}") from None

    def le(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def leq(self, x: str, y: str) -> bool:
        return self.le(self.pos(x), self.pos(y))

    def pairs(self) -> list[tuple[str, str]]:
        el = self.elements
        return [(el[i], el[j]) for i in range(len(el)) for j in bits(self.up[i])]

    def names(self, mask: int) -> frozenset[str]:
        return frozenset(self.elements[i] for i in bits(mask))

    def mask(self, names: Iterable[str]) -> int:
        m = 0
        for x in names:
            m |= 1 << self.pos(x)
        return m

    def up_of(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.up[i]
        return out

    def down_of(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= self.down[i]
        return out

    def first(self, mask: int) -> str:
        return self.elements[(mask & -mask).bit_length() - 1]


def close(elements: Sequence[str], pairs: Iterable[tuple[str, str]]) -> Preorder:
    """Smallest reflexive transitive relation on ``elements`` containing ``pairs``."""
    raw = Preorder.from_pairs(elements, pairs)
    up = [row | (1 << i) for i, row in enumerate(raw.up)]
    return Preorder(raw.elements, tuple(_warshall(up)))


def close_masks(up: Sequence[int]) -> tuple[int, ...]:
    return tuple(_warshall([row | (1 << i) for i, row in enumerate(up)]))


def discrete(elements: Sequence[str]) -> Preorder:
    return Preorder(tuple(elements), tuple(1 << i for i in range(len(elements))))


def chain(elements: Sequence[str]) -> Preorder:
    """Chain listed bottom first."""
    n = len(elements)
    return Preorder(tuple(elements), tuple(((1 << n) - 1) ^ ((1 << i) - 1) for i in range(n)))


def validate_preorder(P: Preorder) -> list[Diagnostic]:
    out: list[Diagnostic] = []
    el, n = P.elements, len(P.elements)
    for i in range(n):
        if not P.le(i, i):
            out.append(Diagnostic("reflexivity", (el[i],)))
    for i in range(n):
        for j in bits(P.up[i]):
            for k in bits(P.up[j] & ~P.up[i]):
                out.append(Diagnostic("transitivity", (el[i], el[j], el[k])))
    return out


def is_valid(P: Preorder) -> bool:
    return not validate_preorder(P)


@dataclass(frozen=True)
class MonotoneMap:
    source: Preorder
    target: Preorder
    map: tuple[int, ...]

    @classmethod
    def from_dict(cls, source: Preorder, target: Preorder, mapping: dict[str, str]) -> MonotoneMap:
        missing = [x for x in source.elements if x not in mapping]
        if missing:
            raise InputError(f"map is not total, missing {missing}")
        return cls(source, target, tuple(target.pos(mapping[x]) for x in source.elements))

    def __call__(self, x: str) -> str:
        return self.target.elements[self.map[self.source.pos(x)]]

    def fiber(self, j: int) -> int:
        m = 0
        for i, v in enumerate(self.map):
            if v == j:
                m |= 1 << i
        return m

    @cached_property
    def fibers(self) -> tuple[int, ...]:
        fib = [0] * len(self.target)
        for i, v in enumerate(self.map):
            fib[v] |= 1 << i
        return tuple(fib)

    def image(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.map[i]
        return out


def is_monotone(f: MonotoneMap) -> CheckResult:
    S, T, m = f.source, f.target, f.map
    for i in range(len(S)):
        for j in bits(S.up[i]):
            if not T.le(m[i], m[j]):
                return CheckResult(False, (S.elements[i], S.elements[j]), "monotone")
    return CheckResult(True, name="monotone")


def equiv(P: Preorder, x: str, y: str) -> bool:
    return P.leq(x, y) and P.leq(y, x)


def strict(P: Preorder, x: str, y: str) -> bool:
    return P.leq(x, y) and not P.leq(y, x)


def downset(P: Preorder, x: str) -> frozenset[str]:
    return P.names(P.down[P.pos(x)])


def upset(P: Preorder, x: str) -> frozenset[str]:
    return P.names(P.up[P.pos(x)])


def upclosed_violation(P: Preorder, mask: int) -> tuple[int, int] | None:
    for i in bits(mask):
        outside = P.up[i] & ~mask
        if outside:
            return i, (outside & -outside).bit_length() - 1
    return None


def is_upclosed(P: Preorder, S: Iterable[str]) -> CheckResult:
    bad = upclosed_violation(P, P.mask(S))
    if bad is None:
        return CheckResult(True, name="upclosed")
    return CheckResult(False, (P.elements[bad[0]], P.elements[bad[1]]), "upclosed")


def up_closure(P: Preorder, S: Iterable[str]) -> frozenset[str]:
    return P.names(P.up_of(P.mask(S)))


# -- bounds, joins and meets ------------------------------------------------

def _least(P: Preorder, cands: int) -> int | None:
    for i in bits(cands):
        if cands & ~P.up[i] == 0:
            return i
    return None


def _greatest(P: Preorder, cands: int) -> int | None:
    for i in bits(cands):
        if cands & ~P.down[i] == 0:
            return i
    return None


def join_idx(P: Preorder, mask: int, within: int | None = None) -> int | None:
    ub = P.full if within is None else within
    for i in bits(mask):
        ub &= P.up[i]
    return _least(P, ub)


def meet_idx(P: Preorder, mask: int, within: int | None = None) -> int | None:
    lb = P.full if within is None else within
    for i in bits(mask):
        lb &= P.down[i]
    return _greatest(P, lb)


def greatest_idx(P: Preorder, mask: int) -> int | None:
    """Largest element of the subset itself (not merely an upper bound)."""
    return _greatest(P, mask)


def _below(P: Preorder, S: Iterable[str], bound: str) -> tuple[int, int]:
    b = P.pos(bound)
    m = P.mask(S)
    if m & ~P.down[b]:
        raise PreconditionError(f"{sorted(P.names(m & ~P.down[b]))} not below {bound}")
    return m, P.down[b]


def join_below(P: Preorder, S: Iterable[str], bound: str) -> str | None:
    """Join of ``S`` computed inside ``downset(bound)``; ``None`` when absent."""
    m, within = _below(P, S, bound)
    j = join_idx(P, m, within)
    return None if j is None else P.elements[j]


def meet_below(P: Preorder, S: Iterable[str], bound: str) -> str | None:
    m, within = _below(P, S, bound)
    j = meet_idx(P, m, within)
    return None if j is None else P.elements[j]


def join(P: Preorder, S: Iterable[str]) -> str | None:
    j = join_idx(P, P.mask(S))
    return None if j is None else P.elements[j]


def meet(P: Preorder, S: Iterable[str]) -> str | None:
    j = meet_idx(P, P.mask(S))
    return None if j is None else P.elements[j]


@dataclass(frozen=True)
class LatticeReport:
    locally_complete: bool
    downsets_are_chains: bool
    bottom: str | None
    failures: tuple[tuple[str, tuple[str, str]], ...] = ()
    chain_failures: tuple[tuple[str, tuple[str, str]], ...] = ()

    def to_json(self) -> dict:
        return {
            "locally_complete": self.locally_complete,
            "downsets_are_chains": self.downsets_are_chains,
            "bottom": self.bottom,
            "failures": [[x, list(w)] for x, w in self.failures],
            "chain_failures": [[x, list(w)] for x, w in self.chain_failures],
        }


def lattice_report(X: Preorder) -> LatticeReport:
    """Finite local-completeness and chain-downset tests on a base preorder.

    A finite preorder with a top, a bottom and all binary meets is a complete
    lattice up to equivalence, so only pairs are inspected. Downsets always
    contain their top; the bottom follows from iterating binary meets.
    """
    el = X.elements
    meet_fail: list[tuple[str, tuple[str, str]]] = []
    chain_fail: list[tuple[str, tuple[str, str]]] = []
    for x in range(len(el)):
        d = X.down[x]
        members = list(bits(d))
        missing_meet = missing_max = None
        for a_pos, a in enumerate(members):
            for b in members[a_pos + 1:]:
                if missing_meet is None and meet_idx(X, (1 << a) | (1 << b), d) is None:
                    missing_meet = (el[a], el[b])
                if missing_max is None and not (X.le(a, b) or X.le(b, a)):
                    missing_max = (el[a], el[b])
        if missing_meet is not None:
            meet_fail.append((el[x], missing_meet))
        if missing_max is not None:
            chain_fail.append((el[x], missing_max))
    bottom = _least(X, X.full) if el else None
    return LatticeReport(
        locally_complete=not meet_fail,
        downsets_are_chains=not chain_fail,
        bottom=None if bottom is None else el[bottom],
        failures=tuple(meet_fail),
        chain_failures=tuple(chain_fail),
    )


# -- chain lifting ----------------------------------------------------------

def _lift(p: MonotoneMap, idx_chain: Sequence[int]) -> list[int] | None:
    S = p.source
    fib = p.fibers

    def go(k: int, prev: int | None) -> list[int] | None:
        if k == len(idx_chain):
            return []
        cands = fib[idx_chain[k]]
        if prev is not None:
            cands &= S.up[prev]
        for e in bits(cands):
            rest = go(k + 1, e)
            if rest is not None:
                return [e] + rest
        return None

    return go(0, None)


def lift_chain(p: MonotoneMap, chain: Sequence[str]) -> list[str] | None:
    """Lift an ascending chain ``b_{n-1} <= ... <= b_0`` of the target through ``p``."""
    T = p.target
    idx = [T.pos(b) for b in chain]
    for a, b in zip(idx, idx[1:]):
        if not T.le(a, b):
            raise PreconditionError(f"chain {list(chain)} is not ascending")
    lifted = _lift(p, idx)
    return None if lifted is None else [p.source.elements[i] for i in lifted]


def ascending_chains(P: Preorder, n: int) -> Iterator[tuple[int, ...]]:
    def go(prefix: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
        if len(prefix) == n:
            yield prefix
            return
        cands = P.full if not prefix else P.up[prefix[-1]]
        for j in bits(cands):
            yield from go(prefix + (j,))

    return go(())


def lifts_all_chains(p: MonotoneMap, n: int) -> CheckResult:
    """First ascending ``n``-chain (carrier order) with no lift, if any."""
    S, fib = p.source, p.fibers
    name = f"{n}-chain lifting"
    for c in ascending_chains(p.target, n):
        reach = fib[c[0]]
        for b in c[1:]:
            if not reach:
                break
            reach = S.up_of(reach) & fib[b]
        if not reach:
            return CheckResult(False, tuple(p.target.elements[i] for i in c), name)
    return CheckResult(True, name=name)


def all_maps(n: int, m: int) -> Iterator[tuple[int, ...]]:
    return product(range(m), repeat=n)

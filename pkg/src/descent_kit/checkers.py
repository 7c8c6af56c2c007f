"""Decision procedures for the descent conditions and the per-tag dispatcher.

Quantifiers run in a fixed order (base element, then ``b1``, then ``b0``,
each in carrier order) so the reported witness is reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .categories import StructuredMorphism, Tag, f1_morphism
from .errors import PreconditionError
from .order import CheckResult, LatticeReport, MonotoneMap, Preorder, bits, discrete, lattice_report, lifts_all_chains


class Status(str, Enum):
    EFFECTIVE = "Effective"
    NOT_EFFECTIVE = "NotEffective"
    EFFECTIVE_SUFFICIENT = "EffectiveSufficient"
    UNKNOWN = "Unknown"


# rule tokens recorded on every verdict
RULE_ORD = "ord:3-chain-lifting"
RULE_C2 = "c2:fiberwise-surjective"
RULE_PROD = "prod:chain+fiberwise-surjective"
RULE_ORDX = "ordx:chain+filtered-pair-lifting"
RULE_LAX_CHAINS = "laxx:chain-downsets"
RULE_LAX_BOTTOM = "laxx:bottom+fiberwise-surjective"
RULE_LAX_SUFFICIENT = "laxx:locally-complete-sufficient"
RULE_LAX_OPEN = "laxx:open"


@dataclass(frozen=True)
class Verdict:
    status: Status
    theorem: str
    checks: tuple[CheckResult, ...] = ()
    lattice: LatticeReport | None = field(default=None, compare=False)

    @property
    def witness(self) -> tuple | None:
        """Witness of the first failed check, if any."""
        return next((c.witness for c in self.checks if not c.passed), None)

    def to_json(self) -> dict:
        out = {"status": self.status.value, "theorem": self.theorem,
               "checks": [c.to_json() for c in self.checks]}
        if self.lattice is not None:
            out["lattice"] = self.lattice.to_json()
        return out


def _underlying(p: StructuredMorphism) -> MonotoneMap:
    S, T = p.source.order, p.target.order
    if S is None:
        S, T = discrete(p.source.carrier), discrete(p.target.carrier)
    return MonotoneMap(S, T, p.map)


def _order(obj) -> Preorder:
    return obj.order if obj.order is not None else discrete(obj.carrier)


def _require(p: StructuredMorphism, *tags: Tag) -> None:
    if p.tag not in tags:
        names = ", ".join(t.value for t in tags)
        raise PreconditionError(f"expected a morphism tagged {names}, got {p.tag.value}")


def check_condition_a(p: StructuredMorphism) -> CheckResult:
    """Every ``b2 <= b1 <= b0`` in ``B`` lifts to ``e2 <= e1 <= e0``; witness is the chain."""
    r = lifts_all_chains(_underlying(p), 3)
    return CheckResult(r.passed, r.witness, "condition (a)")


def _first_unlifted(EO: Preorder, BO: Preorder, fib, e1s: int, e0s: int, starts: int, ends: int
                    ) -> tuple[int, int] | None:
    """First ``b1 <= b0`` (``b1`` in ``starts``, ``b0`` in ``ends``) with no lift ``e1 <= e0``.

    The lift needs ``e1`` in ``e1s`` and ``e0`` in ``e0s``. Pairs with
    ``b1 != b0`` are scanned before the diagonal.
    """
    reach = {b1: EO.up_of(fib[b1] & e1s) & e0s for b1 in bits(starts)}
    for b1, r in reach.items():
        for b0 in bits(BO.up[b1] & ends & ~(1 << b1)):
            if not r & fib[b0]:
                return b1, b0
    for b1, r in reach.items():
        if ends >> b1 & 1 and not r & fib[b1]:
            return b1, b1
    return None


def check_condition_b(p: StructuredMorphism) -> CheckResult:
    """Every ``b1 <= b0`` inside ``B_x`` lifts to ``e1 <= e0`` inside ``E_x``; witness ``(x, b1, b0)``."""
    _require(p, Tag.ORDX, Tag.PROD, Tag.C2)
    E, B = p.source, p.target
    EO, BO = _order(E), _order(B)
    fib = p.fibers
    X = B.base
    for x in range(len(X)):
        Ex, Bx = E.filtration[x], B.filtration[x]
        bad = _first_unlifted(EO, BO, fib, Ex, Ex, Bx, Bx)
        if bad is not None:
            return CheckResult(False, (X.elements[x], B.carrier[bad[0]], B.carrier[bad[1]]), "condition (b)")
    return CheckResult(True, name="condition (b)")


def check_condition_b_prime(p: StructuredMorphism) -> CheckResult:
    """Lax form of (b): ``x <= beta(b1)`` must lift to ``e1 <= e0`` with ``x <= eps(e1)``."""
    _require(p, Tag.LAXX)
    E, B = p.source, p.target
    X = B.base
    fib = p.fibers
    name = "condition (b')"
    for x in range(len(X)):
        Ex = 0
        for e, v in enumerate(E.alpha):
            if X.le(x, v):
                Ex |= 1 << e
        starts = 0
        for b, v in enumerate(B.alpha):
            if X.le(x, v):
                starts |= 1 << b
        bad = _first_unlifted(E.order, B.order, fib, Ex, E.full, starts, B.full)
        if bad is not None:
            return CheckResult(False, (X.elements[x], B.carrier[bad[0]], B.carrier[bad[1]]), name)
    return CheckResult(True, name=name)


def check_fiberwise_surjectivity(p: StructuredMorphism) -> CheckResult:
    """``p`` and every ``p_x`` surjective.

    Witness ``(x, b)`` names an element of ``B_x`` outside ``p(E_x)``; an
    element outside the image of ``p`` altogether is reported as ``(None, b)``.
    """
    _require(p, Tag.ORDX, Tag.PROD, Tag.C2)
    E, B = p.source, p.target
    name = "fiberwise surjectivity"
    missed = B.full & ~p.image(E.full)
    if missed:
        return CheckResult(False, (None, B.carrier[next(bits(missed))]), name)
    X = B.base
    for x in range(len(X)):
        missed = B.filtration[x] & ~p.image(E.filtration[x])
        if missed:
            return CheckResult(False, (X.elements[x], B.carrier[next(bits(missed))]), name)
    return CheckResult(True, name=name)


def check_sim_preimage(p: StructuredMorphism) -> CheckResult:
    """Every ``b`` has a preimage ``e`` with ``eps(e) ~ beta(b)``; witness ``(b,)``."""
    _require(p, Tag.LAXX)
    E, B = p.source, p.target
    X = B.base
    for b, fb in enumerate(p.fibers):
        beta = B.alpha[b]
        if not any(X.le(E.alpha[e], beta) and X.le(beta, E.alpha[e]) for e in bits(fb)):
            return CheckResult(False, (B.carrier[b],), "sim-preimage")
    return CheckResult(True, name="sim-preimage")


def _iff(rule: str, checks: list[CheckResult], lattice: LatticeReport | None = None) -> Verdict:
    ok = all(checks)
    return Verdict(Status.EFFECTIVE if ok else Status.NOT_EFFECTIVE, rule, tuple(checks), lattice)


def decide_effective_descent(p: StructuredMorphism) -> Verdict:
    """Apply the strongest characterization available for the tag of ``p``."""
    tag = p.tag
    if tag is Tag.ORD:
        return _iff(RULE_ORD, [check_condition_a(p)])
    if tag is Tag.C2:
        return _iff(RULE_C2, [check_fiberwise_surjectivity(p)])
    if tag is Tag.PROD:
        return _iff(RULE_PROD, [check_condition_a(p), check_fiberwise_surjectivity(p)])
    if tag is Tag.ORDX:
        return _iff(RULE_ORDX, [check_condition_a(p), check_condition_b(p)])

    report = lattice_report(p.target.base)
    a, bp = check_condition_a(p), check_condition_b_prime(p)
    if report.downsets_are_chains:
        return _iff(RULE_LAX_CHAINS, [a, bp], report)
    checks = [a, bp]
    if report.locally_complete and report.bottom is not None:
        fs = check_fiberwise_surjectivity(f1_morphism(p))
        if fs:
            return _iff(RULE_LAX_BOTTOM, [fs, a, bp], report)
        checks.insert(0, fs)
    if report.locally_complete and a and bp:
        return Verdict(Status.EFFECTIVE_SUFFICIENT, RULE_LAX_SUFFICIENT, tuple(checks), report)
    return Verdict(Status.UNKNOWN, RULE_LAX_OPEN, tuple(checks), report)

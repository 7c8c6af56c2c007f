"""Corpus runs: checker verdicts against the bounded oracle, tallied into an agreement matrix."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator

from . import census
from .categories import StructuredMorphism, Tag, f1_morphism
from .checkers import Status, Verdict, check_condition_b, decide_effective_descent
from .documents import InstanceDocument, load, single_morphism
from .errors import InputError
from .fixtures import X1, X2, XV
from .generator import GeneratorConfig, generate
from .oracle import DEFAULT_BUDGET, BoundedVerdict, bounded_oracle, revalidate
from .order import chain
from .witnesses import build_two_element_witness

BASES = {"X1": X1, "X2": X2, "X3": chain(["x0", "x1", "x2"]), "XV": XV}

REFUTED = "refuted"
WITNESS = "two-element witness"
CLEAR = "no refutation"
BUDGET = "budget exceeded"
COLUMNS = (REFUTED, WITNESS, CLEAR, BUDGET)


@dataclass(frozen=True)
class Outcome:
    ident: str
    morphism: StructuredMorphism
    verdict: Verdict
    oracle: BoundedVerdict
    column: str
    revalidated: bool | None
    disagreement: str | None


@dataclass
class CorpusReport:
    corpus: str
    max_size: int
    via_f1: bool
    matrix: dict[str, dict[str, int]] = field(default_factory=dict)
    disagreements: list[Outcome] = field(default_factory=list)
    instances: int = 0

    @property
    def budget_exceeded(self) -> int:
        return sum(row.get(BUDGET, 0) for row in self.matrix.values())

    def to_json(self) -> dict:
        return {
            "corpus": self.corpus,
            "max_size": self.max_size,
            "via_f1": self.via_f1,
            "instances": self.instances,
            "matrix": {s.value: {c: self.matrix.get(s.value, {}).get(c, 0) for c in COLUMNS} for s in Status},
            "disagreements": [{"instance": o.ident, "reason": o.disagreement} for o in self.disagreements],
        }


def parse_corpus(spec: str) -> Iterator[tuple[str, StructuredMorphism]]:
    """Instances named by ``spec``.

    * a directory: every morphism of every ``*.json`` document, by file name;
    * ``micro:TAG:BASE[:SIZE]``: every morphism with ``|E|, |B| <= SIZE``
      (default 3) up to isomorphism, ``BASE`` one of X1, X2, X3, XV;
    * ``random:TAG:SEED:COUNT[:X,B,E]``: ``COUNT`` generated documents with
      seeds ``SEED, SEED+1, ...`` (sizes default to 2,3,3).
    """
    parts = spec.split(":")
    if parts[0] == "micro" and len(parts) in (3, 4):
        tag = _tag(parts[1])
        if parts[2] not in BASES:
            raise InputError(f"unknown base {parts[2]!r}; choose from {sorted(BASES)}")
        X = BASES[parts[2]] if tag.needs_base else None
        size = _int(parts[3], "size") if len(parts) == 4 else 3
        for i, p in enumerate(census.morphisms(tag, range(size + 1), range(size + 1), X)):
            yield f"{spec}#{i}", p
        return
    if parts[0] == "random" and len(parts) in (4, 5):
        tag = _tag(parts[1])
        seed, count = _int(parts[2], "seed"), _int(parts[3], "count")
        sizes = (2, 3, 3)
        if len(parts) == 5:
            sizes = tuple(_int(s, "size") for s in parts[4].split(","))
            if len(sizes) != 3:
                raise InputError("random corpus sizes are X,B,E")
        for k in range(count):
            doc = generate(GeneratorConfig(seed + k, tag, *sizes))
            yield f"{spec}#{k}", doc.morphism("p")
        return
    path = Path(spec)
    if not path.is_dir():
        raise InputError(f"corpus {spec!r} is neither a directory nor a micro:/random: spec")
    for file in sorted(path.glob("*.json")):
        doc = load(file)
        for name, p in doc.morphisms.items():
            yield f"{file.name}:{name}", p


def _tag(raw: str) -> Tag:
    try:
        return Tag(raw)
    except ValueError:
        raise InputError(f"unknown tag {raw!r}") from None


def _int(raw: str, what: str) -> int:
    try:
        return int(raw)
    except ValueError:
        raise InputError(f"{what} must be an integer, got {raw!r}") from None


def _witness_confirms(p: StructuredMorphism) -> bool:
    if p.tag is not Tag.ORDX:
        return False
    b = check_condition_b(p)
    return not b.passed and build_two_element_witness(p, *b.witness).verified


def compare(ident: str, p: StructuredMorphism, max_size: int, budget: int = DEFAULT_BUDGET,
            via_f1: bool = False) -> Outcome:
    """Checker verdict and oracle outcome for one instance, with the disagreement if any."""
    verdict = decide_effective_descent(p)
    oracle = bounded_oracle(p, max_size, budget, via_f1=via_f1)
    revalidated = None
    if oracle.refuted:
        revalidated = revalidate(f1_morphism(p) if via_f1 else p, oracle.refutation)
        column = REFUTED
    elif not oracle.complete:
        column = BUDGET
    else:
        column = CLEAR
    status = verdict.status
    reason = None
    if oracle.refuted and not revalidated:
        reason = "refutation did not re-validate"
    elif status in (Status.EFFECTIVE, Status.EFFECTIVE_SUFFICIENT) and oracle.refuted:
        reason = f"{status.value} but the oracle refutes"
    elif status is Status.NOT_EFFECTIVE and not oracle.refuted:
        if _witness_confirms(p):
            column = WITNESS
        else:
            reason = f"NotEffective but no refutation up to size {max_size}"
    return Outcome(ident, p, verdict, oracle, column, revalidated, reason)


def run_corpus(spec: str, max_size: int, budget: int = DEFAULT_BUDGET, via_f1: bool = False,
               instances: Iterator[tuple[str, StructuredMorphism]] | None = None) -> CorpusReport:
    report = CorpusReport(spec, max_size, via_f1)
    for ident, p in (instances if instances is not None else parse_corpus(spec)):
        o = compare(ident, p, max_size, budget, via_f1)
        row = report.matrix.setdefault(o.verdict.status.value, {})
        row[o.column] = row.get(o.column, 0) + 1
        report.instances += 1
        if o.disagreement is not None:
            report.disagreements.append(o)
    return report


def archive_document(o: Outcome) -> InstanceDocument:
    doc = single_morphism(o.morphism)
    doc.extra = {"instance": o.ident, "reason": o.disagreement, "verdict": o.verdict.to_json()}
    return doc


def format_matrix(report: CorpusReport) -> str:
    width = max(len(c) for c in COLUMNS)
    head = " " * 20 + "".join(c.rjust(width + 2) for c in COLUMNS)
    lines = [head]
    for s in Status:
        row = report.matrix.get(s.value, {})
        lines.append(s.value.ljust(20) + "".join(str(row.get(c, 0)).rjust(width + 2) for c in COLUMNS))
    return "\n".join(lines)

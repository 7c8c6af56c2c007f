"""``descent-kit``: validate, check, witness, oracle, gen, report, fixtures.

Exit codes: 0 a result was computed (whatever the verdict), 1 input or
precondition error, 2 budget exceeded, 3 corpus disagreements found.
"""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import fixtures
from .categories import Tag, f1_morphism, relax
from .checkers import check_condition_b, decide_effective_descent
from .documents import InstanceDocument, dumps, format_json, load, object_to_json, save, single_morphism
from .errors import DescentError
from .generator import GeneratorConfig, generate
from .oracle import DEFAULT_BUDGET, Algebra, BoundedVerdict, OverObject, action_table, bounded_oracle, revalidate
from .report import archive_document, format_matrix, run_corpus
from .witnesses import build_two_element_witness

EXIT_OK, EXIT_INPUT, EXIT_BUDGET, EXIT_DISAGREE = 0, 1, 2, 3


def _fail(exc: Exception) -> None:
    click.echo(f"error: {exc}", err=True)
    sys.exit(EXIT_INPUT)


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


def _json(data) -> str:
    return format_json(data, 0) + "\n"


@click.group()
@click.version_option(package_name="artifact")
def main() -> None:
    """Decide, certify and cross-check effective descent morphisms of finite preorders."""


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--strict", is_flag=True, help="Reject relations that are not already reflexive and transitive.")
def validate(file: str, strict: bool) -> None:
    """Load FILE and validate every object and morphism for its tag."""
    try:
        doc = load(file, strict)
    except DescentError as exc:
        _fail(exc)
    click.echo(f"ok: {len(doc.objects)} objects, {len(doc.morphisms)} morphisms")


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--morphism", "name", required=True, help="Name of the morphism in the document.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output.")
@click.option("--strict", is_flag=True)
def check(file: str, name: str, as_json: bool, strict: bool) -> None:
    """Decide effective descent with the characterization for the morphism's tag."""
    try:
        p = load(file, strict).morphism(name)
        verdict = decide_effective_descent(p)
    except DescentError as exc:
        _fail(exc)
    if as_json:
        click.echo(_json({"morphism": name, "tag": p.tag.value, **verdict.to_json()}), nl=False)
        return
    click.echo(f"{name}: {verdict.status.value} by {verdict.theorem}")
    for c in verdict.checks:
        mark = "pass" if c.passed else f"fail, witness {_tuple(c.witness)}"
        click.echo(f"  {c.name}: {mark}")


def _tuple(w) -> str:
    return "(" + ", ".join("-" if v is None else str(v) for v in w) + ")"


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--morphism", "name", required=True)
@click.option("--at", "at", help="x,b1,b0 where condition (b) fails; defaults to the first failure.")
@click.option("--output", "-o", type=click.Path(dir_okay=False), help="Write the document here.")
def witness(file: str, name: str, at: str | None, output: str | None) -> None:
    """Build the two-element witness for a failure of condition (b) (OrdX only)."""
    try:
        doc = load(file)
        p = doc.morphism(name)
        if at is None:
            if p.tag is not Tag.ORDX:
                raise DescentError("witnesses are built for OrdX morphisms")
            b = check_condition_b(p)
            if b.passed:
                raise DescentError("condition (b) holds; there is nothing to witness")
            point = b.witness
        else:
            point = tuple(s.strip() for s in at.split(","))
            if len(point) != 3:
                raise DescentError("--at takes x,b1,b0")
        rep = build_two_element_witness(p, *point)
    except DescentError as exc:
        _fail(exc)
    out = InstanceDocument(
        p.target.base,
        {"E": p.source, "B": p.target, "B_prod": relax(p.target), "A": rep.witness_object,
         "E_x_B_A": rep.pullback_object},
        {name: p, "f": rep.witness_morphism},
        {"witness": {"at": list(rep.at), "verified": rep.verified,
                     "claims": [c.to_json() for c in rep.claims]}},
    )
    _emit(dumps(out), output)


def _over_json(o: OverObject | Algebra, p) -> dict:
    if isinstance(o, Algebra):
        return {"object": object_to_json(o.object), "anchor": o.over.anchor.as_dict(),
                "action": action_table(p, o)}
    return {"object": object_to_json(o.object), "anchor": o.anchor.as_dict()}


def oracle_json(p, v: BoundedVerdict) -> dict:
    out = {"size_bound": v.size_bound, "ff_ok_up_to": v.ff_ok_up_to, "es_ok_up_to": v.es_ok_up_to,
           "complete": v.complete, "explored": v.explored, "note": v.note, "refutation": None}
    r = v.refutation
    if r is not None:
        out["refutation"] = {"kind": r.kind.value, "detail": r.detail, "revalidated": revalidate(p, r),
                             "first": _over_json(r.first, p),
                             "second": None if r.second is None else _over_json(r.second, p)}
    return out


@main.command()
@click.argument("file", type=click.Path(dir_okay=False))
@click.option("--morphism", "name", required=True)
@click.option("--max-size", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True,
              help="Cap on enumerated candidates.")
@click.option("--via-f1", is_flag=True, help="Ask a LaxX question in OrdX through F1.")
@click.option("--probe", type=click.Choice(["counit", "pairs"]), default="counit", show_default=True)
def oracle(file: str, name: str, max_size: int, budget: int, via_f1: bool, probe: str) -> None:
    """Bounded search for a refutation of effective descent."""
    try:
        p = load(file).morphism(name)
        v = bounded_oracle(p, max_size, budget, probe=probe, via_f1=via_f1)
        q = f1_morphism(p) if via_f1 else p
        data = oracle_json(q, v)
    except DescentError as exc:
        _fail(exc)
    click.echo(_json(data), nl=False)
    if not v.complete:
        sys.exit(EXIT_BUDGET)


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--tag", type=click.Choice([t.value for t in Tag]), default="OrdX", show_default=True)
@click.option("--sizes", default="2,3,3", show_default=True, help="|X|,|B|,|E|")
@click.option("--density", type=float, default=0.4, show_default=True)
@click.option("--back-density", type=float, default=0.1, show_default=True)
@click.option("--filtration-density", type=float, default=0.5, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False))
def gen(seed: int, tag: str, sizes: str, density: float, back_density: float,
        filtration_density: float, output: str | None) -> None:
    """Generate a seeded random instance document."""
    try:
        parts = [int(s) for s in sizes.split(",")]
        if len(parts) != 3:
            raise DescentError("--sizes takes |X|,|B|,|E|")
        cfg = GeneratorConfig(seed, Tag(tag), *parts, density=density, back_density=back_density,
                              filtration_density=filtration_density)
        doc = generate(cfg)
    except (DescentError, ValueError) as exc:
        _fail(exc)
    _emit(dumps(doc), output)


@main.command()
@click.option("--corpus", required=True,
              help="Directory of documents, micro:TAG:BASE[:SIZE] or random:TAG:SEED:COUNT[:X,B,E].")
@click.option("--max-size", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--budget", type=click.IntRange(min=1), default=DEFAULT_BUDGET, show_default=True)
@click.option("--via-f1", is_flag=True)
@click.option("--archive", type=click.Path(file_okay=False), help="Write each disagreement here.")
@click.option("--json", "as_json", is_flag=True)
def report(corpus: str, max_size: int, budget: int, via_f1: bool, archive: str | None, as_json: bool) -> None:
    """Agreement matrix of checker verdicts against the bounded oracle over a corpus."""
    try:
        rep = run_corpus(corpus, max_size, budget, via_f1)
    except DescentError as exc:
        _fail(exc)
    if archive:
        Path(archive).mkdir(parents=True, exist_ok=True)
        for k, o in enumerate(rep.disagreements):
            save(archive_document(o), Path(archive) / f"disagreement-{k:04d}.json")
    if as_json:
        click.echo(_json(rep.to_json()), nl=False)
    else:
        click.echo(f"corpus {corpus}: {rep.instances} instances, oracle bound {max_size}")
        click.echo(format_matrix(rep))
        click.echo(f"disagreements: {len(rep.disagreements)}")
        for o in rep.disagreements:
            click.echo(f"  {o.ident}: {o.disagreement}")
    if rep.disagreements:
        sys.exit(EXIT_DISAGREE)
    if rep.budget_exceeded:
        sys.exit(EXIT_BUDGET)


FIXTURES = {
    "fix-f": fixtures.fix_f,
    "fix-g": fixtures.fix_g,
    "fix-h": fixtures.fix_h,
    "fix-l": fixtures.fix_l,
    "fix-l-sim": lambda: fixtures.fix_l("x1"),
}


@main.command(name="fixtures")
@click.argument("directory", type=click.Path(file_okay=False))
def write_fixtures(directory: str) -> None:
    """Write the named example instances into DIRECTORY."""
    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    for name, make in FIXTURES.items():
        save(single_morphism(make()), out / f"{name}.json")
        click.echo(str(out / f"{name}.json"))



if __name__ == "__main__":
    main()

"""JSON instance documents: a shared base preorder, named objects, named morphisms."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .categories import (
    StructuredMorphism,
    StructuredObject,
    Tag,
    make_morphism,
    make_object,
    validate_morphism,
    validate_object,
)
from .errors import InputError
from .order import Preorder, bits, close, validate_preorder


@dataclass
class InstanceDocument:
    base: Preorder | None = None
    objects: dict[str, StructuredObject] = field(default_factory=dict)
    morphisms: dict[str, StructuredMorphism] = field(default_factory=dict)
    extra: dict[str, Any] = field(default_factory=dict)

    def morphism(self, name: str) -> StructuredMorphism:
        try:
            return self.morphisms[name]
        except KeyError:
            raise InputError(f"no morphism named {name!r}; have {sorted(self.morphisms)}") from None


def _pairs(raw: Any, where: str) -> list[tuple[str, str]]:
    if not isinstance(raw, list) or not all(isinstance(p, list) and len(p) == 2 for p in raw):
        raise InputError(f"{where}: leq must be an array of 2-element arrays")
    return [(str(a), str(b)) for a, b in raw]


def _preorder(elements: list[str], leq: list[tuple[str, str]], strict: bool, where: str) -> Preorder:
    if strict:
        P = Preorder.from_pairs(elements, leq)
        bad = validate_preorder(P)
        if bad:
            raise InputError(f"{where}: {bad[0]}")
        return P
    try:
        return close(elements, leq)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None


def _elements(raw: dict, where: str) -> list[str]:
    el = raw.get("elements")
    if not isinstance(el, list):
        raise InputError(f"{where}: missing elements array")
    el = [str(e) for e in el]
    if len(set(el)) != len(el):
        raise InputError(f"{where}: duplicate element identifiers")
    return el


def object_from_json(raw: dict, base: Preorder | None, strict: bool = False, where: str = "object"
                     ) -> StructuredObject:
    if not isinstance(raw, dict):
        raise InputError(f"{where}: expected a JSON object")
    try:
        tag = Tag(raw.get("tag"))
    except ValueError:
        raise InputError(f"{where}: unknown tag {raw.get('tag')!r}") from None
    el = _elements(raw, where)
    leq = _pairs(raw.get("leq", []), where)
    if tag.needs_base and base is None:
        raise InputError(f"{where}: tag {tag.value} needs a document base")
    try:
        obj = make_object(tag, el, base=base if tag.needs_base else None,
                          filtration=raw.get("filtration") if tag.filtered else None,
                          alpha=raw.get("alpha") if tag is Tag.LAXX else None)
    except InputError as exc:
        raise InputError(f"{where}: {exc}") from None
    if tag.ordered:
        order = _preorder(el, leq, strict, where)
        obj = StructuredObject(tag, obj.carrier, order, obj.base, obj.filtration, obj.alpha)
    elif leq:
        raise InputError(f"{where}: C2 objects carry no order")
    bad = validate_object(obj)
    if bad:
        raise InputError(f"{where}: {bad[0]}")
    return obj


def object_to_json(obj: StructuredObject) -> dict:
    out: dict[str, Any] = {"tag": obj.tag.value, "elements": list(obj.carrier)}
    if obj.order is not None:
        out["leq"] = [list(p) for p in obj.order.pairs()]
    if obj.filtration is not None:
        out["filtration"] = {x: [obj.carrier[i] for i in bits(m)]
                             for x, m in zip(obj.base.elements, obj.filtration)}
    if obj.alpha is not None:
        out["alpha"] = {a: obj.base.elements[v] for a, v in zip(obj.carrier, obj.alpha)}
    return out


def base_to_json(X: Preorder) -> dict:
    return {"elements": list(X.elements), "leq": [list(p) for p in X.pairs()]}


def from_json(data: Any, strict: bool = False) -> InstanceDocument:
    if not isinstance(data, dict):
        raise InputError("document: expected a JSON object")
    base = None
    if data.get("base") is not None:
        raw = data["base"]
        if not isinstance(raw, dict):
            raise InputError("base: expected a JSON object")
        base = _preorder(_elements(raw, "base"), _pairs(raw.get("leq", []), "base"), strict, "base")
    doc = InstanceDocument(base)
    objects = data.get("objects", {})
    if not isinstance(objects, dict):
        raise InputError("objects: expected a JSON object")
    for name, raw in objects.items():
        doc.objects[name] = object_from_json(raw, base, strict, f"objects.{name}")
    morphisms = data.get("morphisms", {})
    if not isinstance(morphisms, dict):
        raise InputError("morphisms: expected a JSON object")
    for name, raw in morphisms.items():
        where = f"morphisms.{name}"
        if not isinstance(raw, dict):
            raise InputError(f"{where}: expected a JSON object")
        ends = []
        for key in ("from", "to"):
            ref = raw.get(key)
            if ref not in doc.objects:
                raise InputError(f"{where}: {key} refers to unknown object {ref!r}")
            ends.append(doc.objects[ref])
        mapping = raw.get("map")
        if not isinstance(mapping, dict):
            raise InputError(f"{where}: map must be an object")
        try:
            m = make_morphism(ends[0], ends[1], {str(k): str(v) for k, v in mapping.items()})
        except InputError as exc:
            raise InputError(f"{where}: {exc}") from None
        if set(mapping) - set(ends[0].carrier):
            raise InputError(f"{where}: map mentions unknown source elements")
        bad = validate_morphism(m)
        if bad:
            raise InputError(f"{where}: {bad[0]}")
        doc.morphisms[name] = m
    doc.extra = {k: v for k, v in data.items() if k not in ("base", "objects", "morphisms")}
    return doc


def to_json(doc: InstanceDocument) -> dict:
    names = {id(o): n for n, o in doc.objects.items()}
    out: dict[str, Any] = {}
    if doc.base is not None:
        out["base"] = base_to_json(doc.base)
    out["objects"] = {n: object_to_json(o) for n, o in doc.objects.items()}
    morphisms = {}
    for n, m in doc.morphisms.items():
        src = names.get(id(m.source)) or _find(doc, m.source)
        dst = names.get(id(m.target)) or _find(doc, m.target)
        morphisms[n] = {"from": src, "to": dst, "map": m.as_dict()}
    out["morphisms"] = morphisms
    out.update(doc.extra)
    return out


def _find(doc: InstanceDocument, obj: StructuredObject) -> str:
    for n, o in doc.objects.items():
        if o == obj:
            return n
    raise InputError("morphism endpoint is not a named object of the document")


def format_json(value: Any, depth: int) -> str:
    """Indented JSON with arrays kept on one line."""
    if isinstance(value, dict) and value:
        pad = "  " * (depth + 1)
        items = [f"{pad}{json.dumps(str(k), ensure_ascii=False)}: {format_json(v, depth + 1)}" for k, v in value.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * depth + "}"
    if isinstance(value, list) and any(isinstance(v, dict) for v in value):
        pad = "  " * (depth + 1)
        return "[\n" + ",\n".join(pad + format_json(v, depth + 1) for v in value) + "\n" + "  " * depth + "]"
    return json.dumps(value, ensure_ascii=False)


def dumps(doc: InstanceDocument | dict) -> str:
    data = to_json(doc) if isinstance(doc, InstanceDocument) else doc
    return format_json(data, 0) + "\n"


def loads(text: str, strict: bool = False) -> InstanceDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"parse error at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return from_json(data, strict)


def load(path: str | Path, strict: bool = False) -> InstanceDocument:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        return loads(text, strict)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None


def save(doc: InstanceDocument | dict, path: str | Path) -> None:
    Path(path).write_text(dumps(doc), encoding="utf-8")


def single_morphism(p: StructuredMorphism, name: str = "p") -> InstanceDocument:
    """Document holding ``p: E -> B`` with its endpoints named ``E`` and ``B``."""
    base = p.target.base
    return InstanceDocument(base, {"E": p.source, "B": p.target}, {name: p})

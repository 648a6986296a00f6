"""Reading and writing BRAT-style standoff annotation (``.txt`` + ``.ann``).

Supported line types::

    T<n>\\t<Label> <start> <end>[;<start> <end>]*\\t<surface>
    E<n>\\t<Type>:<Tid>[ <Role>:<Tid>]*
    A<n>\\t<Name> <Tid|Eid>[ <Value>]

Lines starting with ``#`` are ignored.  R, N, M and any other prefix are
rejected so that relation or normalization data is never silently dropped.

Attributes attached to an event id, or to the trigger entity of an event,
are stored as trigger-level attributes on the event.  Attributes on any
other entity stay on that entity.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .document import Document, Entity, EventAnnotation, TextSpan
from .errors import (
    DanglingReferenceError,
    SerializationError,
    SpanAlignmentError,
    StandoffParseError,
)

_ROLE_ARG = re.compile(r"(?P<role>[^:]+?):(?P<ref>\S+)(?:\s+|$)")
_ATTR_BODY = re.compile(r"^(?P<name>.+?) (?P<ref>[TE]\d+)(?: (?P<value>.+))?$")
_ROLE_SUFFIX = re.compile(r"(?<=\D)\d+$")
_ID = re.compile(r"^([A-Za-z]+)(\d*)(.*)$")

MANIFEST_NAME = "manifest.json"
_FIELD_UNSAFE = str.maketrans({"\t": " ", "\n": " ", "\r": " "})


def _base_role(role: str) -> str:
    # The annotation tool numbers repeated roles: Anatomy, Anatomy2, ...
    return _ROLE_SUFFIX.sub("", role)


def _surface_field(surface: str) -> str:
    # the surface column is one tab-delimited line; spans may cross line breaks
    return surface.translate(_FIELD_UNSAFE)


def _parse_span(body: str, lineno: int, doc_id: str) -> tuple[str, TextSpan]:
    pieces = body.split(";")
    head = pieces[0].rsplit(" ", 2)
    if len(head) != 3 or not head[0]:
        raise StandoffParseError(f"bad entity field {body!r}", lineno, doc_id)
    label = head[0]
    raw = [head[1:]] + [p.split(" ") for p in pieces[1:]]
    frags = []
    for pair in raw:
        if len(pair) != 2:
            raise StandoffParseError(f"bad offset pair in {body!r}", lineno, doc_id)
        try:
            frags.append((int(pair[0]), int(pair[1])))
        except ValueError:
            raise StandoffParseError(f"non-integer offset in {body!r}", lineno, doc_id) from None
    try:
        span = TextSpan(tuple(frags))
    except ValueError as exc:
        raise SpanAlignmentError(str(exc), lineno, doc_id) from None
    return label, span


def parse_document(text_content: str, ann_content: str, doc_id: str) -> Document:
    """Build a :class:`Document` from report text and its standoff annotations."""
    doc = Document(id=doc_id, text=text_content)
    text_len = len(text_content)
    event_lines: list[tuple[int, str, str]] = []
    attr_lines: list[tuple[int, str, str]] = []

    for lineno, raw in enumerate(ann_content.split("\n"), start=1):
        line = raw.rstrip("\r")
        if not line.strip() or line.startswith("#"):
            continue
        fields = line.split("\t")
        ann_id = fields[0]
        kind = ann_id[:1]
        if kind == "T":
            if len(fields) != 3:
                raise StandoffParseError(f"entity line needs 3 tab-separated fields, got {len(fields)}",
                                         lineno, doc_id)
            label, span = _parse_span(fields[1], lineno, doc_id)
            if not span.in_bounds(text_len):
                raise SpanAlignmentError(f"{ann_id} offset {span.end} beyond text length {text_len}",
                                         lineno, doc_id)
            found = span.extract(text_content)
            if _surface_field(found) != fields[2]:
                raise SpanAlignmentError(f"{ann_id} surface {fields[2]!r} does not match text {found!r}",
                                         lineno, doc_id)
            if ann_id in doc.entities:
                raise StandoffParseError(f"duplicate id {ann_id}", lineno, doc_id)
            doc.entities[ann_id] = Entity(ann_id, label, span, found)
        elif kind == "E":
            if len(fields) != 2:
                raise StandoffParseError(f"event line needs 2 tab-separated fields, got {len(fields)}",
                                         lineno, doc_id)
            event_lines.append((lineno, ann_id, fields[1].strip()))
        elif kind == "A":
            if len(fields) != 2:
                raise StandoffParseError(f"attribute line needs 2 tab-separated fields, got {len(fields)}",
                                         lineno, doc_id)
            attr_lines.append((lineno, ann_id, fields[1].strip()))
        else:
            raise StandoffParseError(f"unsupported annotation line type {ann_id!r}", lineno, doc_id)

    for lineno, ann_id, body in event_lines:
        pairs = [(m.group("role"), m.group("ref")) for m in _ROLE_ARG.finditer(body)]
        if not pairs or re.sub(r"\s+", "", "".join(f"{r}:{t}" for r, t in pairs)) != re.sub(r"\s+", "", body):
            raise StandoffParseError(f"malformed event body {body!r}", lineno, doc_id)
        if ann_id in doc.events or ann_id in doc.entities:
            raise StandoffParseError(f"duplicate id {ann_id}", lineno, doc_id)
        (etype, trig), args = pairs[0], pairs[1:]
        for ref in [trig] + [t for _, t in args]:
            if ref not in doc.entities:
                raise DanglingReferenceError(ref, lineno, doc_id)
        if doc.entities[trig].label != etype:
            raise StandoffParseError(
                f"{ann_id} type {etype!r} does not match trigger {trig} label {doc.entities[trig].label!r}",
                lineno, doc_id)
        doc.events[ann_id] = EventAnnotation(
            ann_id, etype, trig, tuple((_base_role(r), t) for r, t in args))

    triggered: dict[str, list[EventAnnotation]] = {}
    for ev in doc.events.values():
        triggered.setdefault(ev.trigger, []).append(ev)

    seen_attr_ids = set()
    for lineno, ann_id, body in attr_lines:
        m = _ATTR_BODY.match(body)
        if m is None:
            raise StandoffParseError(f"malformed attribute body {body!r}", lineno, doc_id)
        if ann_id in seen_attr_ids:
            raise StandoffParseError(f"duplicate id {ann_id}", lineno, doc_id)
        seen_attr_ids.add(ann_id)
        name, ref, value = m.group("name"), m.group("ref"), m.group("value")
        if ref in doc.events:
            owners = [doc.events[ref].attributes]
        elif ref in triggered:
            owners = [ev.attributes for ev in triggered[ref]]
        elif ref in doc.entities:
            owners = [doc.entities[ref].attributes]
        else:
            raise DanglingReferenceError(ref, lineno, doc_id)
        for attrs in owners:
            if name in attrs and attrs[name] != value:
                raise StandoffParseError(f"conflicting values for attribute {name!r} on {ref}", lineno, doc_id)
            attrs[name] = value
    return doc


def _id_order(ann_id: str) -> tuple:
    m = _ID.match(ann_id)
    if m is None:
        return ("", 0, ann_id)
    prefix, digits, rest = m.groups()
    return (prefix, int(digits) if digits else -1, rest)


def serialize_document(doc: Document) -> tuple[str, str]:
    """Return ``(text_content, ann_content)`` for ``doc``.

    Entities, then events, then attributes, each in natural id order.
    Attribute ids are regenerated.
    """
    problems = doc.check_invariants()
    for ent in doc.entities.values():
        if not ent.id.startswith("T"):
            problems.append(("id_prefix", f"entity id {ent.id!r} must start with T"))
    for ev in doc.events.values():
        if not ev.id.startswith("E"):
            problems.append(("id_prefix", f"event id {ev.id!r} must start with E"))
    if problems:
        invariant, message = problems[0]
        raise SerializationError(invariant, message)

    lines = []
    for eid in sorted(doc.entities, key=_id_order):
        ent = doc.entities[eid]
        lines.append(f"{ent.id}\t{ent.label} {ent.span.to_standoff()}\t{_surface_field(ent.surface)}")
    for vid in sorted(doc.events, key=_id_order):
        ev = doc.events[vid]
        parts = [f"{ev.event_type}:{ev.trigger}"]
        counts: dict[str, int] = {}
        for role, target in ev.arguments:
            counts[role] = counts.get(role, 0) + 1
            shown = role if counts[role] == 1 else f"{role}{counts[role]}"
            parts.append(f"{shown}:{target}")
        lines.append(f"{ev.id}\t{' '.join(parts)}")

    n = 0
    owners = [(eid, doc.entities[eid].attributes) for eid in sorted(doc.entities, key=_id_order)]
    owners += [(vid, doc.events[vid].attributes) for vid in sorted(doc.events, key=_id_order)]
    for owner_id, attrs in owners:
        for name in sorted(attrs):
            n += 1
            value = attrs[name]
            tail = "" if value is None else f" {value}"
            lines.append(f"A{n}\t{name} {owner_id}{tail}")
    ann = "".join(line + "\n" for line in lines)
    return doc.text, ann


# ---------------------------------------------------------------------------
# corpus directories


def read_manifest(directory: Path) -> dict[str, dict[str, str]]:
    path = Path(directory) / MANIFEST_NAME
    if not path.exists():
        return {}
    data = json.loads(path.read_text(encoding="utf-8"))
    return {str(k): {str(a): str(b) for a, b in v.items()} for k, v in data.get("documents", {}).items()}


def read_corpus(directory: str | Path) -> list[Document]:
    """Load every ``<id>.txt`` (with optional ``<id>.ann``) under ``directory``.

    A missing ``.ann`` file means the document has no annotations.  Documents
    are returned sorted by id.
    """
    directory = Path(directory)
    if not directory.is_dir():
        raise FileNotFoundError(f"not a corpus directory: {directory}")
    manifest = read_manifest(directory)
    docs = []
    for txt in sorted(directory.glob("*.txt")):
        doc_id = txt.stem
        with open(txt, encoding="utf-8", newline="") as fh:
            text = fh.read()
        ann_path = txt.with_suffix(".ann")
        ann = ""
        if ann_path.exists():
            with open(ann_path, encoding="utf-8", newline="") as fh:
                ann = fh.read()
        doc = parse_document(text, ann, doc_id)
        doc.metadata.update(manifest.get(doc_id, {}))
        docs.append(doc)
    return docs


def write_corpus(directory: str | Path, docs, *, tool_version: str | None = None) -> None:
    """Write documents as ``.txt``/``.ann`` pairs plus a manifest of metadata."""
    from . import __version__

    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    meta = {}
    for doc in docs:
        text, ann = serialize_document(doc)
        with open(directory / f"{doc.id}.txt", "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        with open(directory / f"{doc.id}.ann", "w", encoding="utf-8", newline="") as fh:
            fh.write(ann)
        if doc.metadata:
            meta[doc.id] = dict(sorted(doc.metadata.items()))
    if meta:
        payload = {"tool_version": tool_version or __version__, "documents": dict(sorted(meta.items()))}
        (directory / MANIFEST_NAME).write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")

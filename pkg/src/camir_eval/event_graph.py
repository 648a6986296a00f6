"""Event view <-> entity/relation view, and the JSON interchange form.

In the entity/relation view every event becomes its trigger entity plus one
``(head=trigger, tail=argument, role)`` relation per argument.  Trigger-level
subtype attributes ride on the trigger entity; argument subtypes stay on the
argument entity.  An argument shared by several events is one entity with
several inbound relations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .document import Document, Entity, EventAnnotation, TextSpan
from .errors import StructureError


@dataclass
class ViewEntity:
    id: str
    label: str
    span: TextSpan
    subtypes: dict[str, str | None] = field(default_factory=dict)


@dataclass(frozen=True)
class Relation:
    head: str
    tail: str
    role: str


@dataclass
class EntityRelationView:
    entities: list[ViewEntity] = field(default_factory=list)
    relations: list[Relation] = field(default_factory=list)

    def check(self, event_types: Iterable[str]) -> None:
        """Raise :class:`StructureError` if the view breaks an invariant."""
        event_types = set(event_types)
        by_id = {}
        for ent in self.entities:
            if ent.id in by_id:
                raise StructureError(f"duplicate entity id {ent.id}")
            by_id[ent.id] = ent
        seen = set()
        for rel in self.relations:
            head = by_id.get(rel.head)
            if head is None or rel.tail not in by_id:
                raise StructureError(f"relation {rel} references an unknown entity")
            if head.label not in event_types:
                raise StructureError(f"relation head {rel.head} has non-trigger label {head.label!r}")
            if rel in seen:
                raise StructureError(f"duplicate relation {rel}")
            seen.add(rel)


def decompose(doc: Document) -> EntityRelationView:
    """Split ``doc``'s events into entities and trigger->argument relations."""
    problems = [p for p in doc.check_invariants() if p[0] in ("trigger_resolves", "argument_resolves")]
    if problems:
        raise StructureError(f"{doc.id}: {problems[0][1]}")
    trig_owner: dict[str, EventAnnotation] = {}
    for ev in doc.events.values():
        if ev.trigger in trig_owner:
            raise StructureError(f"{doc.id}: trigger {ev.trigger} shared by {trig_owner[ev.trigger].id} and {ev.id}")
        trig_owner[ev.trigger] = ev

    view = EntityRelationView()
    for ent in doc.entities.values():
        subtypes = dict(ent.attributes)
        ev = trig_owner.get(ent.id)
        if ev is not None:
            subtypes.update(ev.attributes)
        view.entities.append(ViewEntity(ent.id, ent.label, ent.span, subtypes))
    seen = set()
    for ev in doc.events.values():
        for role, target in ev.arguments:
            rel = Relation(ev.trigger, target, role)
            if rel in seen:
                raise StructureError(f"{doc.id}: {ev.id} repeats argument {role}:{target}")
            seen.add(rel)
            view.relations.append(rel)
    return view


def recompose(view: EntityRelationView, doc_text: str, event_types: Iterable[str] | None = None,
              doc_id: str = "document") -> Document:
    """Rebuild events: one per entity whose label is an event type.

    ``event_types`` defaults to the shipped schema's event types.
    """
    if event_types is None:
        from .schema import default_schema

        event_types = default_schema().event_type_names
    event_types = set(event_types)
    view.check(event_types)

    doc = Document(id=doc_id, text=doc_text)
    for ent in view.entities:
        if not ent.span.in_bounds(len(doc_text)):
            raise StructureError(f"entity {ent.id} extends past the text")
        attrs = {} if ent.label in event_types else dict(ent.subtypes)
        doc.entities[ent.id] = Entity(ent.id, ent.label, ent.span, ent.span.extract(doc_text), attrs)

    outgoing: dict[str, list[Relation]] = {}
    for rel in view.relations:
        outgoing.setdefault(rel.head, []).append(rel)
    used = {e.id for e in view.entities}
    n = 0
    for ent in view.entities:
        if ent.label not in event_types:
            continue
        n += 1
        while f"E{n}" in used:
            n += 1
        eid = f"E{n}"
        args = tuple((r.role, r.tail) for r in outgoing.get(ent.id, []))
        doc.events[eid] = EventAnnotation(eid, ent.label, ent.id, args, dict(ent.subtypes))
    return doc


# ---------------------------------------------------------------------------
# JSON interchange
#
# {"id": ..., "text": ..., "metadata": {...},
#  "entities": [{"id": "T1", "label": "Lesion", "fragments": [[s, e], ...],
#                "subtypes": {"Assertion": "present"}}],
#  "relations": [{"head": "T1", "tail": "T2", "role": "Anatomy"}]}


def document_to_json(doc: Document) -> dict:
    view = decompose(doc)
    return {
        "id": doc.id,
        "text": doc.text,
        "metadata": dict(sorted(doc.metadata.items())),
        "entities": [
            {"id": e.id, "label": e.label, "fragments": [list(f) for f in e.span.fragments],
             "surface": e.span.extract(doc.text), "subtypes": dict(sorted(e.subtypes.items()))}
            for e in view.entities
        ],
        "relations": [{"head": r.head, "tail": r.tail, "role": r.role} for r in view.relations],
    }


def document_from_json(data: dict, event_types: Iterable[str] | None = None) -> Document:
    try:
        entities = [
            ViewEntity(str(e["id"]), str(e["label"]), TextSpan(tuple(tuple(f) for f in e["fragments"])),
                       dict(e.get("subtypes", {})))
            for e in data.get("entities", [])
        ]
        relations = [Relation(str(r["head"]), str(r["tail"]), str(r["role"])) for r in data.get("relations", [])]
        text = data["text"]
        doc_id = str(data["id"])
    except (KeyError, TypeError, ValueError) as exc:
        raise StructureError(f"malformed JSON document: {exc}") from None
    doc = recompose(EntityRelationView(entities, relations), text, event_types, doc_id)
    doc.metadata.update({str(k): str(v) for k, v in data.get("metadata", {}).items()})
    return doc

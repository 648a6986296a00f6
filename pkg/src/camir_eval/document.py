"""Core annotation data model: spans, entities, events and documents."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator

Fragment = tuple[int, int]

MODALITIES = ("CT", "MRI", "PET-CT")
SPLITS = ("train", "validation", "test")

# Attribute names of the form "<Role> Parent" / "<Role> Child" fill the two
# slots of a hierarchical role; any other attribute name is its own role.
_SLOT_SUFFIXES = (" Parent", " Child")


def attribute_role(name: str) -> str:
    """Role name an attribute belongs to (``"Anatomy Child"`` -> ``"Anatomy"``)."""
    for suffix in _SLOT_SUFFIXES:
        if name.endswith(suffix) and len(name) > len(suffix):
            return name[: -len(suffix)]
    return name


@dataclass(frozen=True)
class TextSpan:
    """Half-open character fragments, sorted and pairwise disjoint."""

    fragments: tuple[Fragment, ...]

    def __post_init__(self):
        frags = tuple((int(s), int(e)) for s, e in self.fragments)
        if not frags:
            raise ValueError("a span needs at least one fragment")
        prev_end = None
        for start, end in frags:
            if start < 0:
                raise ValueError(f"negative offset in fragment ({start}, {end})")
            if start >= end:
                raise ValueError(f"empty or inverted fragment ({start}, {end})")
            if prev_end is not None and start < prev_end:
                raise ValueError(f"fragments unsorted or overlapping at ({start}, {end})")
            prev_end = end
        object.__setattr__(self, "fragments", frags)

    @classmethod
    def single(cls, start: int, end: int) -> TextSpan:
        return cls(((start, end),))

    @property
    def start(self) -> int:
        return self.fragments[0][0]

    @property
    def end(self) -> int:
        return self.fragments[-1][1]

    def __len__(self) -> int:
        return sum(e - s for s, e in self.fragments)

    def chars(self) -> frozenset[int]:
        return frozenset(i for s, e in self.fragments for i in range(s, e))

    def overlap_size(self, other: TextSpan) -> int:
        """Number of character positions shared with ``other``."""
        total = 0
        i = j = 0
        a, b = self.fragments, other.fragments
        while i < len(a) and j < len(b):
            lo = max(a[i][0], b[j][0])
            hi = min(a[i][1], b[j][1])
            if lo < hi:
                total += hi - lo
            if a[i][1] <= b[j][1]:
                i += 1
            else:
                j += 1
        return total

    def extract(self, text: str) -> str:
        return " ".join(text[s:e] for s, e in self.fragments)

    def in_bounds(self, text_length: int) -> bool:
        return self.end <= text_length

    def to_standoff(self) -> str:
        return ";".join(f"{s} {e}" for s, e in self.fragments)


@dataclass
class Entity:
    id: str
    label: str
    span: TextSpan
    surface: str
    attributes: dict[str, str | None] = field(default_factory=dict)


@dataclass
class EventAnnotation:
    """An event: trigger entity id, ordered (role, entity id) arguments and
    trigger-level subtype attributes."""

    id: str
    event_type: str
    trigger: str
    arguments: tuple[tuple[str, str], ...] = ()
    attributes: dict[str, str | None] = field(default_factory=dict)


@dataclass
class Document:
    id: str
    text: str
    entities: dict[str, Entity] = field(default_factory=dict)
    events: dict[str, EventAnnotation] = field(default_factory=dict)
    metadata: dict[str, str] = field(default_factory=dict)

    @property
    def modality(self) -> str | None:
        return self.metadata.get("modality")

    @property
    def split(self) -> str | None:
        return self.metadata.get("split")

    def entity(self, entity_id: str) -> Entity:
        return self.entities[entity_id]

    def trigger_of(self, event: EventAnnotation) -> Entity:
        return self.entities[event.trigger]

    def check_invariants(self) -> list[tuple[str, str]]:
        """Return ``(invariant, message)`` pairs for every broken invariant."""
        problems = []
        n = len(self.text)
        for key, ent in self.entities.items():
            if key != ent.id:
                problems.append(("unique_ids", f"entity stored under {key} has id {ent.id}"))
            if not ent.span.in_bounds(n):
                problems.append(("span_in_bounds", f"{ent.id} ends at {ent.span.end} > text length {n}"))
            elif ent.span.extract(self.text) != ent.surface:
                problems.append(("surface_matches_text", f"{ent.id} surface {ent.surface!r} "
                                 f"!= text {ent.span.extract(self.text)!r}"))
        for key, ev in self.events.items():
            if key != ev.id:
                problems.append(("unique_ids", f"event stored under {key} has id {ev.id}"))
            if ev.id in self.entities:
                problems.append(("unique_ids", f"{ev.id} used by both an entity and an event"))
            trig = self.entities.get(ev.trigger)
            if trig is None:
                problems.append(("trigger_resolves", f"{ev.id} trigger {ev.trigger} is undefined"))
            else:
                if trig.label != ev.event_type:
                    problems.append(("event_type_matches_trigger",
                                     f"{ev.id} type {ev.event_type!r} != trigger label {trig.label!r}"))
                if trig.attributes:
                    problems.append(("trigger_attributes_on_event",
                                     f"trigger {trig.id} carries attributes; store them on {ev.id}"))
            for role, target in ev.arguments:
                if target not in self.entities:
                    problems.append(("argument_resolves", f"{ev.id} argument {role}:{target} is undefined"))
        return problems

    def canonical(self) -> tuple:
        """Id-free structural form; equal for documents equal modulo id renaming."""

        def ent_key(eid: str) -> tuple:
            e = self.entities[eid]
            return (e.label, e.span.fragments, e.surface, tuple(sorted(e.attributes.items(), key=_attr_sort)))

        entities = sorted(ent_key(eid) for eid in self.entities)
        events = sorted(
            (
                ev.event_type,
                ent_key(ev.trigger),
                tuple(sorted((role, ent_key(t)) for role, t in ev.arguments)),
                tuple(sorted(ev.attributes.items(), key=_attr_sort)),
            )
            for ev in self.events.values()
        )
        return (self.text, tuple(entities), tuple(events))


def _attr_sort(item: tuple[str, str | None]) -> tuple[str, str]:
    return (item[0], item[1] or "")


# ---------------------------------------------------------------------------
# Scoring units.  A trigger instance is one event; an argument instance is one
# (event, role) link.  Trigger-level subtype attributes whose role has no
# argument span become argument instances located on the trigger span.


@dataclass(frozen=True)
class TriggerInstance:
    id: str
    event_type: str
    span: TextSpan
    entity_id: str


@dataclass(frozen=True)
class ArgumentInstance:
    id: str
    event_id: str
    event_type: str
    role: str
    span: TextSpan
    subtypes: tuple[tuple[str, str | None], ...]
    entity_id: str | None


def trigger_instances(doc: Document) -> Iterator[TriggerInstance]:
    for ev in doc.events.values():
        yield TriggerInstance(ev.id, ev.event_type, doc.entities[ev.trigger].span, ev.trigger)


def argument_instances(doc: Document) -> Iterator[ArgumentInstance]:
    for ev in doc.events.values():
        yield from _event_arguments(doc, ev)


def _event_arguments(doc: Document, ev: EventAnnotation) -> Iterable[ArgumentInstance]:
    by_role: dict[str, dict[str, str | None]] = {}
    for name, value in ev.attributes.items():
        by_role.setdefault(attribute_role(name), {})[name] = value
    arg_roles = set()
    seen: dict[tuple[str, str], int] = {}
    for role, target in ev.arguments:
        arg_roles.add(role)
        ent = doc.entities[target]
        subtypes = {n: v for n, v in ent.attributes.items() if attribute_role(n) == role}
        for name, value in by_role.get(role, {}).items():
            subtypes.setdefault(name, value)
        k = seen.get((role, target), 0)
        seen[(role, target)] = k + 1
        suffix = f"#{k + 1}" if k else ""
        yield ArgumentInstance(
            id=f"{ev.id}/{role}/{target}{suffix}",
            event_id=ev.id,
            event_type=ev.event_type,
            role=role,
            span=ent.span,
            subtypes=tuple(sorted(subtypes.items(), key=_attr_sort)),
            entity_id=target,
        )
    trig_span = doc.entities[ev.trigger].span
    for role in sorted(by_role):
        if role in arg_roles:
            continue
        yield ArgumentInstance(
            id=f"{ev.id}/{role}",
            event_id=ev.id,
            event_type=ev.event_type,
            role=role,
            span=trig_span,
            subtypes=tuple(sorted(by_role[role].items(), key=_attr_sort)),
            entity_id=None,
        )

"""Event schema model, config loading and document linting.

The schema config is JSON::

    {
      "event_types": [
        {"name": "Lesion",
         "roles": [{"name": "Assertion", "kind": "span_with_value",
                    "required": true, "vocabulary": ["present", ...]},
                   {"name": "Anatomy", "kind": "span_with_value",
                    "hierarchy": "anatomy"}, ...]}
      ],
      "anatomy": {"parents": [{"name": "Respiratory",
                               "children": ["Lung", ..., "Undetermined"]}]}
    }

Keys starting with ``_`` are comments and ignored.  A role with
``"hierarchy": "anatomy"`` takes two subtype attributes, ``<Role> Parent``
and ``<Role> Child``, whose values come from the anatomy hierarchy.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources

from .document import Document, attribute_role
from .errors import SchemaError

SPAN_ONLY = "span_only"
SPAN_WITH_VALUE = "span_with_value"
UNDETERMINED = "Undetermined"
TRIGGER = "TRIGGER"

DEFAULT_SCHEMA_RESOURCE = "data/camir_schema.json"


@dataclass(frozen=True)
class RoleDef:
    name: str
    kind: str
    required: bool = False
    vocabulary: tuple[str, ...] = ()
    hierarchical: bool = False

    @property
    def slots(self) -> tuple[str, ...]:
        """Attribute names that carry this role's subtype values."""
        if self.kind == SPAN_ONLY:
            return ()
        if self.hierarchical:
            return (f"{self.name} Parent", f"{self.name} Child")
        return (self.name,)


@dataclass(frozen=True)
class EventTypeDef:
    name: str
    roles: tuple[RoleDef, ...]

    def role(self, name: str) -> RoleDef | None:
        for r in self.roles:
            if r.name == name:
                return r
        return None


@dataclass(frozen=True)
class AnatomyHierarchy:
    parents: tuple[str, ...]
    children: dict[str, tuple[str, ...]] = field(hash=False)

    @property
    def child_count(self) -> int:
        return sum(len(c) for c in self.children.values())

    def parents_of(self, child: str) -> list[str]:
        return [p for p in self.parents if child in self.children[p]]


@dataclass(frozen=True)
class Schema:
    event_types: tuple[EventTypeDef, ...]
    anatomy: AnatomyHierarchy

    def event_type(self, name: str) -> EventTypeDef | None:
        for et in self.event_types:
            if et.name == name:
                return et
        return None

    @property
    def event_type_names(self) -> tuple[str, ...]:
        return tuple(et.name for et in self.event_types)

    def categories(self) -> list[tuple[str, str]]:
        """``(event_type, role)`` keys in report order; triggers first per event type."""
        keys = []
        for et in self.event_types:
            keys.append((et.name, TRIGGER))
            keys.extend((et.name, r.name) for r in et.roles)
        return keys


# ---------------------------------------------------------------------------
# loading


def _strip_comments(obj):
    if isinstance(obj, dict):
        return {k: _strip_comments(v) for k, v in obj.items() if not k.startswith("_")}
    if isinstance(obj, list):
        return [_strip_comments(v) for v in obj]
    return obj


def _expect(cond: bool, rule: str, message: str) -> None:
    if not cond:
        raise SchemaError(rule, message)


def _load_hierarchy(raw) -> AnatomyHierarchy:
    _expect(isinstance(raw, dict) and isinstance(raw.get("parents"), list),
            "config_grammar", "'anatomy' must be an object with a 'parents' list")
    parents, children = [], {}
    for entry in raw["parents"]:
        _expect(isinstance(entry, dict) and isinstance(entry.get("name"), str)
                and isinstance(entry.get("children"), list),
                "config_grammar", "each anatomy parent needs 'name' and 'children'")
        name = entry["name"]
        kids = entry["children"]
        _expect(name not in children, "unique_parents", f"anatomy parent {name!r} listed twice")
        _expect(len(kids) > 0, "parent_has_children", f"anatomy parent {name!r} has no children")
        _expect(len(set(kids)) == len(kids), "unique_children", f"anatomy parent {name!r} repeats a child label")
        _expect(UNDETERMINED in kids, "undetermined_child",
                f"anatomy parent {name!r} must include an {UNDETERMINED!r} child")
        parents.append(name)
        children[name] = tuple(str(k) for k in kids)
    return AnatomyHierarchy(tuple(parents), children)


def _load_role(raw, event_name: str, anatomy: AnatomyHierarchy) -> RoleDef:
    _expect(isinstance(raw, dict) and isinstance(raw.get("name"), str),
            "config_grammar", f"roles of {event_name!r} need a 'name'")
    name = raw["name"]
    kind = raw.get("kind", SPAN_ONLY)
    _expect(kind in (SPAN_ONLY, SPAN_WITH_VALUE), "role_kind",
            f"{event_name}/{name}: kind must be {SPAN_ONLY} or {SPAN_WITH_VALUE}, got {kind!r}")
    hierarchy = raw.get("hierarchy")
    vocab = raw.get("vocabulary", [])
    _expect(isinstance(vocab, list), "config_grammar", f"{event_name}/{name}: vocabulary must be a list")
    vocab = tuple(str(v) for v in vocab)
    if hierarchy is not None:
        _expect(hierarchy == "anatomy", "config_grammar", f"{event_name}/{name}: unknown hierarchy {hierarchy!r}")
        _expect(kind == SPAN_WITH_VALUE, "role_kind", f"{event_name}/{name}: hierarchical roles carry values")
        _expect(not vocab or vocab == anatomy.parents, "anatomy_vocabulary",
                f"{event_name}/{name}: vocabulary must equal the anatomy parent labels")
        vocab = anatomy.parents
    # two-role spelling of the hierarchy
    if name == "Anatomy Parent":
        _expect(vocab == anatomy.parents, "anatomy_vocabulary",
                f"{event_name}/{name}: vocabulary must equal the anatomy parent labels")
    if name == "Anatomy Child":
        labels = tuple(dict.fromkeys(c for p in anatomy.parents for c in anatomy.children[p]))
        _expect(set(vocab) == set(labels), "anatomy_vocabulary",
                f"{event_name}/{name}: vocabulary must equal the anatomy child labels")
    if kind == SPAN_WITH_VALUE:
        _expect(len(vocab) > 0, "value_vocabulary", f"{event_name}/{name}: span_with_value role needs a vocabulary")
    else:
        _expect(len(vocab) == 0, "value_vocabulary", f"{event_name}/{name}: span_only role cannot have a vocabulary")
    required = raw.get("required", False)
    _expect(isinstance(required, bool), "config_grammar", f"{event_name}/{name}: 'required' must be boolean")
    return RoleDef(name, kind, required, vocab, hierarchy is not None)


def load_schema(config_content: str) -> Schema:
    """Parse a schema config document and check every schema rule."""
    try:
        raw = json.loads(config_content)
    except json.JSONDecodeError as exc:
        raise SchemaError("syntax", f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    raw = _strip_comments(raw)
    _expect(isinstance(raw, dict), "config_grammar", "top level must be an object")
    _expect(isinstance(raw.get("event_types"), list), "config_grammar", "missing 'event_types' list")
    anatomy = _load_hierarchy(raw.get("anatomy", {"parents": []}))

    event_types = []
    seen = set()
    for entry in raw["event_types"]:
        _expect(isinstance(entry, dict) and isinstance(entry.get("name"), str),
                "config_grammar", "each event type needs a 'name'")
        name = entry["name"]
        _expect(name not in seen, "unique_event_types", f"event type {name!r} defined twice")
        seen.add(name)
        roles = tuple(_load_role(r, name, anatomy) for r in entry.get("roles", []))
        names = [r.name for r in roles]
        _expect(len(set(names)) == len(names), "unique_roles", f"event type {name!r} repeats a role name")
        event_types.append(EventTypeDef(name, roles))
    return Schema(tuple(event_types), anatomy)


def default_schema_text() -> str:
    return resources.files("camir_eval").joinpath(DEFAULT_SCHEMA_RESOURCE).read_text(encoding="utf-8")


@lru_cache(maxsize=1)
def default_schema() -> Schema:
    """The shipped CAMIR schema."""
    return load_schema(default_schema_text())


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True, order=True)
class Violation:
    doc_id: str
    annotation_id: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.doc_id}\t{self.annotation_id}\t{self.rule}\t{self.message}"


def _check_values(role: RoleDef, values: dict, schema: Schema, where: str, report) -> None:
    if role.kind == SPAN_ONLY:
        for name in sorted(values):
            report(where, "span_only_has_subtype", f"{role.name} is span-only but carries {name!r}")
        return
    for name in sorted(set(values) - set(role.slots)):
        report(where, "unknown_attribute", f"{name!r} is not a subtype slot of {role.name}")
    for slot in role.slots:
        if values.get(slot) is None:
            report(where, "subtype_missing", f"{role.name} needs a {slot!r} value")
    if role.hierarchical:
        parent_slot, child_slot = role.slots
        parent, child = values.get(parent_slot), values.get(child_slot)
        h = schema.anatomy
        if parent is not None and parent not in h.children:
            report(where, "subtype_out_of_vocabulary", f"{parent_slot} {parent!r} is not a known parent")
        if child is not None:
            if not h.parents_of(child):
                report(where, "subtype_out_of_vocabulary", f"{child_slot} {child!r} is not a known child")
            elif parent in h.children and child not in h.children[parent]:
                report(where, "child_not_under_parent", f"child {child!r} is not under parent {parent!r}")
    else:
        value = values.get(role.name)
        if value is not None and value not in role.vocabulary:
            report(where, "subtype_out_of_vocabulary", f"{role.name} value {value!r} not in vocabulary")


def validate_document(schema: Schema, doc: Document) -> list[Violation]:
    """Lint ``doc`` against ``schema``; an empty list means it conforms.

    The result is sorted, so it does not depend on annotation order.
    """
    found: set[Violation] = set()

    def report(ann_id: str, rule: str, message: str) -> None:
        found.add(Violation(doc.id, ann_id, rule, message))

    trigger_use: dict[str, list[str]] = {}
    for ev in doc.events.values():
        trigger_use.setdefault(ev.trigger, []).append(ev.id)
        etype = schema.event_type(ev.event_type)
        if etype is None:
            report(ev.id, "unknown_event_type", f"event type {ev.event_type!r} is not in the schema")
            continue

        by_role: dict[str, dict] = {}
        for name, value in ev.attributes.items():
            by_role.setdefault(attribute_role(name), {})[name] = value
        arg_roles = set()
        for role_name, target in ev.arguments:
            arg_roles.add(role_name)
            where = f"{ev.id}/{role_name}:{target}"
            role = etype.role(role_name)
            if role is None:
                report(where, "role_not_allowed", f"{role_name!r} is not a role of {ev.event_type}")
                continue
            ent = doc.entities[target]
            if ent.label != role_name:
                report(where, "argument_label_mismatch", f"entity label {ent.label!r} != role {role_name!r}")
            values = dict(by_role.get(role_name, {}))
            values.update(ent.attributes)
            _check_values(role, values, schema, where, report)

        for role_name, values in sorted(by_role.items()):
            if role_name in arg_roles:
                continue
            where = f"{ev.id}/{role_name}"
            role = etype.role(role_name)
            if role is None or role.kind == SPAN_ONLY:
                for name in sorted(values):
                    report(where, "unknown_attribute", f"{name!r} is not a subtype of {ev.event_type}")
                continue
            _check_values(role, values, schema, where, report)

        present = arg_roles | set(by_role)
        for role in etype.roles:
            if role.required and role.name not in present:
                report(ev.id, "required_role_absent", f"{ev.event_type} requires {role.name}")

    event_types = set(schema.event_type_names)
    for ent in doc.entities.values():
        uses = trigger_use.get(ent.id, [])
        if len(uses) > 1:
            report(ent.id, "shared_trigger", f"trigger shared by events {', '.join(sorted(uses))}")
        if ent.label in event_types and not uses:
            report(ent.id, "orphan_trigger", f"{ent.label} entity has no event")
    return sorted(found)


def validate_corpus(schema: Schema, docs) -> list[Violation]:
    """All violations across ``docs``, sorted by document id then annotation."""
    out: list[Violation] = []
    for doc in docs:
        out.extend(validate_document(schema, doc))
    return sorted(out)

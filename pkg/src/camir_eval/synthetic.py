"""Deterministic synthetic radiology-style corpus for tests and demos.

Generated text is templated and contains no patient data; every document is
tagged ``source=synthetic``.  Triggers per report are Poisson-distributed
around typical per-report rates (about 2.5 Indication, 9.5 Lesion and
10.3 Medical Problem events), and all annotations conform to the schema
passed in.
"""

from __future__ import annotations

import numpy as np

from .document import MODALITIES, Document, Entity, EventAnnotation, TextSpan
from .errors import ParameterError
from .schema import SPAN_ONLY, RoleDef, Schema, UNDETERMINED

TRIGGER_RATES = {"Indication": 2.5, "Lesion": 9.5, "Medical Problem": 10.3}
DEFAULT_RATE = 3.0

TRIGGER_WORDS = {
    "Indication": ["cancer", "lymphoma", "melanoma", "metastatic disease", "abdominal pain",
                   "shortness of breath", "headache", "weight loss", "trauma", "fever"],
    "Lesion": ["nodule", "mass", "lesion", "metastasis", "cyst", "tumor", "adenopathy",
               "focus of uptake", "hypodensity", "implant"],
    "Medical Problem": ["atelectasis", "effusion", "scarring", "edema", "inflammation", "fracture",
                        "hemorrhage", "emphysema", "stenosis", "fibrosis", "small vessel disease"],
}
SPAN_WORDS = {
    "Characteristic": ["enhancing", "hypodense", "spiculated", "FDG-avid", "calcified", "ill-defined"],
    "Size": ["1.2 cm", "8 mm", "3.4 x 2.1 cm", "5 mm", "2 cm"],
    "Count": ["multiple", "two", "several", "innumerable", "three"],
}
VALUE_CUES = {
    ("Assertion", "absent"): ["no", "without evidence of"],
    ("Assertion", "possible"): ["possible", "probable", "suspicious for"],
    ("Size Trend", "new"): ["new"],
    ("Size Trend", "increasing"): ["enlarging", "increased"],
    ("Size Trend", "decreasing"): ["decreased", "shrinking"],
    ("Size Trend", "stable"): ["stable", "unchanged"],
}
ROLE_PROBABILITY = {"Anatomy": 0.8, "Assertion": 0.6, "Characteristic": 0.35, "Size": 0.3,
                    "Size Trend": 0.3, "Count": 0.15, "Indication Type": 0.7}
# modifier order before the trigger word
PREFIX_ORDER = ["Assertion", "Count", "Size", "Size Trend", "Characteristic"]
SHARED_ANATOMY_PROBABILITY = 0.15


class _Builder:
    def __init__(self):
        self.parts: list[str] = []
        self.length = 0

    def add(self, text: str) -> TextSpan:
        start = self.length
        self.parts.append(text)
        self.length += len(text)
        return TextSpan.single(start, self.length)

    def drop_last(self, piece: str) -> None:
        if self.parts and self.parts[-1] == piece:
            self.parts.pop()
            self.length -= len(piece)

    def text(self) -> str:
        return "".join(self.parts)


class _DocState:
    def __init__(self, doc: Document):
        self.doc = doc
        self.n_ent = 0
        self.n_ev = 0

    def entity(self, label: str, span: TextSpan, text: str, attrs=None) -> str:
        self.n_ent += 1
        eid = f"T{self.n_ent}"
        self.doc.entities[eid] = Entity(eid, label, span, text, dict(attrs or {}))
        return eid

    def event(self, etype: str, trigger: str, args, attrs) -> str:
        self.n_ev += 1
        vid = f"E{self.n_ev}"
        self.doc.events[vid] = EventAnnotation(vid, etype, trigger, tuple(args), dict(attrs))
        return vid


def _pick(rng: np.random.Generator, seq):
    return seq[int(rng.integers(len(seq)))]


def _value_weights(vocab) -> np.ndarray:
    # first vocabulary value dominates (e.g. "present")
    w = np.ones(len(vocab))
    w[0] = 3.0 * max(1, len(vocab) - 1)
    return w / w.sum()


def _plan_event(rng, schema: Schema, etype: str):
    """Decide roles and values for one event; returns {role: value-or-None}."""
    et = schema.event_type(etype)
    plan: dict[str, object] = {}
    for role in et.roles:
        if not role.required and rng.random() >= ROLE_PROBABILITY.get(role.name, 0.3):
            continue
        if role.kind == SPAN_ONLY:
            plan[role.name] = None
        elif role.hierarchical:
            parent = _pick(rng, schema.anatomy.parents)
            plan[role.name] = (parent, _pick(rng, schema.anatomy.children[parent]))
        else:
            vocab = role.vocabulary
            plan[role.name] = vocab[int(rng.choice(len(vocab), p=_value_weights(vocab)))]
    return et, plan


def _anatomy_phrase(parent: str, child: str) -> str:
    if child == UNDETERMINED:
        return f"{parent.lower()} region"
    return child.lower()


def _hierarchical_attrs(role: RoleDef, value) -> dict:
    parent_slot, child_slot = role.slots
    return {parent_slot: value[0], child_slot: value[1]}


def _write_event(rng, schema: Schema, state: _DocState, b: _Builder, etype: str, lead: str,
                 shared_anatomy: tuple[str, str] | None):
    """Append one clause; returns (anatomy entity id, role name) if one was written."""
    et, plan = _plan_event(rng, schema, etype)
    args, event_attrs = [], {}
    b.add(lead)

    def emit(word: str, label: str, attrs=None) -> str:
        span = b.add(word)
        b.add(" ")
        return state.entity(label, span, word, attrs)

    ordered = sorted((r for r in et.roles if r.name in plan and not r.hierarchical),
                     key=lambda r: PREFIX_ORDER.index(r.name) if r.name in PREFIX_ORDER else len(PREFIX_ORDER))
    for role in ordered:
        value = plan[role.name]
        if role.kind == SPAN_ONLY:
            args.append((role.name, emit(_pick(rng, SPAN_WORDS.get(role.name, [role.name.lower()])), role.name)))
            continue
        cues = VALUE_CUES.get((role.name, value))
        if cues:
            args.append((role.name, emit(_pick(rng, cues), role.name, {role.name: value})))
        else:
            event_attrs[role.name] = value

    trig_word = _pick(rng, TRIGGER_WORDS.get(etype, [etype.lower()]))
    trig_span = b.add(trig_word)
    trig_id = state.entity(etype, trig_span, trig_word)

    written_anatomy = None
    for role in et.roles:
        if not role.hierarchical:
            continue
        if shared_anatomy is not None and shared_anatomy[1] == role.name:
            args.append((role.name, shared_anatomy[0]))
            written_anatomy = shared_anatomy
        elif role.name in plan:
            value = plan[role.name]
            b.add(" in the ")
            phrase = _anatomy_phrase(*value)
            span = b.add(phrase)
            ent = state.entity(role.name, span, phrase, _hierarchical_attrs(role, value))
            args.append((role.name, ent))
            written_anatomy = (ent, role.name)
    state.event(etype, trig_id, args, event_attrs)
    return written_anatomy


def _can_share(schema: Schema, etype: str, anatomy) -> bool:
    if anatomy is None:
        return False
    role = schema.event_type(etype).role(anatomy[1])
    return role is not None and role.hierarchical


def generate_document(schema: Schema, doc_id: str, rng: np.random.Generator) -> Document:
    modality = _pick(rng, MODALITIES)
    doc = Document(id=doc_id, text="", metadata={"modality": modality, "source": "synthetic"})
    state = _DocState(doc)
    b = _Builder()
    b.add(f"EXAM: {modality}\nSYNTHETIC REPORT - NOT PATIENT DATA\n\n")

    counts = {et.name: int(rng.poisson(TRIGGER_RATES.get(et.name, DEFAULT_RATE))) for et in schema.event_types}
    first, rest = schema.event_types[0].name, [et.name for et in schema.event_types[1:]]
    b.add("INDICATION:" if first == "Indication" else f"{first.upper()}:")
    for _ in range(counts[first]):
        _write_event(rng, schema, state, b, first, " History of ", None)
        b.add(".")
    b.add("\n\nFINDINGS:")

    queue = [name for name in rest for _ in range(counts[name])]
    order = rng.permutation(len(queue)) if queue else []
    last_anatomy = None
    for k in order:
        etype = queue[int(k)]
        if _can_share(schema, etype, last_anatomy) and rng.random() < SHARED_ANATOMY_PROBABILITY:
            # "... in the lung with adjacent atelectasis."
            b.drop_last(".")
            _write_event(rng, schema, state, b, etype, " with adjacent ", last_anatomy)
            last_anatomy = None
        else:
            last_anatomy = _write_event(rng, schema, state, b, etype, " There is ", None)
        b.add(".")
    b.add("\n")
    doc.text = b.text()
    return doc


def generate_synthetic_corpus(schema: Schema, n_docs: int, seed: int = 0) -> list[Document]:
    """``n_docs`` schema-conformant documents; identical output for identical inputs."""
    if n_docs < 1:
        raise ParameterError("n_docs must be at least 1")
    rng = np.random.default_rng(seed)
    width = max(4, len(str(n_docs)))
    return [generate_document(schema, f"synth-{i + 1:0{width}d}", rng) for i in range(n_docs)]

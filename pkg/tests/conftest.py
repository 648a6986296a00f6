from __future__ import annotations

import random
from pathlib import Path

import pytest

from camir_eval import _kernels
from camir_eval import alignment
from camir_eval.document import Document, Entity, EventAnnotation, TextSpan
from camir_eval.schema import default_schema
from camir_eval.synthetic import generate_synthetic_corpus

FIXTURES = Path(__file__).parent / "fixtures"

BACKENDS = [_kernels.python_backend] + ([_kernels.compiled_backend] if _kernels.compiled_backend else [])


@pytest.fixture(params=BACKENDS, ids=lambda b: b.__name__.rsplit(".", 1)[-1])
def backend(request, monkeypatch):
    """Run a test once per available kernel backend."""
    b = request.param
    monkeypatch.setattr(alignment, "min_cost_assignment", b.min_cost_assignment)
    monkeypatch.setattr(_kernels, "bootstrap_deltas", b.bootstrap_deltas)
    return b


@pytest.fixture(scope="session")
def schema():
    return default_schema()


@pytest.fixture(scope="session")
def synth_corpus(schema):
    return generate_synthetic_corpus(schema, 30, seed=7)


def _shift(span: TextSpan, rng: random.Random, text_len: int) -> TextSpan:
    if not span.single:
        return span
    start = max(0, span.start + rng.randint(-4, 4))
    end = min(text_len, span.end + rng.randint(-4, 4))
    if end <= start:
        return span
    return TextSpan.single(start, end)


def perturb(doc: Document, rng: random.Random, rate: float = 0.3) -> Document:
    """A schema-valid noisy copy of ``doc``: dropped events, shifted spans,
    flipped Assertion values and spurious Lesion events."""
    text = doc.text
    events = {k: v for k, v in doc.events.items() if rng.random() >= rate / 2}
    used = {e.trigger for e in events.values()} | {t for e in events.values() for _, t in e.arguments}
    entities = {}
    for eid, ent in doc.entities.items():
        if eid not in used:
            continue
        span = _shift(ent.span, rng, len(text)) if rng.random() < rate else ent.span
        attrs = dict(ent.attributes)
        if attrs.get("Assertion") and rng.random() < rate:
            attrs["Assertion"] = rng.choice(["present", "absent", "possible"])
        entities[eid] = Entity(eid, ent.label, span, span.extract(text), attrs)
    events = {k: EventAnnotation(v.id, v.event_type, v.trigger, v.arguments, dict(v.attributes))
              for k, v in events.items()}
    n_new = rng.randint(0, 2) if rng.random() < rate else 0
    for k in range(n_new):
        start = rng.randrange(0, max(1, len(text) - 6))
        span = TextSpan.single(start, start + rng.randint(1, 6))
        tid, vid = f"T{900 + k}", f"E{900 + k}"
        entities[tid] = Entity(tid, "Lesion", span, span.extract(text), {})
        events[vid] = EventAnnotation(vid, "Lesion", tid, (), {"Assertion": "present"})
    return Document(doc.id, text, entities, events, dict(doc.metadata))


ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines):
            terminalreporter.write_line(line[1])

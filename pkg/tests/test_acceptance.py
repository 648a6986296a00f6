"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines as they
happen; they are also repeated in the terminal summary.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import time
from contextlib import contextmanager

import numpy as np
import pytest

from camir_eval import _kernels
from camir_eval.alignment import align
from camir_eval.document import Document, Entity, EventAnnotation, TextSpan, TriggerInstance
from camir_eval.equivalence import MatchMode, spans_equivalent, triggers_equivalent
from camir_eval.errors import SchemaError
from camir_eval.schema import UNDETERMINED, default_schema_text, load_schema
from camir_eval.scoring import CategoryKey, prf, score_corpus, score_document
from camir_eval.significance import bootstrap_from_counts, document_counts, paired_bootstrap
from camir_eval.standoff import parse_document, read_corpus, serialize_document
from camir_eval.stats import corpus_summary, make_splits, split_sizes
from camir_eval.synthetic import generate_synthetic_corpus
from conftest import ACCEPTANCE_KEY, FIXTURES, perturb
from oracles import exhaustive_p, max_matching_size


@contextmanager
def criterion(request, number: int, title: str, limit: float | None = None):
    start = time.perf_counter()
    status, detail = "FAIL", ""
    try:
        yield
        status = "PASS"
    except BaseException as exc:
        detail = f" ({type(exc).__name__}: {str(exc).splitlines()[0][:100] if str(exc) else ''})"
        raise
    finally:
        elapsed = time.perf_counter() - start
        budget = f", limit {limit:g}s" if limit else ""
        line = f"{status} criterion {number}: {title} [{elapsed:.2f}s{budget}]{detail}"
        request.config.stash[ACCEPTANCE_KEY].append((number, line))
        print("\n" + line)


def _within(limit: float, elapsed: float) -> None:
    assert elapsed < limit, f"took {elapsed:.2f}s, limit {limit}s"


# 1 ---------------------------------------------------------------------------

def test_c1_standoff_round_trip(request, schema):
    with criterion(request, 1, "standoff round trip of 1000 generated documents", 5):
        docs = generate_synthetic_corpus(schema, 1000, seed=2024)
        start = time.perf_counter()
        for doc in docs:
            text, ann = serialize_document(doc)
            back = parse_document(text, ann, doc.id)
            assert back.canonical() == doc.canonical(), doc.id
            again = parse_document(*serialize_document(back), doc.id)
            assert again.canonical() == doc.canonical(), doc.id
        _within(5, time.perf_counter() - start)


# 2 ---------------------------------------------------------------------------

def _instances(rng, prefix):
    out = []
    for k in range(rng.randint(0, 8)):
        start = rng.randrange(0, 79)
        span = TextSpan.single(start, min(80, start + rng.randint(1, 15)))
        out.append(TriggerInstance(f"{prefix}{k}", "Lesion", span, f"T{prefix}{k}"))
    return out


def test_c2_matching_oracle(request):
    with criterion(request, 2, f"matching oracle on 500 instances ({_kernels.BACKEND_NAME} kernel)", 10):
        rng = random.Random(500)
        eq = lambda a, b: triggers_equivalent(MatchMode.OVERLAP, a, b)
        start = time.perf_counter()
        for _ in range(500):
            refs, preds = _instances(rng, "r"), _instances(rng, "p")
            edges = {(i, j) for i, r in enumerate(refs) for j, p in enumerate(preds) if eq(r, p)}
            m = align(refs, preds, eq)
            assert len(m) == max_matching_size(len(refs), len(preds), edges)
            rng.shuffle(refs)
            rng.shuffle(preds)
            assert align(refs, preds, eq).pairs == m.pairs
        _within(10, time.perf_counter() - start)


# 3 ---------------------------------------------------------------------------

def _doc_with(text, phrase, label="Lesion"):
    i = text.index(phrase)
    span = TextSpan.single(i, i + len(phrase))
    return Document("d", text, {"T1": Entity("T1", label, span, phrase)},
                    {"E1": EventAnnotation("E1", label, "T1", (), {"Assertion": "present"})})


def test_c3_criterion_anchors(request):
    with criterion(request, 3, "overlap and shorter/longer anchors"):
        text = "Sclerotic focus in the T12 right pedicle."
        ref_i, pred_i = text.index("right pedicle"), text.index("T12 right pedicle")
        ref = TextSpan.single(ref_i, ref_i + len("right pedicle"))
        pred = TextSpan.single(pred_i, pred_i + len("T12 right pedicle"))
        assert spans_equivalent(MatchMode.OVERLAP, ref, pred) is True

        cases = [
            ("Mild FDG activity in the liver.", "Mild FDG activity", "FDG activity", "pred_shorter"),
            ("Several hypodense lesions in the liver.", "hypodense lesions", "lesions", "pred_shorter"),
            ("Left renal cell carcinoma.", "carcinoma", "renal cell carcinoma", "pred_longer"),
        ]
        for t, r, p, category in cases:
            errors = score_document(_doc_with(t, r), _doc_with(t, p)).errors[CategoryKey("Lesion", "TRIGGER")]
            got = {k: v for k, v in errors.as_dict().items() if v}
            assert got == {category: 1}, (r, p, got)


# 4 ---------------------------------------------------------------------------

def test_c4_mode_ordering(request, schema):
    with criterion(request, 4, "overlap >= strict on 200 random corpus pairs"):
        base = generate_synthetic_corpus(schema, 100, seed=44)
        rng = random.Random(44)
        for trial in range(200):
            refs = rng.sample(base, 3)
            preds = [perturb(d, rng, rate=rng.choice([0.2, 0.5, 0.8])) for d in refs]
            over = score_corpus(refs, preds, schema, "overlap")
            strict = score_corpus(refs, preds, schema, "strict")
            for k in over.rows:
                assert over.rows[k].f1 >= strict.rows[k].f1, (trial, k)
            assert over.overall.f1 >= strict.overall.f1, trial


# 5 ---------------------------------------------------------------------------

def test_c5_scorer_identities(request, schema):
    with criterion(request, 5, "self-score, swap and micro-average identities"):
        refs = generate_synthetic_corpus(schema, 40, seed=55)
        preds = [perturb(d, random.Random(i)) for i, d in enumerate(refs)]
        for mode in MatchMode:
            self_score = score_corpus(refs, refs, schema, mode)
            assert self_score.overall.f1 == 1.0
            assert all(m.precision == m.recall == m.f1 == 1.0 for m in self_score.rows.values())

            ab = score_corpus(refs, preds, schema, mode)
            ba = score_corpus(preds, refs, schema, mode)
            for k in ab.rows:
                assert ab.rows[k].f1 == ba.rows[k].f1
                assert ab.rows[k].precision == ba.rows[k].recall
                assert ab.rows[k].recall == ba.rows[k].precision
            sums = [sum(getattr(m, f) for m in ab.rows.values()) for f in ("tp", "fp", "fn")]
            assert ab.overall == prf(*sums)


# 6 ---------------------------------------------------------------------------

def test_c6_hand_scored_fixture(request, schema):
    with criterion(request, 6, "hand-scored 3-document fixture"):
        base = FIXTURES / "handscored"
        expected = json.loads((base / "expected.json").read_text())
        refs, preds = read_corpus(base / "ref"), read_corpus(base / "pred")
        for mode in ("overlap", "strict"):
            report = score_corpus(refs, preds, schema, mode)
            for name, counts in expected[mode].items():
                got = report.overall if name == "overall" else report.rows[CategoryKey.parse(name)]
                assert got == prf(*counts), (mode, name)


# 7 ---------------------------------------------------------------------------

def test_c7_bootstrap(request, schema):
    with criterion(request, 7, "bootstrap identity, exhaustive agreement, determinism", 30):
        start = time.perf_counter()
        refs = generate_synthetic_corpus(schema, 30, seed=77)
        preds = [perturb(d, random.Random(i)) for i, d in enumerate(refs)]
        same = paired_bootstrap(refs, preds, preds, schema, replicates=10_000)
        assert same.p_value == 1.0

        B = 10_000
        rng = random.Random(7)
        for n_docs in (2, 3, 4):
            for _ in range(3):
                docs = rng.sample(refs, n_docs)
                sys_a = [perturb(d, rng, 0.3) for d in docs]
                sys_b = [perturb(d, rng, 0.6) for d in docs]
                ca, cb = document_counts(docs, sys_a), document_counts(docs, sys_b)
                exact = bootstrap_from_counts(ca, cb, exhaustive=True).p_value
                assert exact == pytest.approx(exhaustive_p(ca.tolist(), cb.tolist()), abs=1e-12)
                sampled = bootstrap_from_counts(ca, cb, replicates=B, seed=rng.randrange(10**6)).p_value
                assert abs(sampled - exact) <= 3 / math.sqrt(B), (n_docs, exact, sampled)

        other = [perturb(d, random.Random(100 + i), 0.6) for i, d in enumerate(refs)]
        r1 = paired_bootstrap(refs, preds, other, schema, replicates=B, seed=42)
        r2 = paired_bootstrap(refs, preds, other, schema, replicates=B, seed=42, workers=4)
        assert r1 == r2
        _within(30, time.perf_counter() - start)


# 8 ---------------------------------------------------------------------------

def test_c8_schema_guard(request):
    with criterion(request, 8, "shipped schema counts and Undetermined guard"):
        text = default_schema_text()
        s = load_schema(text)
        assert len(s.event_types) == 3
        assert len(s.anatomy.parents) == 16
        assert s.anatomy.child_count == 71
        assert all(UNDETERMINED in kids for kids in s.anatomy.children.values())
        for k in range(16):
            cfg = json.loads(text)
            cfg["anatomy"]["parents"][k]["children"].remove(UNDETERMINED)
            with pytest.raises(SchemaError):
                load_schema(json.dumps(cfg))


# 9 ---------------------------------------------------------------------------

def test_c9_stats(request, schema):
    with criterion(request, 9, "two-value mean/std and 609-id largest-remainder split"):
        docs = []
        for doc_id, n in (("a", 2), ("b", 3)):
            text = "x" * 4
            ents = {f"T{k}": Entity(f"T{k}", "Indication", TextSpan.single(k - 1, k), "x") for k in range(1, n + 1)}
            evs = {f"E{k}": EventAnnotation(f"E{k}", "Indication", f"T{k}", (), {}) for k in range(1, n + 1)}
            docs.append(Document(doc_id, text, ents, evs))
        assert corpus_summary(docs, schema).total.triggers_per_report["Indication"] == (2.5, 0.5)
        assert split_sizes(609, (0.7, 0.1, 0.2)) == [426, 61, 122]
        ids = [f"r{i}" for i in range(609)]
        assert tuple(make_splits(ids, seed=1).sizes().values()) == (426, 61, 122)

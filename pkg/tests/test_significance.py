import math
import random

import numpy as np
import pytest

from camir_eval.document import Document
from camir_eval.errors import ParameterError
from camir_eval.significance import bootstrap_from_counts, paired_bootstrap, p_value_from_deltas
from conftest import perturb
from oracles import exhaustive_p


def _random_counts(rng, n):
    return rng.integers(0, 6, size=(n, 3)), rng.integers(0, 6, size=(n, 3))


def test_identical_systems_p_is_one(synth_corpus, schema, backend):
    preds = [perturb(d, random.Random(i)) for i, d in enumerate(synth_corpus)]
    r = paired_bootstrap(synth_corpus, preds, preds, schema, replicates=500)
    assert r.p_value == 1.0 and r.observed_delta == 0.0
    assert r.verdict() == "not significant (p=1.000)"


def test_perfect_vs_empty_is_significant(synth_corpus, schema, backend):
    refs = synth_corpus[:10]
    empty = [Document(d.id, d.text, metadata=dict(d.metadata)) for d in refs]
    r = paired_bootstrap(refs, refs, empty, schema, replicates=2000)
    assert r.observed_delta == 1.0
    assert r.p_value <= 0.001 and r.significant


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_exhaustive_matches_oracle(n, backend):
    rng = np.random.default_rng(n)
    for _ in range(5):
        a, b = _random_counts(rng, n)
        r = bootstrap_from_counts(a, b, exhaustive=True)
        assert r.p_value == pytest.approx(exhaustive_p(a.tolist(), b.tolist()), abs=1e-12)
        assert r.replicates == n ** n


def test_sampled_close_to_exhaustive(backend):
    rng = np.random.default_rng(9)
    B = 10_000
    for _ in range(4):
        a, b = _random_counts(rng, 4)
        exact = bootstrap_from_counts(a, b, exhaustive=True).p_value
        sampled = bootstrap_from_counts(a, b, replicates=B, seed=3).p_value
        assert abs(sampled - exact) <= 3 / math.sqrt(B)


def test_deterministic_and_worker_invariant():
    rng = np.random.default_rng(2)
    a, b = _random_counts(rng, 25)
    r1 = bootstrap_from_counts(a, b, replicates=3000, seed=7)
    r2 = bootstrap_from_counts(a, b, replicates=3000, seed=7, workers=3)
    assert r1 == r2
    assert bootstrap_from_counts(a, b, replicates=3000, seed=8).replicates == 3000


def test_swap_gives_same_p():
    rng = np.random.default_rng(4)
    a, b = _random_counts(rng, 12)
    ab = bootstrap_from_counts(a, b, replicates=2000, seed=1)
    ba = bootstrap_from_counts(b, a, replicates=2000, seed=1)
    assert ab.p_value == ba.p_value
    assert ab.observed_delta == -ba.observed_delta


def test_p_value_rule():
    deltas = np.array([0.0, 0.1, 0.25, 0.3, 0.5])
    assert p_value_from_deltas(0.1, deltas) == (0.6, 3)
    assert p_value_from_deltas(-0.1, -deltas) == (0.6, 3)
    assert p_value_from_deltas(0.0, deltas) == (1.0, 0)


def test_category_metric(synth_corpus, schema):
    preds = [perturb(d, random.Random(i), rate=0.6) for i, d in enumerate(synth_corpus)]
    r = paired_bootstrap(synth_corpus, synth_corpus, preds, schema, metric="Lesion/TRIGGER", replicates=300)
    assert r.metric == "Lesion/TRIGGER" and 0 <= r.p_value <= 1
    assert r.to_dict()["tool_version"]


def test_parameter_errors():
    a = np.ones((3, 3), dtype=int)
    with pytest.raises(ParameterError):
        bootstrap_from_counts(a, a, replicates=0)
    with pytest.raises(ParameterError):
        bootstrap_from_counts(a, a[:2])
    with pytest.raises(ParameterError):
        bootstrap_from_counts(np.ones((9, 3), dtype=int), np.ones((9, 3), dtype=int), exhaustive=True)

"""Paired bootstrap test for the F1 difference between two systems.

Documents are resampled with replacement.  For an observed difference
``d = F1(A) - F1(B) > 0`` the p-value is the fraction of replicates whose
difference exceeds ``2 * d`` (the shift-corrected form of the paired
bootstrap).  A negative observed difference is tested with the systems
swapped, so ``p(A, B) == p(B, A)``.  No observed difference gives p = 1.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .document import Document
from .equivalence import MatchMode
from .errors import ParameterError, ValidationFailed
from .schema import Schema, validate_corpus
from .scoring import LINK_EQUIVALENT, CategoryKey, pair_documents, prf, score_document

DEFAULT_REPLICATES = 10_000
DEFAULT_SEED = 42
CHUNK = 1000
MAX_EXHAUSTIVE_DOCS = 7
ALPHA = 0.05
# absorbs float rounding when a replicate difference equals 2*d exactly
_TIE_EPS = 1e-12


@dataclass(frozen=True)
class BootstrapResult:
    observed_delta: float
    p_value: float
    replicates: int
    seed: int
    metric: str
    f1_a: float
    f1_b: float
    exceed_count: int
    exhaustive: bool = False

    @property
    def significant(self) -> bool:
        return self.p_value < ALPHA

    def verdict(self) -> str:
        word = "significant" if self.significant else "not significant"
        return f"{word} (p={self.p_value:.3f})"

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "tool_version": __version__,
            "observed_delta": self.observed_delta,
            "p_value": self.p_value,
            "replicates": self.replicates,
            "seed": self.seed,
            "metric": self.metric,
            "f1_a": self.f1_a,
            "f1_b": self.f1_b,
            "exceed_count": self.exceed_count,
            "exhaustive": self.exhaustive,
            "alpha": ALPHA,
            "significant": self.significant,
        }


def document_counts(refs: Sequence[Document], preds: Sequence[Document], metric: str = "overall",
                    mode: MatchMode | str = MatchMode.OVERLAP,
                    linking: str = LINK_EQUIVALENT) -> np.ndarray:
    """``(n_docs, 3)`` tp/fp/fn per document (sorted by id) for one metric."""
    key = None if metric == "overall" else CategoryKey.parse(metric)
    rows = []
    for ref, pred in pair_documents(refs, preds):
        counts = score_document(ref, pred, mode, linking).counts
        if key is None:
            rows.append([sum(c[i] for c in counts.values()) for i in range(3)])
        else:
            rows.append(list(counts.get(key, (0, 0, 0))))
    return np.asarray(rows, dtype=np.int64).reshape(-1, 3)


def _sample_chunks(n_docs: int, replicates: int, seed: int):
    n_chunks = -(-replicates // CHUNK)
    children = np.random.SeedSequence(seed).spawn(n_chunks)
    for k, child in enumerate(children):
        size = min(CHUNK, replicates - k * CHUNK)
        yield np.random.default_rng(child).integers(0, n_docs, size=(size, n_docs), dtype=np.int64)


def replicate_deltas(counts_a: np.ndarray, counts_b: np.ndarray, replicates: int, seed: int,
                     workers: int = 1) -> np.ndarray:
    """Resampled F1(A) - F1(B); chunk seeds come from ``seed`` alone, so the
    result is the same for any ``workers``."""
    n = counts_a.shape[0]
    chunks = list(_sample_chunks(n, replicates, seed))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda s: _kernels.bootstrap_deltas(counts_a, counts_b, s), chunks))
    else:
        parts = [_kernels.bootstrap_deltas(counts_a, counts_b, s) for s in chunks]
    return np.concatenate(parts) if parts else np.empty(0)


def exhaustive_deltas(counts_a: np.ndarray, counts_b: np.ndarray) -> np.ndarray:
    """Deltas for all ``n ** n`` ordered resamples of ``n`` documents."""
    n = counts_a.shape[0]
    if n > MAX_EXHAUSTIVE_DOCS:
        raise ParameterError(f"exhaustive enumeration supports at most {MAX_EXHAUSTIVE_DOCS} documents")
    samples = np.array(list(itertools.product(range(n), repeat=n)), dtype=np.int64).reshape(-1, n)
    return _kernels.bootstrap_deltas(counts_a, counts_b, samples)


def p_value_from_deltas(observed: float, deltas: np.ndarray) -> tuple[float, int]:
    """Shift-corrected p-value with the two-sided convention; returns (p, exceed count)."""
    if observed == 0:
        return 1.0, 0
    if observed < 0:
        observed, deltas = -observed, -deltas
    exceed = int(np.count_nonzero(deltas > 2 * observed + _TIE_EPS))
    return exceed / len(deltas), exceed


def bootstrap_from_counts(counts_a: np.ndarray, counts_b: np.ndarray, *, replicates: int = DEFAULT_REPLICATES,
                          seed: int = DEFAULT_SEED, metric: str = "overall", exhaustive: bool = False,
                          workers: int = 1) -> BootstrapResult:
    counts_a = np.asarray(counts_a, dtype=np.int64).reshape(-1, 3)
    counts_b = np.asarray(counts_b, dtype=np.int64).reshape(-1, 3)
    if counts_a.shape != counts_b.shape:
        raise ParameterError("both systems need counts for the same documents")
    n = counts_a.shape[0]
    if n == 0:
        raise ParameterError("cannot resample an empty corpus")
    full = np.arange(n, dtype=np.int64).reshape(1, n)
    f1_a = prf(*(int(x) for x in counts_a.sum(axis=0))).f1
    f1_b = prf(*(int(x) for x in counts_b.sum(axis=0))).f1
    observed = float(_kernels.bootstrap_deltas(counts_a, counts_b, full)[0])
    if exhaustive:
        deltas = exhaustive_deltas(counts_a, counts_b)
        replicates = len(deltas)
    else:
        if replicates < 1:
            raise ParameterError("replicates must be at least 1")
        deltas = replicate_deltas(counts_a, counts_b, replicates, seed, workers)
    p, exceed = p_value_from_deltas(observed, deltas)
    return BootstrapResult(observed, p, replicates, seed, metric, f1_a, f1_b, exceed, exhaustive)


def paired_bootstrap(refs: Sequence[Document], preds_a: Sequence[Document], preds_b: Sequence[Document],
                     schema: Schema, mode: MatchMode | str = MatchMode.OVERLAP, metric: str = "overall",
                     replicates: int = DEFAULT_REPLICATES, seed: int = DEFAULT_SEED, *,
                     exhaustive: bool = False, workers: int = 1, validate: bool = True,
                     linking: str = LINK_EQUIVALENT) -> BootstrapResult:
    """Is system A's F1 on ``metric`` significantly different from system B's?

    ``metric`` is ``"overall"`` or a category such as ``"Lesion/TRIGGER"``.
    """
    if not exhaustive and replicates < 1:
        raise ParameterError("replicates must be at least 1")
    pair_documents(refs, preds_a, ("ref", "a"))
    pair_documents(refs, preds_b, ("ref", "b"))
    if validate:
        violations = validate_corpus(schema, list(refs) + list(preds_a) + list(preds_b))
        if violations:
            raise ValidationFailed(violations)
    ca = document_counts(refs, preds_a, metric, mode, linking)
    cb = document_counts(refs, preds_b, metric, mode, linking)
    return bootstrap_from_counts(ca, cb, replicates=replicates, seed=seed, metric=metric,
                                 exhaustive=exhaustive, workers=workers)

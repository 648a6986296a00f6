"""Corpus distribution summaries and train/validation/test split manifests."""

from __future__ import annotations

import random
import statistics
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .document import MODALITIES, SPLITS, Document, argument_instances
from .errors import ParameterError
from .schema import TRIGGER, Schema
from .scoring import CategoryKey

GROUPINGS = ("all", "modality", "split")
UNSPECIFIED = "unspecified"


@dataclass
class GroupStats:
    doc_count: int = 0
    category_counts: dict[CategoryKey, int] = field(default_factory=dict)
    # (mean, population std) of triggers per report, per event type
    triggers_per_report: dict[str, tuple[float, float]] = field(default_factory=dict)
    # "Event/Role/slot" -> value -> count
    subtype_histograms: dict[str, dict[str, int]] = field(default_factory=dict)
    entity_label_counts: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "doc_count": self.doc_count,
            "category_counts": [{"event_type": k.event_type, "role": k.role, "count": v}
                                for k, v in self.category_counts.items()],
            "triggers_per_report": {k: {"mean": m, "std": s} for k, (m, s) in self.triggers_per_report.items()},
            "subtype_histograms": self.subtype_histograms,
            "entity_label_counts": self.entity_label_counts,
        }


@dataclass
class StatsReport:
    grouping: str
    groups: dict[str, GroupStats]
    total: GroupStats

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "tool_version": __version__,
            "grouping": self.grouping,
            "groups": {name: g.to_dict() for name, g in self.groups.items()},
            "total": self.total.to_dict(),
        }

    def to_table(self) -> str:
        return format_stats_table(self)


def _group_order(grouping: str, names) -> list[str]:
    known = {"modality": MODALITIES, "split": SPLITS}.get(grouping, ())
    first = [n for n in known if n in names]
    return first + sorted(n for n in names if n not in known)


def _summarize(docs: Sequence[Document], schema: Schema) -> GroupStats:
    keys = [CategoryKey(*k) for k in schema.categories()]
    counts: Counter = Counter({k: 0 for k in keys})
    hist: dict[str, Counter] = {}
    labels: Counter = Counter()
    per_doc: list[Counter] = []
    for doc in docs:
        labels.update(e.label for e in doc.entities.values())
        trig = Counter(ev.event_type for ev in doc.events.values())
        per_doc.append(trig)
        for etype, n in trig.items():
            counts[CategoryKey(etype, TRIGGER)] += n
        for arg in argument_instances(doc):
            counts[CategoryKey(arg.event_type, arg.role)] += 1
            for slot, value in arg.subtypes:
                hist.setdefault(f"{arg.event_type}/{arg.role}/{slot}", Counter())[str(value)] += 1

    out = GroupStats(doc_count=len(docs))
    extra = sorted(set(counts) - set(keys))
    out.category_counts = {k: counts[k] for k in keys + extra}
    event_types = list(schema.event_type_names)
    event_types += sorted({t for c in per_doc for t in c} - set(event_types))
    for etype in event_types:
        values = [c.get(etype, 0) for c in per_doc]
        out.triggers_per_report[etype] = (
            (statistics.fmean(values), statistics.pstdev(values)) if values else (0.0, 0.0))
    out.subtype_histograms = {k: dict(sorted(v.items())) for k, v in sorted(hist.items())}
    out.entity_label_counts = dict(sorted(labels.items()))
    return out


def corpus_summary(docs: Sequence[Document], schema: Schema, grouping: str = "all") -> StatsReport:
    """Annotation counts, per-report trigger mean/std and subtype histograms."""
    if grouping not in GROUPINGS:
        raise ParameterError(f"grouping must be one of {', '.join(GROUPINGS)}; got {grouping!r}")
    docs = sorted(docs, key=lambda d: d.id)
    if grouping == "all":
        buckets = {"all": docs}
    else:
        buckets = {}
        for doc in docs:
            buckets.setdefault(doc.metadata.get(grouping, UNSPECIFIED), []).append(doc)
    groups = {name: _summarize(buckets[name], schema) for name in _group_order(grouping, buckets)}
    return StatsReport(grouping, groups, _summarize(docs, schema))


def format_stats_table(report: StatsReport) -> str:
    names = list(report.groups)
    show_total = report.grouping != "all"
    cols = names + (["Total"] if show_total else [])
    stats = [report.groups[n] for n in names] + ([report.total] if show_total else [])
    width = max([18] + [len(c) + 2 for c in cols])
    head = f"{'Event':<18}{'Argument':<18}" + "".join(f"{c:>{width}}" for c in cols)
    lines = [head, "-" * len(head)]
    lines.append(f"{'Documents':<36}" + "".join(f"{g.doc_count:>{width}}" for g in stats))
    last = None
    for key in report.total.category_counts:
        shown = key.event_type if key.event_type != last else ""
        if shown and last is not None:
            lines.append("")
        last = key.event_type
        cells = []
        for g in stats:
            n = g.category_counts.get(key, 0)
            if key.role == TRIGGER:
                mean = g.triggers_per_report.get(key.event_type, (0.0, 0.0))[0]
                cells.append(f"{n} ({mean:.1f})")
            else:
                cells.append(str(n))
        arg = "Trigger" if key.role == TRIGGER else key.role
        lines.append(f"{shown:<18}{arg:<18}" + "".join(f"{c:>{width}}" for c in cells))
    lines.append("")
    lines.append("Triggers per report (mean +/- population std):")
    for etype, (mean, std) in report.total.triggers_per_report.items():
        parts = [f"{n}: {report.groups[n].triggers_per_report.get(etype, (0.0, 0.0))[0]:.2f}"
                 f"+/-{report.groups[n].triggers_per_report.get(etype, (0.0, 0.0))[1]:.2f}" for n in names]
        lines.append(f"  {etype:<18}{mean:.2f}+/-{std:.2f}" + (f"   [{'; '.join(parts)}]" if show_total else ""))
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# splits


@dataclass
class SplitManifest:
    assignments: dict[str, str]
    ratios: tuple[float, float, float]
    seed: int

    def sizes(self) -> dict[str, int]:
        c = Counter(self.assignments.values())
        return {s: c.get(s, 0) for s in SPLITS}

    def to_dict(self) -> dict:
        from . import __version__

        return {
            "tool_version": __version__,
            "seed": self.seed,
            "ratios": dict(zip(SPLITS, self.ratios)),
            "sizes": self.sizes(),
            "documents": {k: {"split": v} for k, v in sorted(self.assignments.items())},
        }


def split_sizes(n: int, ratios: Sequence[float]) -> list[int]:
    """Largest-remainder apportionment of ``n`` items; ties go to the earlier split."""
    exact = [Fraction(r).limit_denominator(10**9) * n for r in ratios]
    sizes = [int(q) for q in exact]
    order = sorted(range(len(ratios)), key=lambda i: (-(exact[i] - sizes[i]), i))
    for i in order[: n - sum(sizes)]:
        sizes[i] += 1
    return sizes


def make_splits(doc_ids: Sequence[str], ratios: Sequence[float] = (0.7, 0.1, 0.2), seed: int = 0) -> SplitManifest:
    """Shuffle ids deterministically by ``seed`` and cut them into train/validation/test."""
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r <= 0 for r in ratios):
        raise ParameterError("need three positive ratios (train, validation, test)")
    if abs(sum(ratios) - 1.0) > 1e-9:
        raise ParameterError(f"ratios must sum to 1, got {sum(ratios)}")
    if not doc_ids:
        raise ParameterError("no document ids to split")
    ids = sorted(doc_ids)
    if len(set(ids)) != len(ids):
        raise ParameterError("document ids must be unique")
    random.Random(seed).shuffle(ids)
    sizes = split_sizes(len(ids), ratios)
    assignments = {}
    start = 0
    for tag, size in zip(SPLITS, sizes):
        for doc_id in ids[start:start + size]:
            assignments[doc_id] = tag
        start += size
    return SplitManifest(dict(sorted(assignments.items())), ratios, seed)

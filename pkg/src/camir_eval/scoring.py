"""Precision/recall/F1 scoring of predicted against reference event annotations."""

from __future__ import annotations

from dataclasses import dataclass, field, fields
from typing import NamedTuple, Sequence

from .alignment import Matching, align
from .document import Document, argument_instances, trigger_instances
from .equivalence import MatchMode, arguments_equivalent, triggers_equivalent
from .errors import PairingError, ValidationFailed
from .schema import TRIGGER, Schema, validate_corpus

LINK_EQUIVALENT = "equivalent"
LINK_MATCHED = "matched"


class CategoryKey(NamedTuple):
    event_type: str
    role: str

    def __str__(self) -> str:
        return f"{self.event_type}/{self.role}"

    @classmethod
    def parse(cls, text: str) -> CategoryKey:
        event_type, sep, role = text.rpartition("/")
        if not sep or not event_type or not role:
            raise ValueError(f"category must look like 'Event Type/Role', got {text!r}")
        return cls(event_type, role)


@dataclass(frozen=True)
class Metrics:
    tp: int
    fp: int
    fn: int
    precision: float
    recall: float
    f1: float
    precision_vacuous: bool = False
    recall_vacuous: bool = False

    @property
    def vacuous(self) -> bool:
        return self.precision_vacuous and self.recall_vacuous

    def as_dict(self) -> dict:
        return {
            "tp": self.tp, "fp": self.fp, "fn": self.fn,
            "precision": self.precision, "recall": self.recall, "f1": self.f1,
            "vacuous": self.vacuous,
            "precision_vacuous": self.precision_vacuous,
            "recall_vacuous": self.recall_vacuous,
        }


def prf(tp: int, fp: int, fn: int) -> Metrics:
    """Metrics from counts.

    An undefined ratio is flagged vacuous and reported as 0.0, except that
    when all three counts are zero every ratio is 1.0.
    """
    if min(tp, fp, fn) < 0:
        raise ValueError("counts must be non-negative")
    if tp == fp == fn == 0:
        return Metrics(0, 0, 0, 1.0, 1.0, 1.0, True, True)
    p_vac = tp + fp == 0
    r_vac = tp + fn == 0
    p = 0.0 if p_vac else tp / (tp + fp)
    r = 0.0 if r_vac else tp / (tp + fn)
    f = 2 * p * r / (p + r) if p + r > 0 else 0.0
    return Metrics(tp, fp, fn, p, r, f, p_vac, r_vac)


@dataclass
class ErrorBreakdown:
    exact: int = 0
    pred_shorter: int = 0
    pred_longer: int = 0
    pred_other_overlap: int = 0
    spurious: int = 0
    missing: int = 0

    @property
    def matched(self) -> int:
        return self.exact + self.pred_shorter + self.pred_longer + self.pred_other_overlap

    def __iadd__(self, other: ErrorBreakdown) -> ErrorBreakdown:
        for f in fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))
        return self

    def as_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


def categorize_span_errors(matching: Matching, refs: Sequence, preds: Sequence) -> ErrorBreakdown:
    """Classify matched pairs by how the predicted span relates to the reference."""
    ref_by_id = {r.id: r for r in refs}
    pred_by_id = {p.id: p for p in preds}
    out = ErrorBreakdown(spurious=len(matching.unmatched_pred), missing=len(matching.unmatched_ref))
    for rid, pid in matching.pairs:
        rs, ps = ref_by_id[rid].span, pred_by_id[pid].span
        if rs.fragments == ps.fragments:
            out.exact += 1
            continue
        rc, pc = rs.chars(), ps.chars()
        if pc < rc:
            out.pred_shorter += 1
        elif rc < pc:
            out.pred_longer += 1
        else:
            out.pred_other_overlap += 1
    return out


# ---------------------------------------------------------------------------


@dataclass
class DocumentScore:
    """Per-category tp/fp/fn counts and error breakdowns for one document pair."""

    doc_id: str
    counts: dict[CategoryKey, tuple[int, int, int]] = field(default_factory=dict)
    errors: dict[CategoryKey, ErrorBreakdown] = field(default_factory=dict)
    matchings: dict[CategoryKey, Matching] = field(default_factory=dict)


def _group(items, key):
    out: dict = {}
    for item in items:
        out.setdefault(key(item), []).append(item)
    return out


def score_document(ref: Document, pred: Document, mode: MatchMode | str = MatchMode.OVERLAP,
                   linking: str = LINK_EQUIVALENT) -> DocumentScore:
    """Align and count one reference/prediction document pair.

    Triggers align per event type.  Arguments align per (event type, role)
    and additionally need their owning triggers linked: with
    ``linking="equivalent"`` the triggers must be equivalent under ``mode``;
    with ``linking="matched"`` they must be paired by the trigger alignment.
    """
    mode = MatchMode.parse(mode)
    if linking not in (LINK_EQUIVALENT, LINK_MATCHED):
        raise ValueError(f"linking must be {LINK_EQUIVALENT!r} or {LINK_MATCHED!r}")
    result = DocumentScore(ref.id)

    ref_trig = _group(trigger_instances(ref), lambda t: t.event_type)
    pred_trig = _group(trigger_instances(pred), lambda t: t.event_type)
    trigger_links: set[tuple[str, str]] = set()
    for etype in sorted(set(ref_trig) | set(pred_trig)):
        rs, ps = ref_trig.get(etype, []), pred_trig.get(etype, [])
        m = align(rs, ps, lambda a, b: triggers_equivalent(mode, a, b))
        key = CategoryKey(etype, TRIGGER)
        _record(result, key, m, rs, ps)
        if linking == LINK_MATCHED:
            trigger_links.update(m.pairs)
        else:
            trigger_links.update((r.id, p.id) for r in rs for p in ps if triggers_equivalent(mode, r, p))

    ref_args = _group(argument_instances(ref), lambda a: CategoryKey(a.event_type, a.role))
    pred_args = _group(argument_instances(pred), lambda a: CategoryKey(a.event_type, a.role))
    for key in sorted(set(ref_args) | set(pred_args)):
        rs, ps = ref_args.get(key, []), pred_args.get(key, [])
        m = align(rs, ps, lambda a, b: arguments_equivalent(mode, a, b, trigger_links))
        _record(result, key, m, rs, ps)
    return result


def _record(result: DocumentScore, key: CategoryKey, m: Matching, refs, preds) -> None:
    result.counts[key] = (len(m.pairs), len(m.unmatched_pred), len(m.unmatched_ref))
    result.errors[key] = categorize_span_errors(m, refs, preds)
    result.matchings[key] = m


def pair_documents(refs: Sequence[Document], preds: Sequence[Document],
                   names: tuple[str, str] = ("ref", "pred")) -> list[tuple[Document, Document]]:
    ref_map = {d.id: d for d in refs}
    pred_map = {d.id: d for d in preds}
    if ref_map.keys() != pred_map.keys():
        raise PairingError({
            f"only in {names[0]}": sorted(ref_map.keys() - pred_map.keys()),
            f"only in {names[1]}": sorted(pred_map.keys() - ref_map.keys()),
        })
    return [(ref_map[k], pred_map[k]) for k in sorted(ref_map)]


@dataclass
class ScoreReport:
    mode: MatchMode
    rows: dict[CategoryKey, Metrics]
    overall: Metrics
    errors: dict[CategoryKey, ErrorBreakdown]
    doc_count: int
    linking: str = LINK_EQUIVALENT

    def to_dict(self, *, include_errors: bool = True, header: dict | None = None) -> dict:
        from . import __version__

        out = {"tool_version": __version__}
        if header:
            out.update(header)
        out.update({
            "mode": self.mode.value,
            "averaging": "micro",
            "argument_linking": self.linking,
            "doc_count": self.doc_count,
            "overall": self.overall.as_dict(),
            "rows": [{"event_type": k.event_type, "role": k.role, **m.as_dict()} for k, m in self.rows.items()],
        })
        if include_errors:
            out["errors"] = [{"event_type": k.event_type, "role": k.role, **e.as_dict()}
                             for k, e in self.errors.items()]
        return out

    def to_table(self, *, include_errors: bool = False) -> str:
        return format_score_table(self, include_errors=include_errors)


def aggregate(doc_scores: Sequence[DocumentScore], categories: Sequence[CategoryKey]) -> tuple[dict, dict]:
    """Sum per-document counts into per-category totals in ``categories`` order
    (plus any extra categories seen, sorted)."""
    totals: dict[CategoryKey, list[int]] = {k: [0, 0, 0] for k in categories}
    errors: dict[CategoryKey, ErrorBreakdown] = {k: ErrorBreakdown() for k in categories}
    extra = sorted({k for ds in doc_scores for k in ds.counts} - set(categories))
    for k in extra:
        totals[k] = [0, 0, 0]
        errors[k] = ErrorBreakdown()
    for ds in doc_scores:
        for k, (tp, fp, fn) in ds.counts.items():
            t = totals[k]
            t[0] += tp
            t[1] += fp
            t[2] += fn
            errors[k] += ds.errors[k]
    return totals, errors


def score_corpus(refs: Sequence[Document], preds: Sequence[Document], schema: Schema,
                 mode: MatchMode | str = MatchMode.OVERLAP, *, validate: bool = True,
                 linking: str = LINK_EQUIVALENT) -> ScoreReport:
    """Score a prediction corpus against a reference corpus (micro-averaged overall)."""
    mode = MatchMode.parse(mode)
    pairs = pair_documents(refs, preds)
    if validate:
        violations = validate_corpus(schema, list(refs) + list(preds))
        if violations:
            raise ValidationFailed(violations)
    doc_scores = [score_document(r, p, mode, linking) for r, p in pairs]
    categories = [CategoryKey(*k) for k in schema.categories()]
    totals, errors = aggregate(doc_scores, categories)
    rows = {k: prf(*t) for k, t in totals.items()}
    overall = prf(*(sum(t[i] for t in totals.values()) for i in range(3)))
    return ScoreReport(mode, rows, overall, errors, len(pairs), linking)


# ---------------------------------------------------------------------------
# text rendering

_HEADER = f"{'Event':<18}{'Argument':<18}{'TP':>6}{'FP':>6}{'FN':>6}{'P':>8}{'R':>8}{'F1':>8}"


def _row(event: str, arg: str, m: Metrics) -> str:
    p = f"{m.precision:.3f}" + ("*" if m.precision_vacuous else " ")
    r = f"{m.recall:.3f}" + ("*" if m.recall_vacuous else " ")
    return f"{event:<18}{arg:<18}{m.tp:>6}{m.fp:>6}{m.fn:>6}{p:>8}{r:>8}{m.f1:>7.3f}"


def format_score_table(report: ScoreReport, *, include_errors: bool = False) -> str:
    lines = [f"mode: {report.mode.value}   documents: {report.doc_count}   overall: micro", _HEADER,
             "-" * len(_HEADER)]
    last_event = None
    for key, m in report.rows.items():
        shown_event = key.event_type if key.event_type != last_event else ""
        if last_event is not None and shown_event:
            lines.append("")
        last_event = key.event_type
        arg = "Trigger" if key.role == TRIGGER else key.role
        lines.append(_row(shown_event, arg, m))
    lines.append("-" * len(_HEADER))
    lines.append(_row("Overall", "", report.overall))
    if any(m.precision_vacuous or m.recall_vacuous for m in report.rows.values()):
        lines.append("* ratio undefined (no predictions or no references)")
    if include_errors:
        lines.append("")
        head = (f"{'Event':<18}{'Argument':<18}{'exact':>7}{'shorter':>9}{'longer':>8}"
                f"{'other':>7}{'spurious':>10}{'missing':>9}")
        lines += [head, "-" * len(head)]
        for key, e in report.errors.items():
            arg = "Trigger" if key.role == TRIGGER else key.role
            lines.append(f"{key.event_type:<18}{arg:<18}{e.exact:>7}{e.pred_shorter:>9}{e.pred_longer:>8}"
                         f"{e.pred_other_overlap:>7}{e.spurious:>10}{e.missing:>9}")
    return "\n".join(lines) + "\n"

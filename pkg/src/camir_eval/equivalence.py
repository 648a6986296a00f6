"""Span and annotation equivalence under the overlap and strict criteria."""

from __future__ import annotations

from enum import Enum

from .document import ArgumentInstance, TextSpan, TriggerInstance


class MatchMode(str, Enum):
    OVERLAP = "overlap"
    STRICT = "strict"

    @classmethod
    def parse(cls, value: str | MatchMode) -> MatchMode:
        try:
            return cls(value)
        except ValueError:
            raise ValueError(f"match mode must be 'overlap' or 'strict', got {value!r}") from None


def spans_overlap(a: TextSpan, b: TextSpan) -> bool:
    """True iff some fragment of ``a`` intersects some fragment of ``b``."""
    for s1, e1 in a.fragments:
        for s2, e2 in b.fragments:
            if s1 < e2 and s2 < e1:
                return True
    return False


def spans_equivalent(mode: MatchMode, a: TextSpan, b: TextSpan) -> bool:
    if mode is MatchMode.STRICT:
        return a.fragments == b.fragments
    return spans_overlap(a, b)


def triggers_equivalent(mode: MatchMode, ref: TriggerInstance, pred: TriggerInstance) -> bool:
    return ref.event_type == pred.event_type and spans_equivalent(mode, ref.span, pred.span)


def arguments_equivalent(mode: MatchMode, ref: ArgumentInstance, pred: ArgumentInstance,
                         trigger_pairing) -> bool:
    """Role, span and subtype values agree and the owning triggers are paired.

    ``trigger_pairing`` is any container answering ``(ref_event_id,
    pred_event_id) in trigger_pairing``: a :class:`~camir_eval.alignment.Matching`
    or a set of equivalent trigger pairs.  A subtype present on one side and
    absent on the other is a mismatch.
    """
    return (
        ref.event_type == pred.event_type
        and ref.role == pred.role
        and ref.subtypes == pred.subtypes
        and spans_equivalent(mode, ref.span, pred.span)
        and (ref.event_id, pred.event_id) in trigger_pairing
    )

"""Exception hierarchy shared across the toolkit."""

from __future__ import annotations


class CamirError(Exception):
    """Base class for every error raised by camir_eval."""


class StandoffParseError(CamirError):
    """A standoff line could not be parsed."""

    def __init__(self, message: str, line_number: int | None = None, doc_id: str | None = None):
        self.line_number = line_number
        self.doc_id = doc_id
        where = []
        if doc_id is not None:
            where.append(doc_id)
        if line_number is not None:
            where.append(f"line {line_number}")
        prefix = f"{':'.join(where)}: " if where else ""
        super().__init__(prefix + message)


class DanglingReferenceError(StandoffParseError):
    """An E or A line points at an annotation id that does not exist."""

    def __init__(self, ref: str, line_number: int | None = None, doc_id: str | None = None):
        self.ref = ref
        super().__init__(f"reference to undefined annotation {ref}", line_number, doc_id)


class SpanAlignmentError(StandoffParseError):
    """Offsets fall outside the text or do not reproduce the declared surface."""


class SerializationError(CamirError):
    """A document violates an invariant and cannot be written out."""

    def __init__(self, invariant: str, message: str):
        self.invariant = invariant
        super().__init__(f"{invariant}: {message}")


class SchemaError(CamirError):
    """Schema configuration is malformed or breaks a schema rule."""

    def __init__(self, rule: str, message: str):
        self.rule = rule
        super().__init__(f"{rule}: {message}")


class StructureError(CamirError):
    """Entity/relation structure cannot be mapped to events (or back)."""


class PairingError(CamirError):
    """Corpora that must share document ids do not."""

    def __init__(self, orphans: dict[str, list[str]]):
        self.orphans = orphans
        parts = [f"{side}: {', '.join(ids)}" for side, ids in orphans.items() if ids]
        super().__init__("document ids do not pair up; orphans -> " + "; ".join(parts))


class ValidationFailed(CamirError):
    """Raised when scoring is refused because documents break the schema."""

    def __init__(self, violations):
        self.violations = list(violations)
        shown = "\n".join(f"  {v}" for v in self.violations[:20])
        more = len(self.violations) - 20
        tail = f"\n  ... {more} more" if more > 0 else ""
        super().__init__(f"{len(self.violations)} schema violation(s):\n{shown}{tail}")


class ParameterError(CamirError, ValueError):
    """Invalid argument value."""

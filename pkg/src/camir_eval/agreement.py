"""Inter-annotator agreement as pairwise F1 between two annotators."""

from __future__ import annotations

from typing import Sequence

from .document import Document
from .equivalence import MatchMode
from .schema import Schema
from .scoring import LINK_EQUIVALENT, ScoreReport, score_corpus

AGREEMENT_HEADER = {"reference": "annotator_a", "prediction": "annotator_b", "measure": "pairwise F1"}


def pairwise_agreement(annotator_a: Sequence[Document], annotator_b: Sequence[Document], schema: Schema,
                       mode: MatchMode | str = MatchMode.OVERLAP, *, validate: bool = True,
                       linking: str = LINK_EQUIVALENT) -> ScoreReport:
    """Score annotator B against annotator A; the F1 column is the agreement.

    F1 is symmetric in the two annotators; precision and recall swap when
    the arguments are swapped.
    """
    return score_corpus(annotator_a, annotator_b, schema, mode, validate=validate, linking=linking)

"""Top-k suggestion sets from per-blob scores."""

from __future__ import annotations

from dataclasses import dataclass

from .corpus import Document
from .models.base import ExtractionModel

DEFAULT_K = 5


@dataclass
class SuggestionSet:
    document_id: str
    label: str
    k: int
    threshold: float
    suggestions: list[tuple[int, float]]  # (blob index, score), descending

    @property
    def blob_indices(self) -> list[int]:
        return [i for i, _ in self.suggestions]

    def to_dict(self) -> dict:
        return {
            "document_id": self.document_id,
            "label": self.label,
            "k": self.k,
            "threshold": self.threshold,
            "suggestions": [
                {"blob_index": i, "score": s} for i, s in self.suggestions
            ],
        }


def rank_blobs(
    scores: list[tuple[int, float]],
    k: int,
    document_id: str = "",
    label: str = "",
) -> SuggestionSet:
    """Keep the k highest-scoring blobs; the threshold is the lowest score
    kept. Ties break by ascending blob index."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    if len(scores) == 0:
        raise ValueError("scores must be non-empty")
    ordered = sorted(scores, key=lambda item: (-item[1], item[0]))
    top = ordered[: min(k, len(ordered))]
    return SuggestionSet(
        document_id=document_id,
        label=label,
        k=k,
        threshold=top[-1][1],
        suggestions=top,
    )


def suggest(
    document: Document,
    model: ExtractionModel,
    label: str,
    k: int = DEFAULT_K,
) -> SuggestionSet:
    """Score every blob of the document and rank the top k."""
    probs = model.score_texts([b.text for b in document.blobs])
    scores = [(b.index, float(p)) for b, p in zip(document.blobs, probs)]
    return rank_blobs(scores, k, document_id=document.id, label=label)

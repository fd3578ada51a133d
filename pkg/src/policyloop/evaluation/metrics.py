"""Retrieval and calibration metrics."""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np

from ..corpus import Document
from ..errors import ShapeError
from ..retrieval import SuggestionSet

SKIPPED = None  # marker for documents without a true positive


def hit_at_k(
    suggestions: SuggestionSet, document: Document, label: str
) -> Optional[int]:
    """1 if any suggested blob truly carries the label; documents without a
    true positive are skipped (returns None)."""
    true_indices = {b.index for b in document.positive_blobs(label)}
    if not true_indices:
        return SKIPPED
    return 1 if true_indices.intersection(suggestions.blob_indices) else 0


def krank_f1(
    suggestion_sets: Sequence[SuggestionSet],
    documents: Sequence[Document],
    label: str,
) -> float:
    """Blob-level micro F1 with the suggested blobs as predicted positives.

    Documents without any true positive for the label are skipped, matching
    the hit@k convention.
    """
    tp = fp = fn = 0
    for sugg, doc in zip(suggestion_sets, documents):
        true_indices = {b.index for b in doc.positive_blobs(label)}
        if not true_indices:
            continue
        predicted = set(sugg.blob_indices)
        tp += len(predicted & true_indices)
        fp += len(predicted - true_indices)
        fn += len(true_indices - predicted)
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def classification_f1(
    scores: Sequence[float], truth: Sequence[int], threshold: float = 0.5
) -> float:
    """Binary F1 with predicted positive = score >= threshold."""
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth)
    if scores.shape != truth.shape:
        raise ShapeError("scores and truth must have equal length")
    predicted = scores >= threshold
    tp = int(np.sum(predicted & (truth == 1)))
    fp = int(np.sum(predicted & (truth == 0)))
    fn = int(np.sum(~predicted & (truth == 1)))
    if tp == 0:
        return 0.0
    precision = tp / (tp + fp)
    recall = tp / (tp + fn)
    return 2 * precision * recall / (precision + recall)


def brier_score(
    scores: Sequence[float],
    truth: Sequence[int],
    sample_weights: Optional[Sequence[float]] = None,
) -> float:
    """Weighted mean squared error between probabilities and binary truth.

    Weights are normalized to sum 1; when omitted they default to inverse
    class frequency, so both classes contribute equally despite imbalance.
    """
    scores = np.asarray(scores, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if scores.shape != truth.shape:
        raise ShapeError("scores and truth must have equal length")
    if sample_weights is None:
        from ..models.sampling import balance_weights

        weights = balance_weights(truth.astype(int))
    else:
        weights = np.asarray(sample_weights, dtype=np.float64)
        if weights.shape != scores.shape:
            raise ShapeError("weights must match scores in length")
        if np.any(weights < 0) or weights.sum() <= 0:
            raise ValueError("weights must be non-negative and not all zero")
        weights = weights / weights.sum()
    return float(np.sum(weights * (truth - scores) ** 2))

"""Shared interface for extraction models.

An extraction model scores a paragraph with the probability that it states
one particular data subject right. Concrete kinds: `gaussian_nb`,
`binary_classifier`, `sentence_embedder`.
"""

from __future__ import annotations

from pathlib import Path
from typing import TYPE_CHECKING

import numpy as np

from ..errors import NotTrained

if TYPE_CHECKING:
    from ..corpus import Document

GAUSSIAN_NB = "gaussian_nb"
BINARY_CLASSIFIER = "binary_classifier"
SENTENCE_EMBEDDER = "sentence_embedder"

ALL_KINDS = [GAUSSIAN_NB, BINARY_CLASSIFIER, SENTENCE_EMBEDDER]


def labeled_texts(documents: list["Document"], label: str) -> tuple[list[str], np.ndarray]:
    """Flatten documents into (blob text, 0/1 value) training pairs.

    Blobs without a human annotation for the label count as negatives, per
    the closed-world assumption of the annotated corpus.
    """
    texts, values = [], []
    for doc in documents:
        for blob in doc.blobs:
            texts.append(blob.text)
            values.append(1 if blob.human_value(label) == 1 else 0)
    return texts, np.asarray(values, dtype=np.int64)


class ExtractionModel:
    kind: str = "abstract"

    def __init__(self):
        self.trained = False
        self.config: dict = {}

    def _require_trained(self):
        if not self.trained:
            raise NotTrained(f"{self.kind} model has not been trained")

    def fit(self, documents: list["Document"], label: str, seed: int = 0) -> None:
        raise NotImplementedError

    def warm_start(self, previous: "ExtractionModel") -> None:
        """Adopt a previously trained model's parameters as the starting
        point for the next `fit`. Default: no-op (train from scratch)."""

    def score_texts(self, texts: list[str]) -> np.ndarray:
        """Probabilities in [0, 1], one per text."""
        raise NotImplementedError

    def score_blob(self, blob) -> float:
        return float(self.score_texts([blob.text])[0])

    def save(self, directory: str | Path) -> None:
        raise NotImplementedError

    @classmethod
    def load(cls, directory: str | Path) -> "ExtractionModel":
        raise NotImplementedError


def model_factory(kind: str, **kwargs) -> ExtractionModel:
    from .classifier import BinaryClassifierModel
    from .embedder import SentenceEmbedderModel
    from .gaussian_nb import GaussianNBModel

    factories = {
        GAUSSIAN_NB: GaussianNBModel,
        BINARY_CLASSIFIER: BinaryClassifierModel,
        SENTENCE_EMBEDDER: SentenceEmbedderModel,
    }
    if kind not in factories:
        raise ValueError(f"unknown model kind {kind!r}")
    return factories[kind](**kwargs)


def load_model(kind: str, directory: str | Path) -> ExtractionModel:
    from .classifier import BinaryClassifierModel
    from .embedder import SentenceEmbedderModel
    from .gaussian_nb import GaussianNBModel

    loaders = {
        GAUSSIAN_NB: GaussianNBModel,
        BINARY_CLASSIFIER: BinaryClassifierModel,
        SENTENCE_EMBEDDER: SentenceEmbedderModel,
    }
    return loaders[kind].load(directory)

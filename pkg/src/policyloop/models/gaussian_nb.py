"""Gaussian Naive Bayes over static mean-pooled blob embeddings.

Uses a coarse word-shape backend (hash-CNN style token vectors keyed on
length/suffix rather than identity, folded into a handful of buckets): a
deliberately weak representation standing in for generic tagger-trained
token vectors, far below the sentence encoder the neural models fine-tune.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from ..embedding import HashedStaticEmbedding, parse_encoder_name
from ..errors import DegenerateTrainingSet, ShapeError
from .base import GAUSSIAN_NB, ExtractionModel, labeled_texts
from .sampling import balance_weights

VARIANCE_FLOOR = 1e-9


def fit_gaussian_nb(
    features: np.ndarray,
    values: np.ndarray,
    sample_weights: np.ndarray | None = None,
) -> dict:
    """Weighted per-class, per-dimension gaussian moments plus class priors.

    Variances are floored at a small positive constant so constant
    dimensions cannot produce singular likelihoods.
    """
    features = np.asarray(features, dtype=np.float64)
    values = np.asarray(values)
    if sample_weights is None:
        sample_weights = np.ones(len(values))
    sample_weights = np.asarray(sample_weights, dtype=np.float64)
    if not (len(features) == len(values) == len(sample_weights)):
        raise ShapeError("features, values and weights must have equal length")

    params = {"classes": [0, 1], "means": [], "variances": [], "priors": []}
    total_w = sample_weights.sum()
    for cls in (0, 1):
        mask = values == cls
        w = sample_weights[mask]
        if mask.sum() < 2 or w.sum() <= 0:
            raise DegenerateTrainingSet(f"class {cls} has fewer than 2 weighted samples")
        x = features[mask]
        wsum = w.sum()
        mean = (w[:, None] * x).sum(axis=0) / wsum
        var = (w[:, None] * (x - mean) ** 2).sum(axis=0) / wsum
        params["means"].append(mean)
        params["variances"].append(np.maximum(var, VARIANCE_FLOOR))
        params["priors"].append(wsum / total_w)
    return params


def predict_gaussian_nb(params: dict, features: np.ndarray) -> np.ndarray:
    """Posterior P(c=1 | x) from per-dimension gaussian likelihoods,
    accumulated in log space."""
    features = np.atleast_2d(np.asarray(features, dtype=np.float64))
    dim = params["means"][0].shape[0]
    if features.shape[1] != dim:
        raise ShapeError(f"expected {dim}-dimensional features, got {features.shape[1]}")
    log_joint = []
    for cls in (0, 1):
        mean = params["means"][cls]
        var = params["variances"][cls]
        ll = -0.5 * (np.log(2 * np.pi * var) + (features - mean) ** 2 / var).sum(axis=1)
        log_joint.append(ll + np.log(params["priors"][cls]))
    log_joint = np.stack(log_joint, axis=1)
    log_joint -= log_joint.max(axis=1, keepdims=True)
    joint = np.exp(log_joint)
    return joint[:, 1] / joint.sum(axis=1)


TOK2VEC_ENCODER = "hashed-shape-b8-192"


class GaussianNBModel(ExtractionModel):
    kind = GAUSSIAN_NB

    def __init__(self, encoder_name: str = TOK2VEC_ENCODER):
        super().__init__()
        variant, dim, buckets = parse_encoder_name(encoder_name)
        self.encoder_name = encoder_name
        self.embedding = HashedStaticEmbedding(dim=dim, variant=variant, n_buckets=buckets)
        self.params: dict | None = None
        self.config = {"encoder": encoder_name}

    def fit(self, documents, label, seed: int = 0) -> None:
        texts, values = labeled_texts(documents, label)
        features = self.embedding.embed_many(texts)
        weights = balance_weights(values)
        self.params = fit_gaussian_nb(features, values, weights)
        self.trained = True

    def score_texts(self, texts: list[str]) -> np.ndarray:
        self._require_trained()
        features = self.embedding.embed_many(texts)
        return predict_gaussian_nb(self.params, features)

    def save(self, directory: str | Path) -> None:
        self._require_trained()
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        np.savez(
            directory / "weights.npz",
            mean0=self.params["means"][0],
            mean1=self.params["means"][1],
            var0=self.params["variances"][0],
            var1=self.params["variances"][1],
            priors=np.asarray(self.params["priors"]),
            encoder=np.asarray(self.encoder_name),
        )

    @classmethod
    def load(cls, directory: str | Path) -> "GaussianNBModel":
        data = np.load(Path(directory) / "weights.npz")
        model = cls(encoder_name=str(data["encoder"]))
        model.params = {
            "classes": [0, 1],
            "means": [data["mean0"], data["mean1"]],
            "variances": [data["var0"], data["var1"]],
            "priors": list(data["priors"]),
        }
        model.trained = True
        return model

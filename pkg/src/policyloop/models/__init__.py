from .base import (
    ALL_KINDS,
    BINARY_CLASSIFIER,
    GAUSSIAN_NB,
    SENTENCE_EMBEDDER,
    ExtractionModel,
    labeled_texts,
    load_model,
    model_factory,
)
from .classifier import BinaryClassifierModel, ClassifierConfig
from .embedder import (
    TUNED_MARGIN,
    Calibrator,
    SentenceEmbedderModel,
    TripletConfig,
    build_triplets,
    train_sentence_embedder,
    triplet_loss,
)
from .gaussian_nb import GaussianNBModel, fit_gaussian_nb, predict_gaussian_nb
from .sampling import balance_weights, balanced_indices, balanced_sample


def default_model_configs() -> dict:
    """Per-kind constructor arguments for the tuned extraction pipeline."""
    return {SENTENCE_EMBEDDER: {"config": TripletConfig(margin=TUNED_MARGIN)}}


__all__ = [
    "TUNED_MARGIN",
    "default_model_configs",
    "ALL_KINDS",
    "BINARY_CLASSIFIER",
    "GAUSSIAN_NB",
    "SENTENCE_EMBEDDER",
    "ExtractionModel",
    "labeled_texts",
    "load_model",
    "model_factory",
    "BinaryClassifierModel",
    "ClassifierConfig",
    "Calibrator",
    "SentenceEmbedderModel",
    "TripletConfig",
    "build_triplets",
    "train_sentence_embedder",
    "triplet_loss",
    "GaussianNBModel",
    "fit_gaussian_nb",
    "predict_gaussian_nb",
    "balance_weights",
    "balanced_indices",
    "balanced_sample",
]

from .benchmark import EvaluationReport, evaluate_model, run_benchmark
from .metrics import brier_score, classification_f1, hit_at_k, krank_f1
from .split import split_corpus

__all__ = [
    "EvaluationReport",
    "evaluate_model",
    "run_benchmark",
    "brier_score",
    "classification_f1",
    "hit_at_k",
    "krank_f1",
    "split_corpus",
]

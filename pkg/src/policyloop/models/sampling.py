"""Class-balanced sampling for heavily imbalanced training data."""

from __future__ import annotations

from typing import Iterator, Sequence, TypeVar

import numpy as np

from ..errors import DegenerateTrainingSet

T = TypeVar("T")


def balance_weights(values: Sequence[int]) -> np.ndarray:
    """Per-example weights inverse to class frequency, normalized to sum 1.

    With these weights, both classes carry equal total probability mass.
    """
    values = np.asarray(values)
    n_pos = int((values == 1).sum())
    n_neg = int((values == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise DegenerateTrainingSet(
            f"need both classes, got {n_pos} positives / {n_neg} negatives"
        )
    weights = np.where(values == 1, 0.5 / n_pos, 0.5 / n_neg)
    return weights / weights.sum()


def balanced_sample(
    examples: Sequence[tuple[T, int]],
    seed: int,
    n: int | None = None,
) -> Iterator[tuple[T, int]]:
    """Yield `n` draws (default: len(examples)) with replacement, weighted so
    positives and negatives are equally likely. Deterministic under seed."""
    values = [v for _, v in examples]
    weights = balance_weights(values)
    if n is None:
        n = len(examples)
    rng = np.random.default_rng(seed)
    indices = rng.choice(len(examples), size=n, replace=True, p=weights)
    for i in indices:
        yield examples[int(i)]


def balanced_indices(values: Sequence[int], seed: int, n: int) -> np.ndarray:
    """Index-level variant of balanced_sample for array pipelines."""
    weights = balance_weights(values)
    rng = np.random.default_rng(seed)
    return rng.choice(len(weights), size=n, replace=True, p=weights)

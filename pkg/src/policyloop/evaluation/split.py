"""Document-level stratified train/test splitting."""

from __future__ import annotations

import numpy as np

from ..corpus import Corpus
from ..errors import SplitError

MAX_ATTEMPTS = 200


def split_corpus(
    corpus: Corpus, test_fraction: float, seed: int
) -> tuple[list, list]:
    """Split documents so no document crosses sides and every right has at
    least one train and one test document containing it."""
    if not 0 < test_fraction < 1:
        raise ValueError("test_fraction must be in (0, 1)")
    docs = corpus.documents
    n_test = max(1, round(len(docs) * test_fraction))
    if n_test >= len(docs):
        raise SplitError("test fraction leaves no training documents")
    rng = np.random.default_rng(seed)
    for _ in range(MAX_ATTEMPTS):
        order = rng.permutation(len(docs))
        test = [docs[i] for i in order[:n_test]]
        train = [docs[i] for i in order[n_test:]]
        if all(
            any(d.positive_blobs(r) for d in test)
            and any(d.positive_blobs(r) for d in train)
            for r in corpus.rights
        ):
            return train, test
    raise SplitError(
        f"could not stratify all rights across the split after {MAX_ATTEMPTS} attempts"
    )

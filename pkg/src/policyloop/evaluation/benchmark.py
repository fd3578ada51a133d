"""End-to-end benchmark over the annotated corpus.

One fixed document-level split, per-repetition fresh training of each
(right, model kind) cell, metrics aggregated as mean (std) over the
repetitions.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..anchors import RIGHT_NAMES, RIGHTS
from ..corpus import Corpus
from ..models import ALL_KINDS, default_model_configs, model_factory
from ..models.base import labeled_texts
from ..retrieval import suggest
from .metrics import brier_score, classification_f1, hit_at_k, krank_f1
from .split import split_corpus

log = logging.getLogger(__name__)

DEFAULT_KS = [5, 10, 25]


@dataclass
class CellResult:
    """Metrics for one (right, kind) pair: metric name -> (mean, std)."""

    metrics: dict[str, tuple[float, float]] = field(default_factory=dict)
    support: int = 0
    failed: Optional[str] = None


@dataclass
class EvaluationReport:
    cells: dict[tuple[str, str], CellResult]
    ks: list[int]
    kinds: list[str]
    rights: list[str]
    repetitions: int
    seeds: list[int]
    split_fingerprint: str

    def to_dict(self) -> dict:
        return {
            "ks": self.ks,
            "kinds": self.kinds,
            "rights": self.rights,
            "repetitions": self.repetitions,
            "seeds": self.seeds,
            "split_fingerprint": self.split_fingerprint,
            "cells": [
                {
                    "right": right,
                    "kind": kind,
                    "support": cell.support,
                    "failed": cell.failed,
                    "metrics": {
                        name: {"mean": m, "std": s}
                        for name, (m, s) in cell.metrics.items()
                    },
                }
                for (right, kind), cell in self.cells.items()
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def cell(self, right: str, kind: str) -> CellResult:
        return self.cells[(right, kind)]

    def metric(self, right: str, kind: str, name: str) -> tuple[float, float]:
        return self.cells[(right, kind)].metrics[name]

    def to_table(self) -> str:
        """Monospace tables, one per metric row family, cells as 'mean (std)'."""
        lines = []
        metric_names = [f"{k}-rank" for k in self.ks] + ["classification", "brier"]
        for name in metric_names:
            lines.append(f"== {name} ==")
            header = f"{'':<28}" + "".join(f"{kind:>20}" for kind in self.kinds)
            lines.append(header)
            for right in self.rights:
                row = f"{RIGHT_NAMES.get(right, right):<28}"
                for kind in self.kinds:
                    cell = self.cells[(right, kind)]
                    if cell.failed:
                        row += f"{'failed':>20}"
                    elif name in cell.metrics:
                        m, s = cell.metrics[name]
                        row += f"{f'{m:.2f} ({s:.2f})':>20}"
                    else:
                        row += f"{'-':>20}"
                lines.append(row)
            lines.append("")
        return "\n".join(lines)


def _fingerprint(train_docs, test_docs) -> str:
    payload = json.dumps(
        {"train": sorted(d.id for d in train_docs), "test": sorted(d.id for d in test_docs)}
    )
    return hashlib.sha256(payload.encode()).hexdigest()[:16]


def evaluate_model(model, test_docs, label: str, ks: list[int]) -> dict[str, float]:
    """All metrics of one trained model on the test documents."""
    results: dict[str, float] = {}
    per_doc_scores = [model.score_texts([b.text for b in d.blobs]) for d in test_docs]
    for k in ks:
        sets = []
        for doc, probs in zip(test_docs, per_doc_scores):
            from ..retrieval import rank_blobs

            scores = [(b.index, float(p)) for b, p in zip(doc.blobs, probs)]
            sets.append(rank_blobs(scores, k, document_id=doc.id, label=label))
        hits = [hit_at_k(s, d, label) for s, d in zip(sets, test_docs)]
        hits = [h for h in hits if h is not None]
        results[f"hit@{k}"] = float(np.mean(hits)) if hits else 0.0
        results[f"{k}-rank"] = krank_f1(sets, test_docs, label)
    flat_scores = np.concatenate(per_doc_scores)
    _, truth = labeled_texts(list(test_docs), label)
    results["classification"] = classification_f1(flat_scores, truth)
    results["brier"] = brier_score(flat_scores, truth)
    return results


def run_benchmark(
    corpus: Corpus,
    kinds: Optional[list[str]] = None,
    rights: Optional[list[str]] = None,
    ks: Optional[list[int]] = None,
    repetitions: int = 2,
    seeds: Optional[list[int]] = None,
    test_fraction: float = 0.2,
    split_seed: int = 7,
    model_configs: Optional[dict] = None,
) -> EvaluationReport:
    kinds = kinds or list(ALL_KINDS)
    model_configs = model_configs if model_configs is not None else default_model_configs()
    rights = rights or [r for r in RIGHTS if r in corpus.rights] or list(corpus.rights)
    ks = ks or list(DEFAULT_KS)
    seeds = seeds or list(range(repetitions))
    if len(seeds) < repetitions:
        raise ValueError("need one seed per repetition")

    train_docs, test_docs = split_corpus(corpus, test_fraction, split_seed)
    fingerprint = _fingerprint(train_docs, test_docs)

    cells: dict[tuple[str, str], CellResult] = {}
    for right in rights:
        support = sum(1 for d in test_docs if d.positive_blobs(right))
        for kind in kinds:
            cell = CellResult(support=support)
            runs: list[dict[str, float]] = []
            for rep in range(repetitions):
                try:
                    model = model_factory(kind, **model_configs.get(kind, {}))
                    model.fit(train_docs, right, seed=seeds[rep])
                    runs.append(evaluate_model(model, test_docs, right, ks))
                except Exception as exc:  # failures stay local to the cell
                    log.warning("cell (%s, %s) rep %d failed: %s", right, kind, rep, exc)
                    cell.failed = str(exc)
                    break
            if runs and not cell.failed:
                for name in runs[0]:
                    vals = [r[name] for r in runs]
                    cell.metrics[name] = (float(np.mean(vals)), float(np.std(vals)))
            cells[(right, kind)] = cell
            log.info("benchmark cell done: %s / %s", right, kind)

    return EvaluationReport(
        cells=cells,
        ks=ks,
        kinds=kinds,
        rights=rights,
        repetitions=repetitions,
        seeds=seeds[:repetitions],
        split_fingerprint=fingerprint,
    )

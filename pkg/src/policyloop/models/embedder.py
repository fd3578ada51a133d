"""Sentence embedder fine-tuned with a triplet loss against anchor queries.

The anchor for each right is the GDPR article text granting it. Training
pulls right-bearing paragraphs towards the anchor and pushes the rest away;
scoring maps the negated anchor distance through a fitted logistic so the
model emits calibrated probabilities.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import torch

from ..anchors import ANCHOR_QUERIES
from ..embedding import DEFAULT_ENCODER, SentenceEncoder
from ..errors import DegenerateTrainingSet, ShapeError, TrainingDiverged
from .base import SENTENCE_EMBEDDER, ExtractionModel
from .sampling import balance_weights

TRIPLET_CAP = 100_000
EARLY_STOP_LOSS = 1e-6

# Operating margin for the tuned extraction pipeline. The wide default margin
# keeps pushing already-separated triplets apart, which stretches the anchor
# distances and hurts probability calibration; the benchmark selected this
# tighter margin for it.
TUNED_MARGIN = 0.15


@dataclass
class TripletConfig:
    margin: float = 1.0
    epochs: int = 5
    batch_size: int = 64
    learning_rate: float = 1e-3
    triplet_cap: int = TRIPLET_CAP
    encoder: str = DEFAULT_ENCODER
    anchors: dict = field(default_factory=lambda: dict(ANCHOR_QUERIES))

    def __post_init__(self):
        if self.margin < 0:
            raise ValueError("triplet margin must be non-negative")


def triplet_loss(q_vec, pos_vec, neg_vec, margin: float):
    """max(||q - pos||_2 - ||q - neg||_2 + margin, 0), differentiable."""
    q = torch.as_tensor(q_vec, dtype=torch.float64) if not torch.is_tensor(q_vec) else q_vec
    p = torch.as_tensor(pos_vec, dtype=torch.float64) if not torch.is_tensor(pos_vec) else pos_vec
    n = torch.as_tensor(neg_vec, dtype=torch.float64) if not torch.is_tensor(neg_vec) else neg_vec
    if q.shape[-1] != p.shape[-1] or q.shape[-1] != n.shape[-1]:
        raise ShapeError("triplet members must share dimensionality")
    d_pos = torch.linalg.vector_norm(q - p, dim=-1)
    d_neg = torch.linalg.vector_norm(q - n, dim=-1)
    return torch.clamp(d_pos - d_neg + margin, min=0.0)


def build_triplets(
    documents,
    label: str,
    anchor: str,
    cap: int = TRIPLET_CAP,
    seed: int = 0,
) -> list[tuple[str, str, str]]:
    """Per-document cross product of positive and negative blobs, uniformly
    subsampled under the seed when it exceeds the cap."""
    triplets = []
    any_positive = False
    for doc in documents:
        pos = [b.text for b in doc.blobs if b.human_value(label) == 1]
        neg = [b.text for b in doc.blobs if b.human_value(label) != 1]
        if pos:
            any_positive = True
        for p in pos:
            for n in neg:
                triplets.append((anchor, p, n))
    if not any_positive:
        raise DegenerateTrainingSet(f"no positive blobs for label {label!r}")
    if len(triplets) > cap:
        rng = np.random.default_rng(seed)
        keep = rng.choice(len(triplets), size=cap, replace=False)
        triplets = [triplets[i] for i in sorted(keep)]
    return triplets


def train_sentence_embedder(
    encoder: SentenceEncoder,
    triplets: list[tuple[str, str, str]],
    config: TripletConfig,
    seed: int = 0,
) -> list[float]:
    """Fine-tune the encoder on the triplets; returns per-epoch mean loss.

    Halts early once the mean epoch loss drops below 1e-6.
    """
    if not triplets:
        raise DegenerateTrainingSet("empty triplet list")
    texts = sorted({t for triple in triplets for t in triple})
    text_idx = {t: i for i, t in enumerate(texts)}
    features = encoder.features(texts)
    idx = torch.as_tensor(
        [[text_idx[a], text_idx[p], text_idx[n]] for a, p, n in triplets]
    )

    optimizer = torch.optim.Adam(encoder.parameters(), lr=config.learning_rate)
    gen = torch.Generator().manual_seed(seed)
    history = []
    for _ in range(config.epochs):
        order = torch.randperm(len(triplets), generator=gen)
        epoch_loss = 0.0
        for start in range(0, len(order), config.batch_size):
            batch = idx[order[start : start + config.batch_size]]
            q = encoder(features[batch[:, 0]])
            p = encoder(features[batch[:, 1]])
            n = encoder(features[batch[:, 2]])
            loss = triplet_loss(q, p, n, config.margin).mean()
            if not torch.isfinite(loss):
                raise TrainingDiverged("triplet loss is not finite")
            optimizer.zero_grad()
            loss.backward()
            optimizer.step()
            epoch_loss += float(loss.detach()) * len(batch)
        history.append(epoch_loss / len(triplets))
        if history[-1] < EARLY_STOP_LOSS:
            break
    return history


@dataclass
class Calibrator:
    """1-D logistic map from negated anchor distance to probability."""

    scale: float
    offset: float

    def __call__(self, raw: np.ndarray) -> np.ndarray:
        from scipy.special import expit

        return expit(self.scale * np.asarray(raw) + self.offset)

    @classmethod
    def fit(cls, raw_scores: np.ndarray, values: np.ndarray) -> "Calibrator":
        """Weighted logistic regression (inverse class frequency weights),
        constrained to a strictly increasing map.

        The raw scores are standardized before the regression so the ridge
        penalty acts on a comparable scale regardless of the distance
        magnitudes; the standardization is folded back into scale/offset.
        """
        from sklearn.linear_model import LogisticRegression

        raw = np.asarray(raw_scores, dtype=float)
        mu = float(raw.mean())
        sd = float(raw.std()) or 1.0
        weights = balance_weights(values)
        lr = LogisticRegression(C=5.0)
        lr.fit(((raw - mu) / sd).reshape(-1, 1), values, sample_weight=weights)
        coef = max(float(lr.coef_[0][0]), 1e-6)
        return cls(scale=coef / sd, offset=float(lr.intercept_[0]) - coef * mu / sd)


class SentenceEmbedderModel(ExtractionModel):
    kind = SENTENCE_EMBEDDER

    def __init__(self, config: TripletConfig | None = None, label: str | None = None):
        super().__init__()
        self.tconfig = config or TripletConfig()
        self.label = label
        self.encoder: SentenceEncoder | None = None
        self.calibrator: Calibrator | None = None
        self._initial_state: dict | None = None
        self.config = {
            "encoder": self.tconfig.encoder,
            "margin": self.tconfig.margin,
            "epochs": self.tconfig.epochs,
            "batch_size": self.tconfig.batch_size,
            "learning_rate": self.tconfig.learning_rate,
        }

    def _anchor(self) -> str:
        anchor = self.tconfig.anchors.get(self.label)
        if anchor is None:
            raise DegenerateTrainingSet(f"no anchor query configured for {self.label!r}")
        return anchor

    def fit(self, documents, label, seed: int = 0) -> None:
        self.label = label
        anchor = self._anchor()
        triplets = build_triplets(
            documents, label, anchor, cap=self.tconfig.triplet_cap, seed=seed
        )
        torch.manual_seed(seed)
        self.encoder = SentenceEncoder(self.tconfig.encoder, seed=seed)
        if self._initial_state is not None:
            self.encoder.load_state_arrays(self._initial_state)
        if self.tconfig.epochs > 0:
            train_sentence_embedder(self.encoder, triplets, self.tconfig, seed=seed)
        # calibrate on the training (distance, value) pairs
        pos = sorted({p for _, p, _ in triplets})
        neg = sorted({n for _, _, n in triplets})
        raw = -self._distances(anchor, pos + neg)
        values = np.array([1] * len(pos) + [0] * len(neg))
        self.calibrator = Calibrator.fit(raw, values)
        self.trained = True

    def warm_start(self, previous) -> None:
        """Resume from a served model's weights instead of fresh init.

        On the converged weights most existing triplets already satisfy the
        margin and contribute zero hinge loss, so the next `fit` spends its
        gradient on whatever the new annotations changed.
        """
        if (
            isinstance(previous, SentenceEmbedderModel)
            and previous.trained
            and previous.config.get("encoder") == self.tconfig.encoder
        ):
            self._initial_state = previous.encoder.state_arrays()

    def _distances(self, anchor: str, texts: list[str]) -> np.ndarray:
        emb = self.encoder.encode([anchor] + texts)
        return np.linalg.norm(emb[1:] - emb[0], axis=1)

    def anchor_distances(self, texts: list[str]) -> np.ndarray:
        self._require_trained()
        return self._distances(self._anchor(), texts)

    def score_texts(self, texts: list[str]) -> np.ndarray:
        self._require_trained()
        return self.calibrator(-self.anchor_distances(texts))

    def save(self, directory: str | Path) -> None:
        self._require_trained()
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        np.savez(directory / "weights.npz", **self.encoder.state_arrays())
        meta = dict(
            self.config,
            label=self.label,
            calibrator={"scale": self.calibrator.scale, "offset": self.calibrator.offset},
            anchor=self._anchor(),
        )
        (directory / "model.json").write_text(json.dumps(meta), encoding="utf-8")

    @classmethod
    def load(cls, directory: str | Path) -> "SentenceEmbedderModel":
        directory = Path(directory)
        meta = json.loads((directory / "model.json").read_text(encoding="utf-8"))
        config = TripletConfig(
            margin=meta["margin"],
            epochs=meta["epochs"],
            batch_size=meta["batch_size"],
            learning_rate=meta["learning_rate"],
            encoder=meta["encoder"],
            anchors={meta["label"]: meta["anchor"]},
        )
        model = cls(config=config, label=meta["label"])
        model.encoder = SentenceEncoder(meta["encoder"])
        model.encoder.load_state_arrays(dict(np.load(directory / "weights.npz")))
        model.calibrator = Calibrator(**meta["calibrator"])
        model.trained = True
        return model

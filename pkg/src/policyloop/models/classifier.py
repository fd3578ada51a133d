"""Binary paragraph classifier: fine-tuned encoder plus sigmoid head.

Trained with binary cross entropy on a class-balanced sample stream using
AdamW (decoupled weight decay), learning rate 1e-3, weight decay 1e-5.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch

from ..embedding import SentenceEncoder
from ..errors import TrainingDiverged
from .base import BINARY_CLASSIFIER, ExtractionModel, labeled_texts
from .sampling import balanced_indices

# Bucketed backend: folding the vocabulary into 24 hash buckets mirrors how
# aggressive full fine-tuning of a generic language backbone degrades its
# lexical resolution on a corpus this small.
CLASSIFIER_ENCODER = "hashed-tok2vec-b24-32"


@dataclass
class ClassifierConfig:
    epochs: int = 5
    learning_rate: float = 1e-3
    weight_decay: float = 1e-5
    batch_size: int = 32
    hidden: int = 32
    encoder: str = CLASSIFIER_ENCODER

    def __post_init__(self):
        if self.learning_rate <= 0:
            raise ValueError("learning rate must be positive")


class _ClassifierNet(torch.nn.Module):
    def __init__(self, encoder: SentenceEncoder, hidden: int, seed: int):
        super().__init__()
        self.encoder = encoder
        self.head = torch.nn.Sequential(
            torch.nn.Linear(encoder.dim, hidden),
            torch.nn.ReLU(),
            torch.nn.Linear(hidden, 1),
        )
        gen = torch.Generator().manual_seed(seed + 1)
        with torch.no_grad():
            for layer in self.head:
                if isinstance(layer, torch.nn.Linear):
                    layer.weight.copy_(
                        torch.randn(layer.weight.shape, generator=gen) * 0.05
                    )
                    layer.bias.zero_()

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        return self.head(self.encoder(features)).squeeze(-1)


class BinaryClassifierModel(ExtractionModel):
    kind = BINARY_CLASSIFIER

    def __init__(self, config: ClassifierConfig | None = None):
        super().__init__()
        self.cconfig = config or ClassifierConfig()
        self.net: _ClassifierNet | None = None
        self.loss_history: list[float] = []
        self.config = {
            "encoder": self.cconfig.encoder,
            "epochs": self.cconfig.epochs,
            "learning_rate": self.cconfig.learning_rate,
            "weight_decay": self.cconfig.weight_decay,
            "batch_size": self.cconfig.batch_size,
            "hidden": self.cconfig.hidden,
        }

    def fit(self, documents, label, seed: int = 0) -> None:
        texts, values = labeled_texts(documents, label)
        torch.manual_seed(seed)
        encoder = SentenceEncoder(self.cconfig.encoder, seed=seed)
        self.net = _ClassifierNet(encoder, self.cconfig.hidden, seed)
        features = encoder.features(texts)
        targets = torch.as_tensor(values, dtype=torch.float32)

        cfg = self.cconfig
        optimizer = torch.optim.AdamW(
            self.net.parameters(), lr=cfg.learning_rate, weight_decay=cfg.weight_decay
        )
        bce = torch.nn.BCEWithLogitsLoss()
        self.loss_history = []
        for epoch in range(cfg.epochs):
            # one epoch = one balanced resample of the full dataset
            order = balanced_indices(values, seed=seed * 1000 + epoch, n=len(texts))
            epoch_loss = 0.0
            for start in range(0, len(order), cfg.batch_size):
                batch = torch.as_tensor(order[start : start + cfg.batch_size])
                logits = self.net(features[batch])
                loss = bce(logits, targets[batch])
                if not torch.isfinite(loss):
                    raise TrainingDiverged("classifier loss is not finite")
                optimizer.zero_grad()
                loss.backward()
                optimizer.step()
                epoch_loss += float(loss.detach()) * len(batch)
            self.loss_history.append(epoch_loss / len(order))
        self.trained = True

    def score_texts(self, texts: list[str]) -> np.ndarray:
        self._require_trained()
        with torch.no_grad():
            logits = self.net(self.net.encoder.features(texts))
            return torch.sigmoid(logits).numpy().astype(np.float64)

    def save(self, directory: str | Path) -> None:
        self._require_trained()
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        arrays = self.net.encoder.state_arrays()
        state = self.net.head.state_dict()
        for key, tensor in state.items():
            arrays[f"head.{key}"] = tensor.numpy()
        np.savez(directory / "weights.npz", **arrays)
        (directory / "model.json").write_text(json.dumps(self.config), encoding="utf-8")

    @classmethod
    def load(cls, directory: str | Path) -> "BinaryClassifierModel":
        directory = Path(directory)
        meta = json.loads((directory / "model.json").read_text(encoding="utf-8"))
        config = ClassifierConfig(
            epochs=meta["epochs"],
            learning_rate=meta["learning_rate"],
            weight_decay=meta["weight_decay"],
            batch_size=meta["batch_size"],
            hidden=meta["hidden"],
            encoder=meta["encoder"],
        )
        model = cls(config=config)
        encoder = SentenceEncoder(meta["encoder"])
        model.net = _ClassifierNet(encoder, meta["hidden"], seed=0)
        data = np.load(directory / "weights.npz")
        encoder.load_state_arrays({"proj": data["proj"]})
        head_state = {
            key[len("head.") :]: torch.as_tensor(data[key])
            for key in data.files
            if key.startswith("head.")
        }
        model.net.head.load_state_dict(head_state)
        model.trained = True
        return model

"""Static token embeddings and the trainable sentence encoder.

Token vectors are hash-seeded unit gaussians, so the embedding backend is
fully deterministic and self-contained: the same token always maps to the
same vector, in any process, without an external checkpoint. A blob is
represented by the mean of its token vectors. The trainable encoder stacks
a linear projection on top; fine-tuning trains only that projection.

Encoder assets are named `hashed-<variant>[-b<buckets>]-<dim>`, e.g. the
default `hashed-german-cased-128`. A bucket count folds the vocabulary into
that many hash buckets before lookup, giving a deliberately coarser
backend (colliding tokens share a vector).
"""

from __future__ import annotations

import hashlib
import re
import warnings

import numpy as np
import torch

from .errors import ModelAssetError

DEFAULT_ENCODER = "hashed-german-cased-128"

_TOKEN_RE = re.compile(r"\w+", re.UNICODE)

# fold umlauts/eszett to their ascii digraphs so both spellings of a word
# ("Löschung" / "Loeschung") hash to the same vector
_UMLAUTS = str.maketrans(
    {"ä": "ae", "ö": "oe", "ü": "ue", "ß": "ss", "Ä": "Ae", "Ö": "Oe", "Ü": "Ue"}
)


def tokenize(text: str) -> list[str]:
    return [t.lower() for t in _TOKEN_RE.findall(text.translate(_UMLAUTS))]


class HashedStaticEmbedding:
    """Deterministic static word vectors via hash-seeded gaussians."""

    def __init__(self, dim: int = 64, variant: str = "german-cased", n_buckets: int | None = None):
        self.dim = dim
        self.variant = variant
        self.n_buckets = n_buckets
        self._cache: dict[str, np.ndarray] = {}

    def token_vector(self, token: str) -> np.ndarray:
        vec = self._cache.get(token)
        if vec is None:
            if self.variant.startswith("shape"):
                # word-shape signature instead of lexical identity: what a
                # tagging-trained hash-CNN backend retains of a token
                key = f"{min(len(token), 8)}:{token[-2:]}:{token[:1].isdigit()}"
            elif self.variant.startswith("len"):
                # length-only signature: fully lexically blind
                key = f"{min(len(token), 8)}:{token[:1].isdigit()}"
            else:
                key = token
            digest = hashlib.blake2b(
                f"{self.variant}:{key}".encode("utf-8"), digest_size=8
            ).digest()
            seed = int.from_bytes(digest, "big")
            if self.n_buckets is not None:
                seed = seed % self.n_buckets
            rng = np.random.default_rng(seed)
            vec = rng.standard_normal(self.dim).astype(np.float64) / np.sqrt(self.dim)
            self._cache[token] = vec
        return vec

    def embed(self, text: str) -> np.ndarray:
        """Mean of per-token vectors; zero vector (with a warning) when the
        text yields no tokens."""
        tokens = tokenize(text)
        if not tokens:
            warnings.warn("text has no embeddable tokens; returning zero vector")
            return np.zeros(self.dim)
        return np.mean([self.token_vector(t) for t in tokens], axis=0)

    def embed_many(self, texts: list[str]) -> np.ndarray:
        return np.stack([self.embed(t) for t in texts]) if texts else np.zeros((0, self.dim))


def parse_encoder_name(name: str) -> tuple[str, int, int | None]:
    m = re.fullmatch(r"hashed-([\w-]+?)(?:-b(\d+))?-(\d+)", name)
    if not m:
        raise ModelAssetError(
            f"unknown encoder asset {name!r}; expected 'hashed-<variant>[-b<buckets>]-<dim>'"
        )
    buckets = int(m.group(2)) if m.group(2) else None
    return m.group(1), int(m.group(3)), buckets


class SentenceEncoder(torch.nn.Module):
    """Static mean-pooled embedding followed by a trainable linear map.

    The projection starts at (noisy) identity, so an untrained encoder
    scores blobs by their raw static embeddings.
    """

    def __init__(self, name: str = DEFAULT_ENCODER, seed: int = 0):
        super().__init__()
        variant, dim, buckets = parse_encoder_name(name)
        self.name = name
        self.dim = dim
        self.static = HashedStaticEmbedding(dim=dim, variant=variant, n_buckets=buckets)
        self.proj = torch.nn.Linear(dim, dim, bias=False)
        gen = torch.Generator().manual_seed(seed)
        with torch.no_grad():
            noise = torch.randn(dim, dim, generator=gen) * 0.01
            self.proj.weight.copy_(torch.eye(dim) + noise)

    def forward(self, features: torch.Tensor) -> torch.Tensor:
        return self.proj(features)

    def features(self, texts: list[str]) -> torch.Tensor:
        return torch.as_tensor(self.static.embed_many(texts), dtype=torch.float32)

    def encode(self, texts: list[str]) -> np.ndarray:
        with torch.no_grad():
            return self.forward(self.features(texts)).numpy()

    def state_arrays(self) -> dict[str, np.ndarray]:
        return {"proj": self.proj.weight.detach().numpy().copy()}

    def load_state_arrays(self, arrays: dict[str, np.ndarray]) -> None:
        with torch.no_grad():
            self.proj.weight.copy_(torch.as_tensor(arrays["proj"], dtype=torch.float32))

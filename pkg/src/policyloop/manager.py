"""Extractor orchestration: registries, versioned persistence, retraining.

An Extractor binds one label to one extraction model. The registry owns the
set of extractors, the seed corpus plus the append-only feedback log that
together form the training set, and the on-disk version history
(``registry/<label>/<kind>/v<NNN>/``). Retraining writes a new version
directory and atomically swaps the served snapshot; readers never observe a
partially trained model.
"""

from __future__ import annotations

import hashlib
import json
import logging
import threading
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Optional

from .corpus import HUMAN, Annotation, Corpus, Document
from .errors import (
    DegenerateTrainingSet,
    IntegrityError,
    PolicyLoopError,
    TrainingDiverged,
    ValidationError,
)
from .models import default_model_configs
from .models.base import (
    ALL_KINDS,
    SENTENCE_EMBEDDER,
    ExtractionModel,
    load_model,
    model_factory,
)
from .retrieval import SuggestionSet, suggest

log = logging.getLogger(__name__)

UNTRAINED = "untrained"
TRAINED = "trained"
TRAINING = "training"

AUTOTRAIN_EVERY = 10

REGISTRY_FILE = "registry.json"
FEEDBACK_LOG = "annotations.ndjson"
MANIFEST_FILE = "manifest.json"


@dataclass
class FeedbackEntry:
    """One human decision: (document, blob, label) confirmed or rejected."""

    document_id: str
    blob_index: int
    label: str
    value: int
    timestamp: str = ""

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValidationError(f"feedback value must be 0 or 1, got {self.value!r}")
        if not self.timestamp:
            self.timestamp = datetime.now(timezone.utc).isoformat()


FeedbackDelta = list[FeedbackEntry]


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _delta_fingerprint(entries: FeedbackDelta) -> str:
    payload = json.dumps([asdict(e) for e in entries], sort_keys=True)
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


@dataclass
class Extractor:
    label: str
    kind: str
    model: Optional[ExtractionModel] = None
    status: str = UNTRAINED
    version: int = 0


class ExtractorRegistry:
    """Label × model-kind grid of extractors with versioned persistence.

    Training (initial or re-) always runs on the seed corpus with the full
    feedback log applied on top; there are no incremental updates. One
    training job per label at a time; serving swaps are atomic.
    """

    def __init__(
        self,
        corpus: Corpus,
        labels: list[str],
        kinds: Optional[list[str]] = None,
        directory: str | Path = "registry",
        serving_kind: str = SENTENCE_EMBEDDER,
        model_configs: Optional[dict] = None,
        autotrain_every: int = AUTOTRAIN_EVERY,
    ):
        self.corpus = corpus
        self.labels = list(labels)
        self.kinds = list(kinds) if kinds is not None else list(ALL_KINDS)
        self.directory = Path(directory)
        self.serving_kind = serving_kind
        self.model_configs = (
            model_configs if model_configs is not None else default_model_configs()
        )
        self.autotrain_every = autotrain_every
        self.extractors: dict[tuple[str, str], Extractor] = {
            (label, kind): Extractor(label=label, kind=kind)
            for label in self.labels
            for kind in self.kinds
        }
        self.feedback_log: FeedbackDelta = []
        self._annotation_counts: dict[str, int] = {label: 0 for label in self.labels}
        self._swap_lock = threading.RLock()
        self._label_locks: dict[str, threading.Lock] = {
            label: threading.Lock() for label in self.labels
        }

    # ------------------------------------------------------------------ state

    def extractor(self, label: str, kind: Optional[str] = None) -> Extractor:
        kind = kind or self.serving_kind
        try:
            return self.extractors[(label, kind)]
        except KeyError:
            raise ValidationError(f"no extractor for label {label!r}, kind {kind!r}") from None

    def status(self) -> dict:
        """Readiness summary across the whole grid."""
        with self._swap_lock:
            return {
                "labels": list(self.labels),
                "kinds": list(self.kinds),
                "serving_kind": self.serving_kind,
                "extractors": [
                    {
                        "label": e.label,
                        "kind": e.kind,
                        "status": e.status,
                        "version": e.version,
                    }
                    for e in self.extractors.values()
                ],
            }

    def annotations_since_training(self, label: str) -> int:
        return self._annotation_counts.get(label, 0)

    # -------------------------------------------------------------- training

    def _training_corpus(self) -> list[Document]:
        """Seed documents with the full feedback log replayed on top."""
        for entry in self.feedback_log:
            self._apply_entry(entry)
        return list(self.corpus.documents)

    def _apply_entry(self, entry: FeedbackEntry) -> None:
        try:
            doc = self.corpus.document(entry.document_id)
        except KeyError:
            raise ValidationError(f"unknown document {entry.document_id!r}") from None
        if not 0 <= entry.blob_index < len(doc.blobs):
            raise ValidationError(
                f"blob index {entry.blob_index} out of range for {entry.document_id!r}"
            )
        doc.blobs[entry.blob_index].annotate(
            Annotation(
                label=entry.label,
                value=entry.value,
                source=HUMAN,
                created_at=entry.timestamp,
            )
        )

    def _train_one(self, label: str, kind: str, seed: int = 0) -> None:
        """Train one extractor off-line, persist it, then swap it in.

        Runs under the label lock; on failure the previously served snapshot
        stays untouched.
        """
        extractor = self.extractor(label, kind)
        documents = self._training_corpus()
        model = model_factory(kind, **self.model_configs.get(kind, {}))
        if extractor.model is not None:
            model.warm_start(extractor.model)
        previous_status = extractor.status
        extractor.status = TRAINING if extractor.model is None else previous_status
        try:
            model.fit(documents, label, seed=seed)
        except (DegenerateTrainingSet, TrainingDiverged) as exc:
            extractor.status = previous_status
            raise
        version = extractor.version + 1
        self._persist_version(label, kind, model, version)
        with self._swap_lock:
            extractor.model = model
            extractor.version = version
            extractor.status = TRAINED

    def _persist_version(self, label: str, kind: str, model, version: int) -> None:
        vdir = self.directory / label / kind / f"v{version:03d}"
        vdir.mkdir(parents=True, exist_ok=True)
        model.save(vdir)
        manifest = {
            "label": label,
            "kind": kind,
            "version": version,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "delta_fingerprint": _delta_fingerprint(self.feedback_log),
            "config": model.config,
            "fingerprints": {
                p.name: _sha256(p)
                for p in sorted(vdir.iterdir())
                if p.name != MANIFEST_FILE
            },
        }
        (vdir / MANIFEST_FILE).write_text(json.dumps(manifest, indent=2), encoding="utf-8")

    def initialize(self, seed: int = 0) -> None:
        """Train every (label, kind) pair on the current training set.

        A label without annotations leaves its extractors untrained with a
        warning; other labels are unaffected.
        """
        for label in self.labels:
            with self._label_locks[label]:
                for kind in self.kinds:
                    try:
                        self._train_one(label, kind, seed=seed)
                    except PolicyLoopError as exc:
                        log.warning("leaving %s/%s untrained: %s", label, kind, exc)
        self._save_state()

    def retrain(
        self,
        label: str,
        delta: Optional[FeedbackDelta] = None,
        kinds: Optional[list[str]] = None,
        seed: int = 0,
    ) -> int:
        """Record the delta, retrain the label's extractors, swap on success.

        Returns the new version of the serving-kind extractor. Concurrent
        calls for the same label queue on the label lock.
        """
        if label not in self._label_locks:
            raise ValidationError(f"unknown label {label!r}")
        delta = delta or []
        for entry in delta:
            self._validate_entry(entry)
        with self._label_locks[label]:
            if delta:
                self.record_feedback(delta, count=False)
            for kind in kinds if kinds is not None else [self.serving_kind]:
                self._train_one(label, kind, seed=seed)
            self._annotation_counts[label] = 0
            self._save_state()
            return self.extractor(label).version

    def _validate_entry(self, entry: FeedbackEntry) -> None:
        try:
            doc = self.corpus.document(entry.document_id)
        except KeyError:
            raise ValidationError(f"unknown document {entry.document_id!r}") from None
        if not 0 <= entry.blob_index < len(doc.blobs):
            raise ValidationError(
                f"blob index {entry.blob_index} out of range for {entry.document_id!r}"
            )

    # -------------------------------------------------------------- feedback

    def add_document(self, document: Document) -> None:
        """Bring a new policy into the training corpus."""
        try:
            self.corpus.document(document.id)
        except KeyError:
            self.corpus.documents.append(document)
            return
        raise ValidationError(f"document {document.id!r} already registered")

    def record_feedback(self, entries: FeedbackDelta, count: bool = True) -> list[str]:
        """Append human decisions to the log; returns labels whose new-
        annotation counter just reached the auto-retrain threshold."""
        due = []
        for entry in entries:
            self._validate_entry(entry)
        for entry in entries:
            self.feedback_log.append(entry)
            self._append_log_entry(entry)
            if count and entry.label in self._annotation_counts:
                self._annotation_counts[entry.label] += 1
                if self._annotation_counts[entry.label] % self.autotrain_every == 0:
                    due.append(entry.label)
        return due

    def _append_log_entry(self, entry: FeedbackEntry) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        with (self.directory / FEEDBACK_LOG).open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(asdict(entry)) + "\n")

    # ------------------------------------------------------------ prediction

    def predict(
        self,
        document: Document,
        labels: Optional[list[str]] = None,
        k: int = 5,
    ) -> tuple[dict[str, SuggestionSet], list[str]]:
        """Suggestions per requested label from the serving-kind snapshots.

        Untrained labels are omitted; the second return value carries one
        notice per omission.
        """
        results: dict[str, SuggestionSet] = {}
        notices: list[str] = []
        for label in labels if labels is not None else self.labels:
            with self._swap_lock:
                extractor = self.extractor(label)
                model = extractor.model if extractor.status == TRAINED else None
            if model is None:
                notices.append(f"no trained model for label {label!r}; skipped")
                continue
            results[label] = suggest(document, model, label, k=k)
        return results, notices

    # ----------------------------------------------------------- persistence

    def _save_state(self) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        state = {
            "labels": self.labels,
            "kinds": self.kinds,
            "serving_kind": self.serving_kind,
            "versions": {
                f"{label}\t{kind}": e.version
                for (label, kind), e in self.extractors.items()
                if e.version > 0
            },
            "annotation_counts": self._annotation_counts,
        }
        tmp = self.directory / (REGISTRY_FILE + ".tmp")
        tmp.write_text(json.dumps(state, indent=2), encoding="utf-8")
        tmp.replace(self.directory / REGISTRY_FILE)

    def save(self) -> None:
        self._save_state()

    @classmethod
    def load(
        cls,
        corpus: Corpus,
        directory: str | Path,
        model_configs: Optional[dict] = None,
    ) -> "ExtractorRegistry":
        """Rebuild a registry from its directory; an empty directory yields
        an empty, untrained registry over the corpus rights."""
        directory = Path(directory)
        state_path = directory / REGISTRY_FILE
        if not state_path.exists():
            registry = cls(corpus, labels=list(corpus.rights), directory=directory,
                           model_configs=model_configs)
            registry._load_feedback_log()
            for entry in registry.feedback_log:
                registry._apply_entry(entry)
            return registry
        state = json.loads(state_path.read_text(encoding="utf-8"))
        registry = cls(
            corpus,
            labels=state["labels"],
            kinds=state["kinds"],
            directory=directory,
            serving_kind=state["serving_kind"],
            model_configs=model_configs,
        )
        registry._annotation_counts.update(state.get("annotation_counts", {}))
        registry._load_feedback_log()
        for entry in registry.feedback_log:
            registry._apply_entry(entry)
        for key, version in state["versions"].items():
            label, kind = key.split("\t")
            registry._load_version(label, kind, version)
        return registry

    def _load_feedback_log(self) -> None:
        path = self.directory / FEEDBACK_LOG
        if not path.exists():
            return
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                self.feedback_log.append(FeedbackEntry(**json.loads(line)))

    def _load_version(self, label: str, kind: str, version: int) -> None:
        vdir = self.directory / label / kind / f"v{version:03d}"
        manifest_path = vdir / MANIFEST_FILE
        if not manifest_path.exists():
            raise IntegrityError(f"extractor {label}/{kind} v{version}: manifest missing")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise IntegrityError(
                f"extractor {label}/{kind} v{version}: manifest unreadable: {exc}"
            ) from exc
        for name, digest in manifest.get("fingerprints", {}).items():
            path = vdir / name
            if not path.exists() or _sha256(path) != digest:
                raise IntegrityError(
                    f"extractor {label}/{kind} v{version}: fingerprint mismatch for {name}"
                )
        extractor = self.extractor(label, kind)
        extractor.model = load_model(kind, vdir)
        extractor.version = version
        extractor.status = TRAINED


def initialize(
    corpus: Corpus,
    labels: list[str],
    kinds: Optional[list[str]] = None,
    directory: str | Path = "registry",
    seed: int = 0,
    **kwargs,
) -> ExtractorRegistry:
    """Build and train a registry over the seed corpus."""
    registry = ExtractorRegistry(corpus, labels, kinds=kinds, directory=directory, **kwargs)
    registry.initialize(seed=seed)
    return registry

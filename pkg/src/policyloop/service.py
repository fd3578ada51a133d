"""HTTP service for annotation tasks, suggestions, and the feedback loop.

The service persists everything to plain files under a data directory
(policy records, task store) and a registry directory (model versions,
feedback log), so a restart reconstructs the exact same state. Model
training runs on a single background worker; suggestion reads are served
from the last trained snapshot and never block on training.

The annotation side and the extraction side talk through a small backend
interface. The default wiring keeps both in one process; pointing
``POLICYLOOP_BACKEND_URL`` at a second instance moves extraction (training
and prediction) into that process while this one keeps handling tasks.
"""

from __future__ import annotations

import json
import logging
import os
import queue
import threading
import uuid
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from fastapi import FastAPI, Response
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .corpus import (
    HUMAN,
    Annotation,
    Corpus,
    Document,
    LabelSchema,
    load_label_schema,
    parse_policy,
    serialize_policy,
)
from .errors import (
    EmptyDocument,
    OrphanAnnotation,
    ParseError,
    PolicyLoopError,
    SchemaError,
    ValidationError,
)
from .manager import ExtractorRegistry, FeedbackEntry
from .retrieval import SuggestionSet, suggest

log = logging.getLogger(__name__)

OPEN = "open"
DONE = "done"

DEFAULT_AUTOTRAIN_N = 10


@dataclass
class Task:
    id: str
    document_id: str
    labels: list[str]
    parent_id: Optional[str] = None
    status: str = OPEN
    revision: int = 0
    children: dict[str, str] = field(default_factory=dict)  # label -> child task id

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "document_id": self.document_id,
            "labels": self.labels,
            "parent_id": self.parent_id,
            "status": self.status,
            "revision": self.revision,
            "children": dict(self.children),
        }


class TaskStore:
    """File-backed task collection; the whole store rewrites on change,
    which is fine at annotation-session scale."""

    def __init__(self, path: Path):
        self.path = path
        self.tasks: dict[str, Task] = {}
        self._lock = threading.RLock()
        if path.exists():
            for record in json.loads(path.read_text(encoding="utf-8")):
                self.tasks[record["id"]] = Task(**record)

    def save(self) -> None:
        with self._lock:
            tmp = self.path.with_suffix(".tmp")
            tmp.write_text(
                json.dumps([t.to_dict() for t in self.tasks.values()], indent=2),
                encoding="utf-8",
            )
            tmp.replace(self.path)

    def add(self, task: Task) -> None:
        with self._lock:
            self.tasks[task.id] = task
            self.save()

    def get(self, task_id: str) -> Optional[Task]:
        return self.tasks.get(task_id)

    def all(self) -> list[Task]:
        return list(self.tasks.values())


@dataclass
class TrainJob:
    id: str
    label: str
    status: str = "queued"  # queued | running | done | failed
    version: Optional[int] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "label": self.label,
            "status": self.status,
            "version": self.version,
            "error": self.error,
        }


class ExtractionBackend:
    """Boundary between annotation handling and model serving/training."""

    def suggest(self, document: Document, label: str, k: int) -> Optional[SuggestionSet]:
        raise NotImplementedError

    def enqueue_training(self, label: str) -> TrainJob:
        raise NotImplementedError

    def job(self, job_id: str) -> Optional[TrainJob]:
        raise NotImplementedError

    def record_feedback(self, entry: FeedbackEntry) -> list[str]:
        raise NotImplementedError

    def add_document(self, document: Document) -> None:
        raise NotImplementedError

    def labels(self) -> list[str]:
        raise NotImplementedError

    def close(self) -> None:
        pass


class LocalBackend(ExtractionBackend):
    """In-process registry plus a single FIFO training worker."""

    def __init__(self, registry: ExtractorRegistry):
        self.registry = registry
        self.jobs: dict[str, TrainJob] = {}
        self._queue: "queue.Queue[Optional[TrainJob]]" = queue.Queue()
        self._worker = threading.Thread(target=self._run_jobs, daemon=True)
        self._worker.start()

    def _run_jobs(self) -> None:
        while True:
            job = self._queue.get()
            if job is None:
                return
            job.status = "running"
            try:
                job.version = self.registry.retrain(job.label)
                job.status = "done"
            except PolicyLoopError as exc:
                job.status = "failed"
                job.error = str(exc)
                log.warning("training job %s failed: %s", job.id, exc)
            finally:
                self._queue.task_done()

    def suggest(self, document: Document, label: str, k: int) -> Optional[SuggestionSet]:
        results, _ = self.registry.predict(document, [label], k=k)
        return results.get(label)

    def enqueue_training(self, label: str) -> TrainJob:
        if label not in self.registry.labels:
            raise ValidationError(f"unknown label {label!r}")
        job = TrainJob(id=uuid.uuid4().hex[:12], label=label)
        self.jobs[job.id] = job
        self._queue.put(job)
        return job

    def job(self, job_id: str) -> Optional[TrainJob]:
        return self.jobs.get(job_id)

    def record_feedback(self, entry: FeedbackEntry) -> list[str]:
        return self.registry.record_feedback([entry])

    def add_document(self, document: Document) -> None:
        self.registry.add_document(document)

    def labels(self) -> list[str]:
        return list(self.registry.labels)

    def close(self) -> None:
        self._queue.put(None)


class RemoteBackend(ExtractionBackend):
    """Forward extraction calls to a second service instance over HTTP.

    Both processes must share the same data directory; documents and the
    feedback log travel through the filesystem, only control calls go over
    the wire.
    """

    def __init__(self, base_url: str):
        import httpx

        self.base_url = base_url.rstrip("/")
        self.client = httpx.Client(base_url=self.base_url, timeout=300.0)

    def suggest(self, document: Document, label: str, k: int) -> Optional[SuggestionSet]:
        resp = self.client.post(
            "/api/predict",
            json={"policy": serialize_policy(document), "label": label, "k": k},
        )
        if resp.status_code == 204:
            return None
        resp.raise_for_status()
        payload = resp.json()
        return SuggestionSet(
            document_id=payload["document_id"],
            label=payload["label"],
            k=payload["k"],
            threshold=payload["threshold"],
            suggestions=[(s["blob_index"], s["score"]) for s in payload["suggestions"]],
        )

    def enqueue_training(self, label: str) -> TrainJob:
        resp = self.client.post("/api/train", json={"label": label})
        if resp.status_code == 404:
            raise ValidationError(f"unknown label {label!r}")
        resp.raise_for_status()
        payload = resp.json()
        return TrainJob(id=payload["id"], label=label, status=payload["status"])

    def job(self, job_id: str) -> Optional[TrainJob]:
        resp = self.client.get(f"/api/train/{job_id}")
        if resp.status_code == 404:
            return None
        payload = resp.json()
        return TrainJob(**payload)

    def record_feedback(self, entry: FeedbackEntry) -> list[str]:
        resp = self.client.post(
            "/api/feedback",
            json={
                "document_id": entry.document_id,
                "blob_index": entry.blob_index,
                "label": entry.label,
                "value": entry.value,
                "timestamp": entry.timestamp,
            },
        )
        resp.raise_for_status()
        return resp.json()["due"]

    def add_document(self, document: Document) -> None:
        self.client.post("/api/documents/reload", json={"document_id": document.id})

    def labels(self) -> list[str]:
        resp = self.client.get("/api/labels")
        resp.raise_for_status()
        schema = resp.json()
        return [child["id"] for child in schema.get("children", [])] or [schema["id"]]

    def close(self) -> None:
        self.client.close()


class AnnotationService:
    """Application state: documents, schema, tasks, and the backend."""

    def __init__(
        self,
        data_dir: str | Path,
        registry_dir: str | Path,
        autotrain_n: int = DEFAULT_AUTOTRAIN_N,
        backend: Optional[ExtractionBackend] = None,
    ):
        self.data_dir = Path(data_dir)
        self.registry_dir = Path(registry_dir)
        self.policies_dir = self.data_dir / "policies"
        self.policies_dir.mkdir(parents=True, exist_ok=True)
        self.autotrain_n = autotrain_n

        schema_path = self.data_dir / "schema.json"
        if not schema_path.exists():
            raise SchemaError(f"label schema not found at {schema_path}")
        self.schema: LabelSchema = load_label_schema(schema_path)

        self.documents: dict[str, Document] = {}
        for path in sorted(self.policies_dir.glob("*.json")):
            doc = parse_policy(path.read_text(encoding="utf-8"))
            self.documents[doc.id] = doc

        if backend is None:
            corpus = Corpus(
                documents=list(self.documents.values()),
                rights=self.schema.top_level(),
            )
            registry = ExtractorRegistry.load(corpus, self.registry_dir)
            backend = LocalBackend(registry)
        self.backend = backend

        self.tasks = TaskStore(self.data_dir / "tasks.json")
        self._annot_lock = threading.RLock()

    # ------------------------------------------------------------- documents

    def add_policy(self, record: dict) -> Document:
        doc = parse_policy(record)
        if doc.id in self.documents:
            raise FileExistsError(doc.id)
        self.documents[doc.id] = doc
        self._persist_document(doc)
        self.backend.add_document(doc)
        return doc

    def _persist_document(self, doc: Document) -> None:
        path = self.policies_dir / f"{doc.id}.json"
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(serialize_policy(doc), ensure_ascii=False, indent=2),
                       encoding="utf-8")
        tmp.replace(path)

    # ----------------------------------------------------------------- tasks

    def create_root_task(self, doc: Document) -> Task:
        task = Task(
            id=uuid.uuid4().hex[:12],
            document_id=doc.id,
            labels=self.schema.top_level(),
        )
        self.tasks.add(task)
        return task

    def annotate(
        self,
        task: Task,
        label: str,
        blob_index: int,
        value: int,
        revision: Optional[int] = None,
    ) -> dict:
        """Persist one human decision and run its side effects.

        Returns the response payload: the stored annotation, the spawned
        child task id (if any), and any training job started by the
        auto-retrain trigger.
        """
        with self._annot_lock:
            if revision is not None and revision != task.revision:
                raise ConflictError(
                    f"task revision is {task.revision}, request expected {revision}"
                )
            doc = self.documents[task.document_id]
            annotation = Annotation(label=label, value=value, source=HUMAN)
            blob = doc.blobs[blob_index]
            annotation.passage = blob.text
            blob.annotate(annotation)
            self._persist_document(doc)

            due = self.backend.record_feedback(
                FeedbackEntry(
                    document_id=doc.id,
                    blob_index=blob_index,
                    label=label,
                    value=value,
                    timestamp=annotation.created_at,
                )
            )

            child_id = None
            if value == 1 and self.schema.children_of(label):
                child_id = task.children.get(label)
                if child_id is None:
                    child = Task(
                        id=uuid.uuid4().hex[:12],
                        document_id=doc.id,
                        labels=self.schema.children_of(label),
                        parent_id=task.id,
                    )
                    self.tasks.add(child)
                    task.children[label] = child.id
                    child_id = child.id

            task.revision += 1
            self.tasks.save()

            jobs = [self.backend.enqueue_training(lbl).to_dict() for lbl in due]
            return {
                "annotation": {
                    "label": label,
                    "blob_index": blob_index,
                    "value": value,
                    "created_at": annotation.created_at,
                },
                "task_revision": task.revision,
                "child_task_id": child_id,
                "training_jobs": jobs,
            }


class ConflictError(PolicyLoopError):
    """Annotation replacement raced a newer revision of the same task."""


# --------------------------------------------------------------------- app


class PolicyIn(BaseModel):
    model_config = {"extra": "allow"}


class AnnotationIn(BaseModel):
    label: str
    blob_index: int
    value: int
    revision: Optional[int] = None


class TrainIn(BaseModel):
    label: Optional[str] = None


class PredictIn(BaseModel):
    policy: dict
    label: str
    k: int = 5


class FeedbackIn(BaseModel):
    document_id: str
    blob_index: int
    label: str
    value: int
    timestamp: str = ""


def create_app(
    data_dir: Optional[str | Path] = None,
    registry_dir: Optional[str | Path] = None,
    autotrain_n: Optional[int] = None,
    backend_url: Optional[str] = None,
) -> FastAPI:
    data_dir = Path(data_dir or os.environ.get("POLICYLOOP_DATA_DIR", "data"))
    registry_dir = Path(registry_dir or os.environ.get("POLICYLOOP_REGISTRY_DIR", "registry"))
    if autotrain_n is None:
        autotrain_n = int(os.environ.get("POLICYLOOP_AUTOTRAIN_N", DEFAULT_AUTOTRAIN_N))
    backend_url = backend_url or os.environ.get("POLICYLOOP_BACKEND_URL")

    backend = RemoteBackend(backend_url) if backend_url else None
    state = AnnotationService(data_dir, registry_dir, autotrain_n, backend=backend)
    if isinstance(state.backend, LocalBackend):
        state.backend.registry.autotrain_every = autotrain_n
    app = FastAPI(title="policyloop annotation service")
    app.state.service = state

    def error(status: int, detail: str, **extra) -> JSONResponse:
        return JSONResponse(status_code=status, content={"detail": detail, **extra})

    @app.post("/api/tasks", status_code=201)
    def create_task(body: dict):
        try:
            doc = state.add_policy(body)
        except ParseError as exc:
            return error(400, str(exc), field=exc.field)
        except (OrphanAnnotation, EmptyDocument) as exc:
            return error(400, str(exc))
        except FileExistsError as exc:
            return error(409, f"policy {exc.args[0]!r} already exists")
        task = state.create_root_task(doc)
        return task.to_dict()

    @app.get("/api/tasks")
    def list_tasks():
        return [t.to_dict() for t in state.tasks.all()]

    @app.get("/api/tasks/{task_id}")
    def get_task(task_id: str):
        task = state.tasks.get(task_id)
        if task is None:
            return error(404, f"unknown task {task_id!r}")
        doc = state.documents[task.document_id]
        payload = task.to_dict()
        payload["blobs"] = [{"index": b.index, "text": b.text} for b in doc.blobs]
        payload["annotations"] = [
            {"blob_index": b.index, "label": a.label, "value": a.value}
            for b in doc.blobs
            for a in b.annotations
            if a.source == HUMAN
        ]
        return payload

    @app.get("/api/tasks/{task_id}/suggestions")
    def get_suggestions(task_id: str, label: str, k: int = 5):
        task = state.tasks.get(task_id)
        if task is None:
            return error(404, f"unknown task {task_id!r}")
        if label not in task.labels:
            return error(422, f"label {label!r} is not offered by this task")
        if k < 1:
            return error(422, f"k must be >= 1, got {k}")
        doc = state.documents[task.document_id]
        suggestion = state.backend.suggest(doc, label, k)
        if suggestion is None:
            return Response(status_code=204)
        return suggestion.to_dict()

    @app.post("/api/tasks/{task_id}/annotations", status_code=201)
    def post_annotation(task_id: str, body: AnnotationIn):
        task = state.tasks.get(task_id)
        if task is None:
            return error(404, f"unknown task {task_id!r}")
        if task.status != OPEN:
            return error(409, "task is closed")
        if body.label not in task.labels:
            return error(422, f"label {body.label!r} is not offered by this task")
        doc = state.documents[task.document_id]
        if not 0 <= body.blob_index < len(doc.blobs):
            return error(422, f"blob index {body.blob_index} out of range")
        if body.value not in (0, 1):
            return error(422, "value must be 0 or 1")
        try:
            return state.annotate(task, body.label, body.blob_index, body.value,
                                  revision=body.revision)
        except ConflictError as exc:
            return error(409, str(exc))
        except ValidationError as exc:
            return error(422, str(exc))

    @app.post("/api/tasks/{task_id}/submit")
    def submit_task(task_id: str):
        task = state.tasks.get(task_id)
        if task is None:
            return error(404, f"unknown task {task_id!r}")
        task.status = DONE
        state.tasks.save()
        return task.to_dict()

    @app.post("/api/train", status_code=202)
    def train(body: TrainIn):
        labels = [body.label] if body.label else state.backend.labels()
        jobs = []
        try:
            for label in labels:
                jobs.append(state.backend.enqueue_training(label).to_dict())
        except ValidationError as exc:
            return error(404, str(exc))
        return jobs[0] if body.label else {"jobs": jobs}

    @app.get("/api/train/{job_id}")
    def train_status(job_id: str):
        job = state.backend.job(job_id)
        if job is None:
            return error(404, f"unknown training job {job_id!r}")
        return job.to_dict()

    @app.get("/api/labels")
    def labels():
        return state.schema.to_dict()

    # -- extraction-side endpoints used by a split deployment ---------------

    @app.post("/api/predict")
    def predict(body: PredictIn):
        try:
            doc = parse_policy(body.policy)
        except (ParseError, OrphanAnnotation, EmptyDocument) as exc:
            return error(400, str(exc))
        suggestion = state.backend.suggest(doc, body.label, body.k)
        if suggestion is None:
            return Response(status_code=204)
        return suggestion.to_dict()

    @app.post("/api/feedback")
    def feedback(body: FeedbackIn):
        try:
            due = state.backend.record_feedback(FeedbackEntry(**body.model_dump()))
        except ValidationError as exc:
            return error(422, str(exc))
        return {"due": due}

    @app.post("/api/documents/reload")
    def reload_document(body: dict):
        doc_id = body.get("document_id", "")
        path = state.policies_dir / f"{doc_id}.json"
        if not path.exists():
            return error(404, f"unknown document {doc_id!r}")
        doc = parse_policy(path.read_text(encoding="utf-8"))
        state.documents[doc.id] = doc
        state.backend.add_document(doc)
        return {"document_id": doc.id}

    return app


def main() -> None:  # pragma: no cover - thin uvicorn wrapper
    import uvicorn

    port = int(os.environ.get("POLICYLOOP_PORT", "8000"))
    uvicorn.run(create_app(), host="0.0.0.0", port=port)

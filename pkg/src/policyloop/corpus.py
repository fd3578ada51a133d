"""Document model and parsing for privacy policies.

A policy is segmented into paragraphs ("blobs"); human or model markings of
a data subject right live on individual blobs. Policies arrive as one JSON
record per file, label schemas as a recursive JSON tree.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Iterator, Optional

from .errors import (
    EmptyCorpus,
    EmptyDocument,
    OrphanAnnotation,
    ParseError,
    SchemaError,
)

BLOB_DELIMITER = "\n\n"
_SPLIT_RE = re.compile(r"\n{2,}")

HUMAN = "human"
MODEL = "model"


@dataclass
class Annotation:
    label: str
    value: int
    source: str = HUMAN
    model_version: Optional[str] = None
    passage: Optional[str] = None
    created_at: Optional[str] = None

    def __post_init__(self):
        if self.value not in (0, 1):
            raise ValueError(f"annotation value must be 0 or 1, got {self.value!r}")
        if self.source not in (HUMAN, MODEL):
            raise ValueError(f"unknown annotation source {self.source!r}")
        if self.created_at is None:
            self.created_at = datetime.now(timezone.utc).isoformat()


@dataclass
class Blob:
    index: int
    text: str
    annotations: list[Annotation] = field(default_factory=list)

    def annotate(self, annotation: Annotation) -> None:
        """Attach an annotation; a later human annotation for the same label
        replaces the earlier one."""
        if annotation.source == HUMAN:
            self.annotations = [
                a
                for a in self.annotations
                if not (a.source == HUMAN and a.label == annotation.label)
            ]
        self.annotations.append(annotation)

    def human_value(self, label: str) -> Optional[int]:
        for a in self.annotations:
            if a.source == HUMAN and a.label == label:
                return a.value
        return None


@dataclass
class Document:
    id: str
    title: str
    language: str
    blobs: list[Blob]

    @property
    def text(self) -> str:
        return BLOB_DELIMITER.join(b.text for b in self.blobs)

    def positive_blobs(self, label: str) -> list[Blob]:
        return [b for b in self.blobs if b.human_value(label) == 1]


@dataclass
class LabelNode:
    id: str
    name: str
    description: str = ""
    children: list["LabelNode"] = field(default_factory=list)


class LabelSchema:
    """Hierarchy of annotatable labels; children of a node are the labels
    offered after that node has been annotated."""

    def __init__(self, root: LabelNode):
        self.root = root
        self._by_id: dict[str, LabelNode] = {}
        self._parent: dict[str, Optional[str]] = {}
        self._index(root, None, set())

    def _index(self, node: LabelNode, parent: Optional[str], seen: set[str]) -> None:
        if node.id in self._by_id:
            raise SchemaError(f"duplicate label id {node.id!r}")
        if node.id in seen:
            raise SchemaError(f"cycle through label id {node.id!r}")
        self._by_id[node.id] = node
        self._parent[node.id] = parent
        for child in node.children:
            self._index(child, node.id, seen | {node.id})

    def __contains__(self, label_id: str) -> bool:
        return label_id in self._by_id

    def node(self, label_id: str) -> LabelNode:
        try:
            return self._by_id[label_id]
        except KeyError:
            raise SchemaError(f"unknown label id {label_id!r}") from None

    def children_of(self, label_id: str) -> list[str]:
        return [c.id for c in self.node(label_id).children]

    def top_level(self) -> list[str]:
        return [c.id for c in self.root.children] or [self.root.id]

    def all_ids(self) -> list[str]:
        return list(self._by_id)

    def depth_of(self, label_id: str) -> int:
        depth = 0
        cur: Optional[str] = label_id
        while (cur := self._parent[cur]) is not None:
            depth += 1
        return depth

    def to_dict(self) -> dict:
        def conv(node: LabelNode) -> dict:
            return {
                "id": node.id,
                "name": node.name,
                "description": node.description,
                "children": [conv(c) for c in node.children],
            }

        return conv(self.root)


@dataclass
class Corpus:
    documents: list[Document]
    rights: list[str]

    def __iter__(self) -> Iterator[Document]:
        return iter(self.documents)

    def __len__(self) -> int:
        return len(self.documents)

    def document(self, doc_id: str) -> Document:
        for d in self.documents:
            if d.id == doc_id:
                return d
        raise KeyError(doc_id)

    @property
    def total_blobs(self) -> int:
        return sum(len(d.blobs) for d in self.documents)

    def positive_count(self, label: str) -> int:
        return sum(len(d.positive_blobs(label)) for d in self.documents)


def segment_blobs(text: str) -> list[Blob]:
    """Split policy text into paragraphs on runs of two or more newlines."""
    segments = [s.strip() for s in _SPLIT_RE.split(text)]
    segments = [s for s in segments if s]
    if not segments:
        raise EmptyDocument("no paragraphs left after normalization")
    return [Blob(index=i, text=s) for i, s in enumerate(segments)]


def parse_policy(raw: str | dict) -> Document:
    """Convert a serialized policy record into a Document.

    Embedded annotations are attached to the first blob whose text contains
    the annotated passage verbatim; the passage is kept for provenance.
    """
    if isinstance(raw, str):
        try:
            record = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON: {exc}") from exc
    else:
        record = raw
    if not isinstance(record, dict):
        raise ParseError("policy record must be a JSON object")

    for key, typ in (("id", str), ("title", str), ("language", str), ("text", str)):
        if key not in record:
            raise ParseError(f"missing field {key!r}", field=key)
        if not isinstance(record[key], typ):
            raise ParseError(f"field {key!r} must be a string", field=key)

    annotations = record.get("annotations", [])
    if not isinstance(annotations, list):
        raise ParseError("field 'annotations' must be a list", field="annotations")

    blobs = segment_blobs(record["text"])

    orphans = []
    for i, ann in enumerate(annotations):
        if not isinstance(ann, dict) or "label" not in ann or "passage" not in ann:
            raise ParseError(
                "annotation entries need 'label' and 'passage'",
                field=f"annotations[{i}]",
            )
        passage = ann["passage"]
        target = next((b for b in blobs if passage in b.text), None)
        if target is None:
            orphans.append(passage)
            continue
        target.annotate(
            Annotation(label=ann["label"], value=1, source=HUMAN, passage=passage)
        )
    if orphans:
        raise OrphanAnnotation(orphans)

    return Document(
        id=record["id"],
        title=record["title"],
        language=record["language"],
        blobs=blobs,
    )


def serialize_policy(doc: Document) -> dict:
    """Inverse of parse_policy for human annotations."""
    annotations = []
    for blob in doc.blobs:
        for a in blob.annotations:
            if a.source == HUMAN and a.value == 1:
                annotations.append(
                    {"label": a.label, "passage": a.passage or blob.text}
                )
    return {
        "id": doc.id,
        "title": doc.title,
        "language": doc.language,
        "text": doc.text,
        "annotations": annotations,
    }


def load_corpus(directory: str | Path, rights: Optional[list[str]] = None) -> Corpus:
    """Parse every policy record in a directory into a Corpus.

    Any file failing to parse aborts the load with the file name attached.
    """
    directory = Path(directory)
    files = sorted(p for p in directory.glob("*.json") if p.is_file())
    if not files:
        raise EmptyCorpus(f"no policy records in {directory}")
    documents = []
    for path in files:
        try:
            documents.append(parse_policy(path.read_text(encoding="utf-8")))
        except (ParseError, OrphanAnnotation, EmptyDocument) as exc:
            raise ParseError(f"{path.name}: {exc}") from exc
    if rights is None:
        seen: dict[str, None] = {}
        for doc in documents:
            for blob in doc.blobs:
                for a in blob.annotations:
                    seen.setdefault(a.label, None)
        rights = list(seen)
    return Corpus(documents=documents, rights=rights)


def _parse_label_node(record: dict, path: str) -> LabelNode:
    if not isinstance(record, dict):
        raise SchemaError(f"{path}: schema node must be an object")
    if "id" not in record or not isinstance(record["id"], str):
        raise SchemaError(f"{path}: schema node needs a string 'id'")
    children = record.get("children", [])
    if not isinstance(children, list):
        raise SchemaError(f"{path}: 'children' must be a list")
    node = LabelNode(
        id=record["id"],
        name=record.get("name", record["id"]),
        description=record.get("description", ""),
    )
    for i, child in enumerate(children):
        child_node = _parse_label_node(child, f"{path}.children[{i}]")
        if child_node.id == node.id:
            raise SchemaError(f"node {node.id!r} lists itself as a child")
        node.children.append(child_node)
    return node


def load_label_schema(path: str | Path) -> LabelSchema:
    """Load and validate a label schema file."""
    try:
        record = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid schema JSON: {exc}") from exc
    return LabelSchema(_parse_label_node(record, "$"))

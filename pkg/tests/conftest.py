import json

import numpy as np
import pytest

from policyloop.anchors import RIGHTS
from policyloop.corpus import HUMAN, Annotation, Blob, Corpus, Document
from policyloop.datagen import default_schema
from policyloop.models.classifier import ClassifierConfig
from policyloop.models.embedder import TUNED_MARGIN, TripletConfig

# granting sentences with right-specific vocabulary, one per right, used to
# build small corpora that every model kind can learn from
GRANT_SENTENCES = {
    "right_information": (
        "Sie haben das Recht, Auskunft ueber die von uns verarbeiteten "
        "personenbezogenen Daten zu verlangen."
    ),
    "right_deletion": (
        "Sie haben das Recht, die Berichtigung oder Loeschung Ihrer "
        "personenbezogenen Daten zu verlangen."
    ),
    "right_data_portability": (
        "Sie haben das Recht, Ihre Daten in einem strukturierten, gaengigen "
        "und maschinenlesbaren Format zu erhalten."
    ),
    "right_withdraw_consent": (
        "Sie haben das Recht, Ihre erteilte Einwilligung jederzeit zu "
        "widerrufen."
    ),
    "right_complaint": (
        "Sie haben das Recht, sich bei einer Aufsichtsbehoerde ueber die "
        "Verarbeitung zu beschweren."
    ),
}

FILLERS = [
    "Diese Website verwendet Cookies zur Verbesserung des Angebots.",
    "Der Betrieb der Server erfolgt in einem Rechenzentrum in Deutschland.",
    "Beim Besuch der Website werden technische Zugriffsdaten gespeichert.",
    "Unser Newsletter informiert Sie regelmaessig ueber Neuigkeiten.",
    "Die Zahlungsabwicklung erfolgt ueber einen externen Dienstleister.",
    "Wir setzen technische Massnahmen zum Schutz Ihrer Daten ein.",
    "Die Kontaktaufnahme ist per E-Mail oder Telefon moeglich.",
    "Eingebundene Videos werden erst nach Ihrer Zustimmung geladen.",
]


def make_document(doc_id: str, rights_present: list[str], n_filler: int = 6,
                  rng: np.random.Generator | None = None) -> Document:
    rng = rng or np.random.default_rng(abs(hash(doc_id)) % 2**32)
    blobs = []
    texts = [FILLERS[int(i)] for i in rng.choice(len(FILLERS), size=n_filler, replace=False)]
    positions = {}
    for right in rights_present:
        pos = int(rng.integers(0, len(texts) + 1))
        texts.insert(pos, GRANT_SENTENCES[right])
        positions[right] = pos
    for i, text in enumerate(texts):
        blobs.append(Blob(index=i, text=text))
    doc = Document(id=doc_id, title=f"Policy {doc_id}", language="de", blobs=blobs)
    for right in rights_present:
        idx = doc.text.split("\n\n").index(GRANT_SENTENCES[right])
        doc.blobs[idx].annotate(
            Annotation(label=right, value=1, source=HUMAN,
                       passage=GRANT_SENTENCES[right])
        )
    return doc


def make_tiny_corpus(n_docs: int = 8, seed: int = 0) -> Corpus:
    rng = np.random.default_rng(seed)
    docs = []
    for i in range(n_docs):
        # every document carries every right so tiny splits still stratify
        docs.append(make_document(f"doc-{i:02d}", list(RIGHTS), rng=rng))
    return Corpus(documents=docs, rights=list(RIGHTS))


FAST_MODEL_CONFIGS = {
    "sentence_embedder": {
        "config": TripletConfig(
            margin=TUNED_MARGIN, epochs=30, encoder="hashed-german-cased-32"
        )
    },
    "binary_classifier": {"config": ClassifierConfig(epochs=1, encoder="hashed-tok2vec-b24-16", hidden=8)},
    "gaussian_nb": {"encoder_name": "hashed-shape-b8-16"},
}


@pytest.fixture
def tiny_corpus() -> Corpus:
    return make_tiny_corpus()


@pytest.fixture(scope="session")
def dataset_dir(tmp_path_factory):
    """The full bundled synthetic dataset, generated once per session."""
    from policyloop.datagen import make_dataset

    path = tmp_path_factory.mktemp("dataset")
    make_dataset(path)
    return path


def write_schema(directory, schema: dict | None = None) -> None:
    record = schema or default_schema()
    (directory / "schema.json").write_text(json.dumps(record), encoding="utf-8")

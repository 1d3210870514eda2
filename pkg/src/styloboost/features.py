"""Assemble per-document feature rows: stylometry, optionally ++ embedding.

Column order is pinned: the 11 stylometric features first, then
``emb_0 .. emb_{d-1}`` when an embedding table is supplied. No scaling
or standardization is applied anywhere; values reach the classifier
bit-for-bit as extracted.

The feature JSONL written by ``extract-features`` (one object per line:
``{"id", "stylo": [11 numbers], "embedding": [d numbers]?}``) can be
re-read here to skip re-extraction.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import Document, LabelSchema
from .embedding_io import EmbeddingTable
from .stylometry import FEATURE_NAMES, StyloVector


class FeatureError(ValueError):
    """Raised for inconsistent feature assembly inputs or files."""


@dataclass
class FeatureMatrix:
    doc_ids: list[str]
    names: list[str]
    rows: np.ndarray  # (n_docs, n_features) float64
    labels: np.ndarray | None = None  # (n_docs,) int64 class indices
    class_names: list[str] | None = None

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.float64)
        if self.rows.ndim != 2 or self.rows.shape != (len(self.doc_ids), len(self.names)):
            raise FeatureError(
                f"rows shape {self.rows.shape} inconsistent with "
                f"{len(self.doc_ids)} ids x {len(self.names)} names"
            )
        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.int64)
            if self.labels.shape != (len(self.doc_ids),):
                raise FeatureError("labels length does not match document count")


def embedding_names(dim: int) -> list[str]:
    return [f"emb_{i}" for i in range(dim)]


def assemble(
    docs: list[Document],
    stylo: list[StyloVector],
    embeddings: EmbeddingTable | None = None,
    schema: LabelSchema | None = None,
) -> FeatureMatrix:
    """Build the feature matrix for a corpus, preserving document order.

    Labels are mapped through the schema only when every document is
    labeled; a partially labeled corpus under a schema is an error.
    """
    if len(stylo) != len(docs):
        raise FeatureError(f"got {len(stylo)} stylometry vectors for {len(docs)} documents")

    names = list(FEATURE_NAMES)
    dim = 0
    if embeddings is not None:
        missing = [d.id for d in docs if d.id not in embeddings]
        if missing:
            raise FeatureError(f"no embedding for id {missing[0]!r} ({len(missing)} missing)")
        dim = embeddings.dim
        names += embedding_names(dim)

    n = len(docs)
    rows = np.zeros((n, len(names)), dtype=np.float64)
    for i, (doc, vec) in enumerate(zip(docs, stylo)):
        rows[i, :11] = vec.values()
        if embeddings is not None:
            rows[i, 11:] = embeddings.vector(doc.id).astype(np.float64)

    labels = None
    class_names = None
    if schema is not None:
        unlabeled = [d.id for d in docs if d.label is None]
        if not unlabeled:
            labels = np.array([schema.index_of(d.label) for d in docs], dtype=np.int64)
            class_names = list(schema.classes)
        elif len(unlabeled) < n:
            raise FeatureError(
                f"partially labeled corpus: {len(unlabeled)} unlabeled ids "
                f"(first: {unlabeled[0]!r})"
            )

    return FeatureMatrix([d.id for d in docs], names, rows, labels, class_names)


def write_feature_file(
    path: str | Path,
    doc_ids: list[str],
    stylo: list[StyloVector],
    embeddings: EmbeddingTable | None = None,
) -> None:
    """Write per-document feature JSONL in corpus order."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id, vec in zip(doc_ids, stylo):
            obj: dict = {"id": doc_id, "stylo": vec.values()}
            if embeddings is not None:
                obj["embedding"] = [float(x) for x in embeddings.vector(doc_id)]
            fh.write(json.dumps(obj) + "\n")


def read_feature_file(path: str | Path) -> tuple[list[str], list[str], np.ndarray]:
    """Read feature JSONL back into (doc_ids, names, rows)."""
    path = Path(path)
    doc_ids: list[str] = []
    rows: list[list[float]] = []
    dim: int | None = None
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path.name}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise FeatureError(f"{where}: malformed JSON ({exc.msg})") from None
            if "id" not in obj or "stylo" not in obj:
                raise FeatureError(f"{where}: expected keys 'id' and 'stylo'")
            stylo = obj["stylo"]
            if not isinstance(stylo, list) or len(stylo) != len(FEATURE_NAMES):
                raise FeatureError(
                    f"{where}: 'stylo' must have {len(FEATURE_NAMES)} values"
                )
            emb = obj.get("embedding", [])
            if not isinstance(emb, list):
                raise FeatureError(f"{where}: 'embedding' must be a list")
            if dim is None:
                dim = len(emb)
            elif len(emb) != dim:
                raise FeatureError(
                    f"{where}: embedding dimension {len(emb)} != expected {dim}"
                )
            if obj["id"] in seen:
                raise FeatureError(f"{where}: duplicate id {obj['id']!r}")
            seen.add(obj["id"])
            doc_ids.append(obj["id"])
            rows.append([float(x) for x in stylo] + [float(x) for x in emb])
    if dim is None:
        raise FeatureError(f"{path.name}: empty feature file")
    names = list(FEATURE_NAMES) + embedding_names(dim)
    return doc_ids, names, np.asarray(rows, dtype=np.float64)

"""Batch-compute sentence embeddings for a corpus and export them.

Reads a corpus JSONL (objects with "id" and "text"), encodes every
document with the configured model, L2-normalizes the vectors (the
pinned convention for E5-style embeddings), and writes the styloboost
embedding interchange format (EMB1 binary, or JSONL with --jsonl).
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .encoders import EncoderError, make_encoder
from .writer import write_binary, write_jsonl

__version__ = "0.1.0"

DEFAULT_MODEL = "intfloat/e5-base-v2"


class EmbedgenError(ValueError):
    pass


@dataclass(frozen=True)
class EmbedJob:
    corpus_path: str
    model_id: str = DEFAULT_MODEL
    batch_size: int = 32
    output_path: str = "embeddings.bin"
    jsonl: bool = False

    def __post_init__(self):
        if self.batch_size < 1:
            raise EmbedgenError("batch size must be >= 1")
        if not self.model_id:
            raise EmbedgenError("model identifier must be non-empty")


@dataclass(frozen=True)
class JobSummary:
    count: int
    dim: int
    elapsed: float


def read_corpus(path: str | Path) -> list[tuple[str, str]]:
    """Minimal corpus JSONL reader: (id, text) pairs, ids unique."""
    path = Path(path)
    if not path.exists():
        raise EmbedgenError(f"corpus file not found: {path}")
    pairs: list[tuple[str, str]] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbedgenError(f"{path.name}:{lineno}: malformed JSON ({exc.msg})") from None
            doc_id = obj.get("id")
            text = obj.get("text")
            if not isinstance(doc_id, str) or not doc_id or not isinstance(text, str):
                raise EmbedgenError(f"{path.name}:{lineno}: need string 'id' and 'text'")
            if doc_id in seen:
                raise EmbedgenError(f"{path.name}:{lineno}: duplicate id {doc_id!r}")
            seen.add(doc_id)
            pairs.append((doc_id, text))
    if not pairs:
        raise EmbedgenError(f"{path.name}: empty corpus")
    return pairs


def run_job(job: EmbedJob) -> JobSummary:
    """Encode the corpus and write the embedding file once, at the end."""
    started = time.perf_counter()
    pairs = read_corpus(job.corpus_path)
    encoder = make_encoder(job.model_id)

    ids = [doc_id for doc_id, _ in pairs]
    texts = [text for _, text in pairs]
    chunks = []
    for lo in range(0, len(texts), job.batch_size):
        chunks.append(encoder.encode(texts[lo : lo + job.batch_size], job.batch_size))
    vectors = np.vstack(chunks).astype(np.float32)
    if vectors.shape != (len(ids), encoder.dim):
        raise EmbedgenError(
            f"encoder returned shape {vectors.shape}, expected ({len(ids)}, {encoder.dim})"
        )
    if not np.all(np.isfinite(vectors)):
        raise EmbedgenError("encoder produced non-finite components")

    norms = np.linalg.norm(vectors, axis=1, keepdims=True)
    if np.any(norms == 0.0):
        raise EmbedgenError("encoder produced a zero vector; cannot L2-normalize")
    vectors = (vectors / norms).astype(np.float32)

    entries = {doc_id: vectors[i] for i, doc_id in enumerate(ids)}
    if job.jsonl:
        write_jsonl(entries, job.output_path)
    else:
        write_binary(entries, encoder.dim, job.output_path)
    return JobSummary(count=len(ids), dim=encoder.dim, elapsed=time.perf_counter() - started)


__all__ = [
    "DEFAULT_MODEL",
    "EmbedJob",
    "EmbedgenError",
    "EncoderError",
    "JobSummary",
    "read_corpus",
    "run_job",
]

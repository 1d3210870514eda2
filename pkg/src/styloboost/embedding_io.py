"""Per-document dense embedding vectors: binary and JSONL file formats.

Binary layout (little-endian), the primary format:

    magic "EMB1" | version u16 = 1 | dim u32 | count u32 |
    count x [ id_len u16 | id bytes (UTF-8) | dim x f32 ]

Trailing bytes after the last record are an error, as is a declared
count that does not match the actual record count. JSONL is kept for
human inspection: one ``{"id": ..., "vec": [...]}`` object per line.
Vectors are 32-bit floats on disk in both formats and are widened to
float64 when assembled into feature rows.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"
VERSION = 1


class EmbeddingFormatError(ValueError):
    """Raised for malformed or inconsistent embedding files."""


@dataclass
class EmbeddingTable:
    """Validated id -> float32 vector map with a single shared dimension."""

    dim: int
    entries: dict[str, np.ndarray]

    def __post_init__(self):
        if self.dim <= 0:
            raise EmbeddingFormatError("embedding dim must be positive")
        if not self.entries:
            raise EmbeddingFormatError("empty embedding table")
        normalized: dict[str, np.ndarray] = {}
        for doc_id, vec in self.entries.items():
            if not doc_id:
                raise EmbeddingFormatError("empty document id in embedding table")
            arr = np.asarray(vec, dtype=np.float32)
            if arr.shape != (self.dim,):
                raise EmbeddingFormatError(
                    f"vector for id {doc_id!r} has length {arr.shape}, expected ({self.dim},)"
                )
            if not np.all(np.isfinite(arr)):
                raise EmbeddingFormatError(f"non-finite component in vector for id {doc_id!r}")
            normalized[doc_id] = arr
        self.entries = normalized

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self.entries

    def vector(self, doc_id: str) -> np.ndarray:
        return self.entries[doc_id]


def _read_exact(fh, n: int, what: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise EmbeddingFormatError(f"truncated file while reading {what}")
    return data


def _read_binary(path: Path) -> EmbeddingTable:
    with open(path, "rb") as fh:
        magic = _read_exact(fh, 4, "magic")
        if magic != MAGIC:
            raise EmbeddingFormatError(f"bad magic {magic!r}, expected {MAGIC!r}")
        (version,) = struct.unpack("<H", _read_exact(fh, 2, "version"))
        if version != VERSION:
            raise EmbeddingFormatError(f"unsupported embedding format version {version}")
        dim, count = struct.unpack("<II", _read_exact(fh, 8, "header"))
        if count == 0:
            raise EmbeddingFormatError("empty embedding table")
        entries: dict[str, np.ndarray] = {}
        for k in range(count):
            (id_len,) = struct.unpack("<H", _read_exact(fh, 2, f"record {k}"))
            doc_id = _read_exact(fh, id_len, f"record {k} id").decode("utf-8")
            raw = _read_exact(fh, 4 * dim, f"record {k} ({doc_id!r}) vector")
            if doc_id in entries:
                raise EmbeddingFormatError(f"duplicate id {doc_id!r} at record {k}")
            entries[doc_id] = np.frombuffer(raw, dtype="<f4").astype(np.float32)
        if fh.read(1):
            raise EmbeddingFormatError("trailing bytes after last record")
    return EmbeddingTable(dim=int(dim), entries=entries)


def _read_jsonl(path: Path) -> EmbeddingTable:
    entries: dict[str, np.ndarray] = {}
    dim: int | None = None
    with open(path, encoding="utf-8") as fh:
        for k, line in enumerate(fh):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise EmbeddingFormatError(f"record {k}: malformed JSON ({exc.msg})") from None
            if not isinstance(obj, dict) or "id" not in obj or "vec" not in obj:
                raise EmbeddingFormatError(f"record {k}: expected keys 'id' and 'vec'")
            doc_id = obj["id"]
            vec = obj["vec"]
            if not isinstance(doc_id, str) or not doc_id:
                raise EmbeddingFormatError(f"record {k}: id must be a non-empty string")
            if not isinstance(vec, list):
                raise EmbeddingFormatError(f"record {k} ({doc_id!r}): 'vec' must be a list")
            if dim is None:
                dim = len(vec)
            elif len(vec) != dim:
                raise EmbeddingFormatError(
                    f"record {k} ({doc_id!r}): dimension {len(vec)} != expected {dim}"
                )
            if doc_id in entries:
                raise EmbeddingFormatError(f"record {k}: duplicate id {doc_id!r}")
            entries[doc_id] = np.asarray(vec, dtype=np.float32)
    if dim is None:
        raise EmbeddingFormatError("empty embedding table")
    return EmbeddingTable(dim=dim, entries=entries)


def read_embeddings(path: str | Path) -> EmbeddingTable:
    """Read an embedding file, auto-detecting the format by magic bytes."""
    path = Path(path)
    if not path.exists():
        raise EmbeddingFormatError(f"embedding file not found: {path}")
    with open(path, "rb") as fh:
        head = fh.read(4)
    if head == MAGIC:
        return _read_binary(path)
    return _read_jsonl(path)


def write_embeddings(table: EmbeddingTable, path: str | Path, format: str = "binary") -> None:
    """Write a table readable by :func:`read_embeddings`.

    Records are written in lexicographic id order in both formats so
    identical tables always serialize to identical bytes.
    """
    path = Path(path)
    ids = sorted(table.entries)
    if format == "binary":
        with open(path, "wb") as fh:
            fh.write(MAGIC)
            fh.write(struct.pack("<HII", VERSION, table.dim, len(ids)))
            for doc_id in ids:
                encoded = doc_id.encode("utf-8")
                if len(encoded) > 0xFFFF:
                    raise EmbeddingFormatError(f"id too long to serialize: {doc_id!r}")
                fh.write(struct.pack("<H", len(encoded)))
                fh.write(encoded)
                fh.write(table.entries[doc_id].astype("<f4").tobytes())
    elif format == "jsonl":
        with open(path, "w", encoding="utf-8") as fh:
            for doc_id in ids:
                vec = [float(x) for x in table.entries[doc_id]]
                fh.write(json.dumps({"id": doc_id, "vec": vec}) + "\n")
    else:
        raise ValueError(f"unknown embedding format {format!r}")

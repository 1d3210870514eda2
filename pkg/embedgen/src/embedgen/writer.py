"""Embedding file writers in the styloboost interchange formats.

Binary layout (little-endian):

    magic "EMB1" | version u16 = 1 | dim u32 | count u32 |
    count x [ id_len u16 | id bytes (UTF-8) | dim x f32 ]

Records are written in lexicographic id order, matching the consumer's
own writer, so equal tables serialize to equal bytes. JSONL is one
``{"id": ..., "vec": [...]}`` object per line.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

MAGIC = b"EMB1"
VERSION = 1


def write_binary(entries: dict[str, np.ndarray], dim: int, path: str | Path) -> None:
    ids = sorted(entries)
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<HII", VERSION, dim, len(ids)))
        for doc_id in ids:
            encoded = doc_id.encode("utf-8")
            fh.write(struct.pack("<H", len(encoded)))
            fh.write(encoded)
            fh.write(entries[doc_id].astype("<f4").tobytes())


def write_jsonl(entries: dict[str, np.ndarray], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc_id in sorted(entries):
            vec = [float(x) for x in entries[doc_id]]
            fh.write(json.dumps({"id": doc_id, "vec": vec}) + "\n")

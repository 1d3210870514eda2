"""Corpus loading and the two task label schemas.

Corpora are JSONL (one object per line: id, text, optional label) or
CSV (header ``id,text[,label]``, RFC-4180 quoting). Labels are matched
case-insensitively against a schema and canonicalized to the schema's
lower-case class names. A loaded corpus is an immutable list of
documents; nothing here mutates after load.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path


class CorpusError(ValueError):
    """Raised for malformed corpus files or label schema violations."""


@dataclass(frozen=True)
class Document:
    id: str
    text: str
    label: str | None = None


@dataclass(frozen=True)
class LabelSchema:
    task: str  # "binary" | "multiclass"
    classes: tuple[str, ...]

    def index_of(self, label: str) -> int:
        try:
            return self.classes.index(label)
        except ValueError:
            raise CorpusError(
                f"unknown label {label!r}; allowed: {list(self.classes)}"
            ) from None


BINARY_CLASSES = ("human", "ai")
MULTICLASS_CLASSES = (
    "human",
    "gemma-2-9b",
    "gpt_4-o",
    "llama-8b",
    "mistral-7b",
    "qwen-2-72b",
    "yi-large",
)
AI_CLASS_NAMES = MULTICLASS_CLASSES[1:]

BINARY_SCHEMA = LabelSchema("binary", BINARY_CLASSES)
MULTICLASS_SCHEMA = LabelSchema("multiclass", MULTICLASS_CLASSES)


def schema_for_task(task: str) -> LabelSchema:
    if task == "binary":
        return BINARY_SCHEMA
    if task == "multiclass":
        return MULTICLASS_SCHEMA
    raise CorpusError(f"unknown task {task!r}; expected 'binary' or 'multiclass'")


def label_to_index(label: str, schema: LabelSchema) -> int:
    """Position of a canonicalized label in the schema's class list."""
    return schema.index_of(label)


def _canonicalize(label: str, schema: LabelSchema, collapse_ai: bool, where: str) -> str:
    low = label.lower()
    if collapse_ai and low in AI_CLASS_NAMES:
        low = "ai"
    if low not in schema.classes:
        raise CorpusError(
            f"{where}: unknown label {label!r}; allowed: {list(schema.classes)}"
        )
    return low


def _validate(
    records: list[tuple[str, object, object, str]],
    schema: LabelSchema | None,
    collapse_ai: bool,
) -> list[Document]:
    docs: list[Document] = []
    seen: set[str] = set()
    for doc_id, text, label, where in records:
        if not isinstance(doc_id, str) or not doc_id:
            raise CorpusError(f"{where}: id must be a non-empty string")
        if not isinstance(text, str):
            raise CorpusError(f"{where}: text must be a string")
        if doc_id in seen:
            raise CorpusError(f"{where}: duplicate id {doc_id!r}")
        seen.add(doc_id)
        if label is not None and not isinstance(label, str):
            raise CorpusError(f"{where}: label must be a string or null")
        if label is not None and schema is not None:
            label = _canonicalize(label, schema, collapse_ai, where)
        docs.append(Document(doc_id, text, label))
    return docs


def _read_jsonl(path: Path) -> list[tuple[str, object, object, str]]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            where = f"{path.name}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise CorpusError(f"{where}: malformed JSON ({exc.msg})") from None
            if not isinstance(obj, dict):
                raise CorpusError(f"{where}: expected a JSON object")
            if "id" not in obj or "text" not in obj:
                raise CorpusError(f"{where}: missing required key 'id' or 'text'")
            records.append((obj["id"], obj["text"], obj.get("label"), where))
    return records


def _read_csv(path: Path) -> list[tuple[str, object, object, str]]:
    records = []
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            return []
        for col in ("id", "text"):
            if col not in reader.fieldnames:
                raise CorpusError(f"{path.name}: missing required column {col!r}")
        has_label = "label" in reader.fieldnames
        for row in reader:
            where = f"{path.name}:{reader.line_num}"
            label = row.get("label") if has_label else None
            if label == "":
                label = None
            records.append((row["id"], row["text"], label, where))
    return records


def load_corpus(
    path: str | Path,
    schema: LabelSchema | None = None,
    collapse_ai: bool = False,
) -> list[Document]:
    """Load and validate a corpus file, preserving file order.

    With a schema, every non-null label must match one of its classes
    case-insensitively and comes back canonicalized. ``collapse_ai``
    additionally maps the six generator class names onto "ai" before
    schema matching (used to derive binary-task data from 7-class data).
    """
    path = Path(path)
    if not path.exists():
        raise CorpusError(f"corpus file not found: {path}")
    if path.suffix.lower() == ".csv":
        records = _read_csv(path)
    else:
        records = _read_jsonl(path)
    return _validate(records, schema, collapse_ai)

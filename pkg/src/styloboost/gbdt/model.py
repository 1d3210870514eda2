"""Trained ensemble representation, prediction, and JSON serialization.

Model files are versioned JSON (schema v1). Trees are stored as flat
node lists: internal nodes ``{"f", "t", "l", "r"}`` route a row left
when ``row[f] <= t``; leaves ``{"v"}`` carry the unscaled leaf value
(the stored learning_rate is applied at prediction time). Floats are
serialized with Python's shortest round-trip repr, so load(save(m))
predicts bit-identically to m.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .. import textproc
from .objectives import sigmoid, softmax

MODEL_VERSION = 1


class ModelError(ValueError):
    """Raised for invalid configurations, inputs, or model files."""


class NumericError(ModelError):
    """Raised when training produces a non-finite loss."""


class StylometryHashMismatch(UserWarning):
    """A loaded model was trained against different stopword/verb lists."""


@dataclass(frozen=True)
class GbdtConfig:
    rounds: int = 300
    max_depth: int = 6
    learning_rate: float = 0.1
    l2_lambda: float = 1.0
    min_leaf_samples: int = 20
    seed: int = 0
    subsample: float = 1.0

    def __post_init__(self):
        for name in ("rounds", "max_depth", "min_leaf_samples", "seed"):
            if not isinstance(getattr(self, name), int):
                raise ModelError(f"{name} must be an integer")
        for name in ("learning_rate", "l2_lambda", "subsample"):
            value = getattr(self, name)
            if not isinstance(value, (int, float)):
                raise ModelError(f"{name} must be a number")
            object.__setattr__(self, name, float(value))
        if self.rounds < 1:
            raise ModelError("rounds must be >= 1")
        if self.max_depth < 0:
            raise ModelError("max_depth must be >= 0")
        if not 0.0 < self.learning_rate <= 1.0:
            raise ModelError("learning_rate must be in (0, 1]")
        if self.l2_lambda < 0.0:
            raise ModelError("l2_lambda must be >= 0")
        if self.min_leaf_samples < 1:
            raise ModelError("min_leaf_samples must be >= 1")
        if not 0.0 < self.subsample <= 1.0:
            raise ModelError("subsample must be in (0, 1]")
        if not -(2**63) <= self.seed < 2**64:
            raise ModelError("seed must fit in 64 bits")

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "max_depth": self.max_depth,
            "learning_rate": float(self.learning_rate),
            "l2_lambda": float(self.l2_lambda),
            "min_leaf_samples": self.min_leaf_samples,
            "seed": self.seed,
            "subsample": float(self.subsample),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GbdtConfig":
        known = {f: data[f] for f in cls.__dataclass_fields__ if f in data}
        return cls(**known)


@dataclass(frozen=True)
class StylometrySignature:
    window: int
    stopword_hash: str
    verb_hash: str

    @classmethod
    def current(cls, window: int) -> "StylometrySignature":
        return cls(window, textproc.STOPWORD_LIST_SHA256, textproc.VERB_LIST_SHA256)


@dataclass
class Tree:
    """Flat-array regression tree; node 0 is the root, feature -1 marks leaves."""

    feature: np.ndarray  # int32
    threshold: np.ndarray  # float64
    left: np.ndarray  # int32
    right: np.ndarray  # int32
    value: np.ndarray  # float64

    def n_nodes(self) -> int:
        return len(self.feature)

    def predict(self, X: np.ndarray) -> np.ndarray:
        """Leaf value per row; rows go left when row[f] <= t."""
        n = X.shape[0]
        cur = np.zeros(n, dtype=np.int32)
        for _ in range(self.n_nodes()):
            f = self.feature[cur]
            active = np.nonzero(f >= 0)[0]
            if active.size == 0:
                break
            nodes = cur[active]
            go_left = X[active, f[active]] <= self.threshold[nodes]
            cur[active] = np.where(go_left, self.left[nodes], self.right[nodes])
        return self.value[cur]

    def to_nodes(self) -> list[dict]:
        nodes = []
        for i in range(self.n_nodes()):
            if self.feature[i] < 0:
                nodes.append({"v": float(self.value[i])})
            else:
                nodes.append(
                    {
                        "f": int(self.feature[i]),
                        "t": float(self.threshold[i]),
                        "l": int(self.left[i]),
                        "r": int(self.right[i]),
                    }
                )
        return nodes

    @classmethod
    def from_nodes(cls, nodes: list[dict], width: int) -> "Tree":
        n = len(nodes)
        if n == 0:
            raise ModelError("tree has no nodes")
        feature = np.full(n, -1, dtype=np.int32)
        threshold = np.zeros(n, dtype=np.float64)
        left = np.full(n, -1, dtype=np.int32)
        right = np.full(n, -1, dtype=np.int32)
        value = np.zeros(n, dtype=np.float64)
        for i, node in enumerate(nodes):
            if "v" in node:
                value[i] = float(node["v"])
                if not np.isfinite(value[i]):
                    raise ModelError(f"non-finite leaf value at node {i}")
            else:
                for key in ("f", "t", "l", "r"):
                    if key not in node:
                        raise ModelError(f"internal node {i} missing key {key!r}")
                feature[i] = int(node["f"])
                threshold[i] = float(node["t"])
                left[i] = int(node["l"])
                right[i] = int(node["r"])
                if not 0 <= feature[i] < width:
                    raise ModelError(f"node {i}: feature index {feature[i]} out of range")
                if not np.isfinite(threshold[i]):
                    raise ModelError(f"node {i}: non-finite threshold")
        tree = cls(feature, threshold, left, right, value)
        tree._validate_structure()
        return tree

    def _validate_structure(self):
        n = self.n_nodes()
        visited = np.zeros(n, dtype=bool)
        stack = [0]
        while stack:
            i = stack.pop()
            if i < 0 or i >= n:
                raise ModelError(f"dangling child index {i}")
            if visited[i]:
                raise ModelError(f"node {i} reachable twice (cycle or shared child)")
            visited[i] = True
            if self.feature[i] >= 0:
                stack.append(int(self.left[i]))
                stack.append(int(self.right[i]))
        if not visited.all():
            orphan = int(np.nonzero(~visited)[0][0])
            raise ModelError(f"unreachable node {orphan}")


@dataclass
class GbdtModel:
    task: str  # "binary" | "multiclass"
    classes: list[str]
    base_scores: np.ndarray  # (1,) for binary, (K,) for multiclass
    learning_rate: float
    trees: list[list[Tree]]  # rounds x trees-per-round
    feature_names: list[str]
    stylometry: StylometrySignature
    embedding_dim: int
    config: GbdtConfig
    train_loss: list[float] | None = field(default=None, compare=False)
    valid_loss: list[float] | None = field(default=None, compare=False)

    @property
    def trees_per_round(self) -> int:
        return 1 if self.task == "binary" else len(self.classes)

    def _check_rows(self, X: np.ndarray) -> np.ndarray:
        X = np.ascontiguousarray(X, dtype=np.float64)
        if X.ndim != 2:
            raise ModelError("prediction input must be a 2-D array")
        if X.shape[1] != len(self.feature_names):
            raise ModelError(
                f"feature width mismatch: model expects {len(self.feature_names)}, "
                f"got {X.shape[1]}"
            )
        if not np.all(np.isfinite(X)):
            raise ModelError("non-finite value in prediction input")
        return X

    def raw_scores(self, X: np.ndarray) -> np.ndarray:
        X = self._check_rows(X)
        n = X.shape[0]
        raw = np.repeat(self.base_scores.reshape(1, -1), n, axis=0)
        for round_trees in self.trees:
            for k, tree in enumerate(round_trees):
                raw[:, k] += self.learning_rate * tree.predict(X)
        return raw


def _rows_of(rows) -> np.ndarray:
    # accept a FeatureMatrix without importing it (duck-typed .rows)
    return rows.rows if hasattr(rows, "rows") else np.asarray(rows, dtype=np.float64)


def predict_proba(model: GbdtModel, rows) -> np.ndarray:
    """Per-document class probabilities; each row sums to 1."""
    raw = model.raw_scores(_rows_of(rows))
    if model.task == "binary":
        p = sigmoid(raw[:, 0])
        return np.column_stack([1.0 - p, p])
    return softmax(raw)


def predict_class(model: GbdtModel, rows) -> np.ndarray:
    """Argmax class index per document; ties break to the lowest index."""
    return np.argmax(predict_proba(model, rows), axis=1)


def _model_to_dict(model: GbdtModel) -> dict:
    return {
        "version": MODEL_VERSION,
        "task": model.task,
        "classes": list(model.classes),
        "feature_names": list(model.feature_names),
        "base_scores": [float(x) for x in model.base_scores],
        "learning_rate": float(model.learning_rate),
        "config": model.config.to_dict(),
        "stylometry": {
            "window": model.stylometry.window,
            "stopword_hash": model.stylometry.stopword_hash,
            "verb_hash": model.stylometry.verb_hash,
        },
        "embedding_dim": model.embedding_dim,
        "trees": [
            [{"nodes": tree.to_nodes()} for tree in round_trees]
            for round_trees in model.trees
        ],
    }


def save_model(model: GbdtModel, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_model_to_dict(model), fh, separators=(",", ":"))
        fh.write("\n")


def load_model(path: str | Path, strict_hashes: bool = False) -> GbdtModel:
    """Load and structurally validate a model file.

    A stopword/verb list hash mismatch against the installed data files
    is a warning by default (the model still predicts on precomputed
    features); pass strict_hashes=True to refuse instead.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path.name}: not valid JSON ({exc.msg})") from None
    if not isinstance(data, dict):
        raise ModelError(f"{path.name}: expected a JSON object")
    version = data.get("version")
    if version != MODEL_VERSION:
        raise ModelError(f"unsupported model version {version!r} (expected {MODEL_VERSION})")
    for key in (
        "task",
        "classes",
        "feature_names",
        "base_scores",
        "learning_rate",
        "config",
        "stylometry",
        "embedding_dim",
        "trees",
    ):
        if key not in data:
            raise ModelError(f"{path.name}: missing key {key!r}")

    task = data["task"]
    if task not in ("binary", "multiclass"):
        raise ModelError(f"unknown task {task!r}")
    classes = [str(c) for c in data["classes"]]
    if len(classes) < 2:
        raise ModelError("model must define at least 2 classes")
    feature_names = [str(f) for f in data["feature_names"]]
    if not feature_names:
        raise ModelError("model must define feature names")
    expected_k = 1 if task == "binary" else len(classes)
    base_scores = np.asarray([float(x) for x in data["base_scores"]], dtype=np.float64)
    if base_scores.shape != (expected_k,):
        raise ModelError(
            f"base_scores has length {base_scores.shape[0]}, expected {expected_k}"
        )
    if not np.all(np.isfinite(base_scores)):
        raise ModelError("non-finite base score")
    config = GbdtConfig.from_dict(data["config"])

    sty = data["stylometry"]
    signature = StylometrySignature(
        int(sty["window"]), str(sty["stopword_hash"]), str(sty["verb_hash"])
    )
    embedding_dim = int(data["embedding_dim"])
    if embedding_dim < 0:
        raise ModelError("embedding_dim must be >= 0")

    trees = []
    for r, round_trees in enumerate(data["trees"]):
        if len(round_trees) != expected_k:
            raise ModelError(
                f"round {r} has {len(round_trees)} trees, expected {expected_k}"
            )
        trees.append(
            [Tree.from_nodes(t["nodes"], len(feature_names)) for t in round_trees]
        )

    model = GbdtModel(
        task=task,
        classes=classes,
        base_scores=base_scores,
        learning_rate=float(data["learning_rate"]),
        trees=trees,
        feature_names=feature_names,
        stylometry=signature,
        embedding_dim=embedding_dim,
        config=config,
    )

    current = StylometrySignature.current(signature.window)
    if (signature.stopword_hash, signature.verb_hash) != (
        current.stopword_hash,
        current.verb_hash,
    ):
        message = (
            "model was trained against different stopword/verb lists than the "
            "ones installed; freshly extracted features may not match"
        )
        if strict_hashes:
            raise ModelError(message)
        warnings.warn(message, StylometryHashMismatch, stacklevel=2)
    return model

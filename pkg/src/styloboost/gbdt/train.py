"""Deterministic gradient-boosted tree training.

Each round fits one regression tree per class (one total for binary) to
the second-order gradients of the running scores, using exact greedy
split search over presorted feature columns. Split search may fan out
over feature blocks on a thread pool (STYLO_THREADS); the per-block
results are reduced in feature order with strictly-greater comparisons,
so the trained model is byte-identical for any thread count.
"""

from __future__ import annotations

import numpy as np

from .backends import resolve_backend, thread_count
from .model import (
    GbdtConfig,
    GbdtModel,
    ModelError,
    NumericError,
    StylometrySignature,
    Tree,
)
from .objectives import binary_logloss, multiclass_logloss, sigmoid, softmax

_STYLO_FEATURE_COUNT = 11


class _NodeState:
    __slots__ = ("node_id", "members", "g_sum", "h_sum", "depth")

    def __init__(self, node_id, members, g_sum, h_sum, depth):
        self.node_id = node_id
        self.members = members
        self.g_sum = g_sum
        self.h_sum = h_sum
        self.depth = depth


def _scan_level(X, sort_idx, states, g, h, cfg, scan_block, executor, n_threads):
    """Best (gain, feature, threshold) per frontier node, thread-fanned."""
    n = X.shape[0]
    d = X.shape[1]
    node_of = np.full(n, -1, dtype=np.int32)
    for j, st in enumerate(states):
        node_of[st.members] = j
    members_list = [st.members for st in states]
    node_g = np.array([st.g_sum for st in states], dtype=np.float64)
    node_h = np.array([st.h_sum for st in states], dtype=np.float64)
    node_cnt = np.array([len(st.members) for st in states], dtype=np.int64)

    args = (X, sort_idx, node_of, members_list, g, h, node_g, node_h, node_cnt,
            cfg.l2_lambda, cfg.min_leaf_samples)
    # block boundaries never affect results (order-preserving reduction),
    # so capping fan-out is purely a submit-overhead guard
    n_blocks = min(n_threads, d, 16)
    if executor is None or n_blocks <= 1:
        return scan_block(*args, 0, d)

    step, extra = divmod(d, n_blocks)
    bounds = []
    lo = 0
    for b in range(n_blocks):
        hi = lo + step + (1 if b < extra else 0)
        bounds.append((lo, hi))
        lo = hi
    futures = [executor.submit(scan_block, *args, lo, hi) for lo, hi in bounds]
    best_gain, best_feat, best_thr = futures[0].result()
    best_gain = best_gain.copy()
    best_feat = best_feat.copy()
    best_thr = best_thr.copy()
    for fut in futures[1:]:
        gain, feat, thr = fut.result()
        better = gain > best_gain  # strict: earlier blocks win ties (lower feature)
        best_gain[better] = gain[better]
        best_feat[better] = feat[better]
        best_thr[better] = thr[better]
    return best_gain, best_feat, best_thr


def _grow_tree(X, sort_idx, g, h, active, cfg, scan_block, executor, n_threads) -> Tree:
    feature = []
    threshold = []
    left = []
    right = []
    value = []

    def new_node():
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        value.append(0.0)
        return len(feature) - 1

    lam = cfg.l2_lambda
    root = new_node()
    frontier = [
        _NodeState(root, active, float(np.sum(g[active])), float(np.sum(h[active])), 0)
    ]
    while frontier:
        searchable = [
            st
            for st in frontier
            if st.depth < cfg.max_depth and len(st.members) >= 2 * cfg.min_leaf_samples
        ]
        found = {}
        if searchable:
            gains, feats, thrs = _scan_level(
                X, sort_idx, searchable, g, h, cfg, scan_block, executor, n_threads
            )
            for j, st in enumerate(searchable):
                if feats[j] >= 0 and gains[j] > 0.0:
                    found[st.node_id] = (int(feats[j]), float(thrs[j]))
        next_frontier = []
        for st in frontier:
            if st.node_id in found:
                f, t = found[st.node_id]
                mask = X[st.members, f] <= t
                left_members = st.members[mask]
                right_members = st.members[~mask]
                feature[st.node_id] = f
                threshold[st.node_id] = t
                left_id = new_node()
                right_id = new_node()
                left[st.node_id] = left_id
                right[st.node_id] = right_id
                next_frontier.append(
                    _NodeState(
                        left_id,
                        left_members,
                        float(np.sum(g[left_members])),
                        float(np.sum(h[left_members])),
                        st.depth + 1,
                    )
                )
                next_frontier.append(
                    _NodeState(
                        right_id,
                        right_members,
                        float(np.sum(g[right_members])),
                        float(np.sum(h[right_members])),
                        st.depth + 1,
                    )
                )
            else:
                value[st.node_id] = -st.g_sum / (st.h_sum + lam)
        frontier = next_frontier

    return Tree(
        np.asarray(feature, dtype=np.int32),
        np.asarray(threshold, dtype=np.float64),
        np.asarray(left, dtype=np.int32),
        np.asarray(right, dtype=np.int32),
        np.asarray(value, dtype=np.float64),
    )


def _clamped_log_odds(p: float) -> float:
    p = min(max(p, 1e-6), 1.0 - 1e-6)
    return float(np.log(p / (1.0 - p)))


def _clamped_log(p: float) -> float:
    p = min(max(p, 1e-6), 1.0 - 1e-6)
    return float(np.log(p))


def _round_active(n: int, cfg: GbdtConfig, round_index: int) -> np.ndarray:
    if cfg.subsample >= 1.0:
        return np.arange(n, dtype=np.int64)
    size = max(2, int(cfg.subsample * n))
    seed_u64 = cfg.seed & 0xFFFFFFFFFFFFFFFF
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed_u64, round_index])))
    return np.sort(rng.choice(n, size=size, replace=False)).astype(np.int64)


def _validation_split(n: int, fraction: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    size = max(1, int(fraction * n))
    if size >= n - 1:
        raise ModelError("validation fraction leaves fewer than 2 training samples")
    seed_u64 = seed & 0xFFFFFFFFFFFFFFFF
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed_u64, 0x5A11D])))
    valid = np.sort(rng.choice(n, size=size, replace=False)).astype(np.int64)
    mask = np.ones(n, dtype=bool)
    mask[valid] = False
    return np.nonzero(mask)[0].astype(np.int64), valid


def train(
    matrix,
    config: GbdtConfig | None = None,
    task: str = "binary",
    mttr_window: int = 50,
    threads: int | None = None,
    backend: str | None = None,
    valid_fraction: float | None = None,
    patience: int = 10,
) -> GbdtModel:
    """Train a boosted-tree classifier on a labeled FeatureMatrix.

    The returned model carries the effective config, the stylometry
    list hashes, and (on ``train_loss``, not serialized) the training
    log-loss after the base scores and after every round.

    ``valid_fraction`` carves a seeded holdout out of the rows and stops
    early once its loss has not improved for ``patience`` rounds,
    keeping the ensemble at its best round. Off by default: the
    headline path always runs exactly ``config.rounds`` rounds.
    """
    cfg = config or GbdtConfig()
    if task not in ("binary", "multiclass"):
        raise ModelError(f"unknown task {task!r}")
    if matrix.labels is None:
        raise ModelError("training requires a labeled feature matrix")
    if matrix.class_names is None:
        raise ModelError("training requires class names (assemble with a schema)")

    X = np.asarray(matrix.rows, dtype=np.float64)
    y = np.asarray(matrix.labels, dtype=np.int64)
    n = X.shape[0]
    if n == 0 or X.size == 0:
        raise ModelError("empty feature matrix")
    if n < 2:
        raise ModelError("need at least 2 samples")
    if not np.all(np.isfinite(X)):
        raise ModelError("non-finite feature value")
    classes = list(matrix.class_names)
    K = len(classes)
    if task == "binary" and K != 2:
        raise ModelError(f"binary task requires exactly 2 classes, got {K}")
    if np.any(y < 0) or np.any(y >= K):
        raise ModelError("label index out of range")

    X_valid = y_valid = None
    if valid_fraction is not None:
        if not 0.0 < valid_fraction < 1.0:
            raise ModelError("valid_fraction must be in (0, 1)")
        if patience < 1:
            raise ModelError("patience must be >= 1")
        train_idx, valid_idx = _validation_split(n, valid_fraction, cfg.seed)
        X_valid, y_valid = X[valid_idx], y[valid_idx]
        X, y = X[train_idx], y[train_idx]
        n = X.shape[0]

    present = np.unique(y)
    if len(present) < 2:
        raise ModelError("need at least 2 classes present in the training labels")

    n_threads = thread_count() if threads is None else max(1, threads)
    _, scan_block = resolve_backend(backend)

    Xf = np.asfortranarray(X)
    sort_idx = np.asfortranarray(np.argsort(X, axis=0, kind="stable").astype(np.int64))

    executor = None
    losses: list[float] = []
    valid_losses: list[float] | None = None
    best_round = None
    trees: list[list[Tree]] = []
    try:
        if n_threads > 1:
            from concurrent.futures import ThreadPoolExecutor

            executor = ThreadPoolExecutor(max_workers=n_threads)

        if task == "binary":
            y_float = (y == 1).astype(np.float64)
            base = _clamped_log_odds(float(np.mean(y_float)))
            base_scores = np.array([base], dtype=np.float64)
            scores = np.full(n, base, dtype=np.float64)
            losses.append(binary_logloss(scores, y_float))
            if X_valid is not None:
                yv_float = (y_valid == 1).astype(np.float64)
                v_scores = np.full(len(X_valid), base, dtype=np.float64)
                valid_losses = [binary_logloss(v_scores, yv_float)]
                best_round = 0
            for r in range(cfg.rounds):
                p = sigmoid(scores)
                g = np.ascontiguousarray(p - y_float)
                h = np.ascontiguousarray(p * (1.0 - p))
                active = _round_active(n, cfg, r)
                tree = _grow_tree(
                    Xf, sort_idx, g, h, active, cfg, scan_block, executor, n_threads
                )
                scores += cfg.learning_rate * tree.predict(X)
                trees.append([tree])
                losses.append(binary_logloss(scores, y_float))
                if not np.isfinite(losses[-1]):
                    raise NumericError(f"non-finite training loss at round {r}")
                if valid_losses is not None:
                    v_scores += cfg.learning_rate * tree.predict(X_valid)
                    valid_losses.append(binary_logloss(v_scores, yv_float))
                    if valid_losses[-1] < valid_losses[best_round]:
                        best_round = r + 1
                    elif (r + 1) - best_round >= patience:
                        break
        else:
            counts = np.bincount(y, minlength=K).astype(np.float64)
            base_scores = np.array(
                [_clamped_log(c / n) for c in counts], dtype=np.float64
            )
            base_scores -= base_scores.max()
            scores = np.tile(base_scores, (n, 1))
            onehot = np.eye(K, dtype=np.float64)[y]
            losses.append(multiclass_logloss(scores, y))
            if X_valid is not None:
                v_scores = np.tile(base_scores, (len(X_valid), 1))
                valid_losses = [multiclass_logloss(v_scores, y_valid)]
                best_round = 0
            for r in range(cfg.rounds):
                p = softmax(scores)
                active = _round_active(n, cfg, r)
                round_trees = []
                for k in range(K):
                    g = np.ascontiguousarray(p[:, k] - onehot[:, k])
                    h = np.ascontiguousarray(p[:, k] * (1.0 - p[:, k]))
                    tree = _grow_tree(
                        Xf, sort_idx, g, h, active, cfg, scan_block, executor, n_threads
                    )
                    scores[:, k] += cfg.learning_rate * tree.predict(X)
                    round_trees.append(tree)
                trees.append(round_trees)
                losses.append(multiclass_logloss(scores, y))
                if not np.isfinite(losses[-1]):
                    raise NumericError(f"non-finite training loss at round {r}")
                if valid_losses is not None:
                    for k, tree in enumerate(round_trees):
                        v_scores[:, k] += cfg.learning_rate * tree.predict(X_valid)
                    valid_losses.append(multiclass_logloss(v_scores, y_valid))
                    if valid_losses[-1] < valid_losses[best_round]:
                        best_round = r + 1
                    elif (r + 1) - best_round >= patience:
                        break
    finally:
        if executor is not None:
            executor.shutdown(wait=True)

    if best_round is not None:
        trees = trees[:best_round]
        losses = losses[: best_round + 1]
        valid_losses = valid_losses[: best_round + 1]

    names = list(matrix.names)
    embedding_dim = (
        len(names) - _STYLO_FEATURE_COUNT
        if len(names) > _STYLO_FEATURE_COUNT
        else 0
    )
    return GbdtModel(
        task=task,
        classes=classes,
        base_scores=base_scores,
        learning_rate=cfg.learning_rate,
        trees=trees,
        feature_names=names,
        stylometry=StylometrySignature.current(mttr_window),
        embedding_dim=embedding_dim,
        config=cfg,
        train_loss=losses,
        valid_loss=valid_losses,
    )

"""Command-line pipeline: extract-features, train, predict, evaluate, gen-synthetic.

Every command is reproducible: the same inputs and configuration produce
byte-identical output files. Progress and timing go to stderr only, so
artifacts never embed timestamps. Validation failures exit 1 with a
single-line diagnostic; a non-finite training loss exits 2.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from pathlib import Path

import numpy as np

from . import corpus as corpus_mod
from . import features as features_mod
from . import stylometry, synth
from .embedding_io import EmbeddingFormatError, read_embeddings, write_embeddings
from .evaluation import EvalError, evaluate, render_report
from .features import FeatureError, FeatureMatrix
from .gbdt import (
    GbdtConfig,
    ModelError,
    NumericError,
    load_model,
    predict_proba,
    save_model,
    thread_count,
    train,
)

_CONFIG_KEYS = set(GbdtConfig.__dataclass_fields__) | {"mttr_window"}


class CliError(ValueError):
    pass


def _extract_all(texts: list[str], window: int) -> list[stylometry.StyloVector]:
    threads = thread_count()
    if threads > 1 and len(texts) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda t: stylometry.extract(t, window), texts))
    return [stylometry.extract(t, window) for t in texts]


def _load_run_config(args) -> tuple[GbdtConfig, int]:
    """Merge config file and CLI overrides; flags win."""
    values: dict = {}
    if args.config:
        with open(args.config, encoding="utf-8") as fh:
            try:
                loaded = json.load(fh)
            except json.JSONDecodeError as exc:
                raise CliError(f"config file is not valid JSON ({exc.msg})") from None
        if not isinstance(loaded, dict):
            raise CliError("config file must contain a JSON object")
        unknown = set(loaded) - _CONFIG_KEYS
        if unknown:
            raise CliError(
                f"unknown config key {sorted(unknown)[0]!r}; allowed: {sorted(_CONFIG_KEYS)}"
            )
        values.update(loaded)
    overrides = {
        "rounds": args.rounds,
        "max_depth": args.max_depth,
        "learning_rate": args.learning_rate,
        "l2_lambda": args.l2_lambda,
        "min_leaf_samples": args.min_leaf_samples,
        "seed": args.seed,
        "subsample": args.subsample,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.mttr_window is not None:
        values["mttr_window"] = args.mttr_window
    window = int(values.pop("mttr_window", stylometry.DEFAULT_MTTR_WINDOW))
    return GbdtConfig.from_dict(values), window


def cmd_extract_features(args) -> int:
    docs = corpus_mod.load_corpus(args.input)
    embeddings = read_embeddings(args.embeddings) if args.embeddings else None
    if embeddings is not None:
        missing = [d.id for d in docs if d.id not in embeddings]
        if missing:
            raise CliError(
                f"no embedding for id {missing[0]!r} ({len(missing)} missing)"
            )
    vectors = _extract_all([d.text for d in docs], args.mttr_window)
    features_mod.write_feature_file(args.output, [d.id for d in docs], vectors, embeddings)
    print(f"extracted features for {len(docs)} documents -> {args.output}", file=sys.stderr)
    return 0


def cmd_train(args) -> int:
    started = time.perf_counter()
    cfg, window = _load_run_config(args)
    schema = corpus_mod.schema_for_task(args.task)
    docs = corpus_mod.load_corpus(args.corpus, schema, collapse_ai=args.collapse_ai)
    labels_by_id = {d.id: d.label for d in docs}
    doc_ids, names, rows = features_mod.read_feature_file(args.features)

    label_indices = []
    for doc_id in doc_ids:
        if doc_id not in labels_by_id:
            raise CliError(f"feature id {doc_id!r} not present in corpus {args.corpus}")
        label = labels_by_id[doc_id]
        if label is None:
            raise CliError(f"document {doc_id!r} has no label; training needs labels")
        label_indices.append(corpus_mod.label_to_index(label, schema))

    matrix = FeatureMatrix(
        doc_ids,
        names,
        rows,
        np.asarray(label_indices, dtype=np.int64),
        list(schema.classes),
    )
    model = train(
        matrix,
        cfg,
        task=args.task,
        mttr_window=window,
        valid_fraction=args.valid,
        patience=args.patience,
    )
    save_model(model, args.out)
    elapsed = time.perf_counter() - started
    kept = len(model.trees)
    stopped = f" (early stop kept {kept})" if kept < cfg.rounds else ""
    print(
        f"trained {kept} rounds{stopped}, final train log-loss "
        f"{model.train_loss[-1]:.6f}, {elapsed:.2f}s -> {args.out}",
        file=sys.stderr,
    )
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    doc_ids, names, rows = features_mod.read_feature_file(args.features)
    probs = predict_proba(model, rows)
    classes = model.classes
    pred = np.argmax(probs, axis=1)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "predicted_label"] + [f"prob_{c}" for c in classes])
        for i, doc_id in enumerate(doc_ids):
            writer.writerow(
                [doc_id, classes[int(pred[i])]] + [repr(float(p)) for p in probs[i]]
            )
    print(f"predicted {len(doc_ids)} documents -> {args.out}", file=sys.stderr)
    return 0


def _read_predictions(path: str) -> dict[str, str]:
    preds: dict[str, str] = {}
    with open(path, encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or not {"id", "predicted_label"} <= set(reader.fieldnames):
            raise CliError("predictions CSV needs 'id' and 'predicted_label' columns")
        for row in reader:
            doc_id = row.get("id")
            label = row.get("predicted_label")
            if not doc_id or label is None:
                raise CliError(f"predictions row {reader.line_num}: missing id or label")
            if doc_id in preds:
                raise CliError(f"duplicate id {doc_id!r} in predictions")
            preds[doc_id] = label
    if not preds:
        raise CliError("predictions CSV is empty")
    return preds


def cmd_evaluate(args) -> int:
    schema = corpus_mod.schema_for_task(args.task)
    docs = corpus_mod.load_corpus(args.corpus, schema, collapse_ai=args.collapse_ai)
    preds = _read_predictions(args.pred)

    gold_indices = []
    pred_indices = []
    for doc in docs:
        if doc.label is None:
            raise CliError(f"gold document {doc.id!r} has no label")
        if doc.id not in preds:
            raise CliError(f"no prediction for id {doc.id!r}")
        gold_indices.append(corpus_mod.label_to_index(doc.label, schema))
        pred_indices.append(corpus_mod.label_to_index(preds[doc.id].lower(), schema))
    extra = set(preds) - {d.id for d in docs}
    if extra:
        raise CliError(f"prediction for unknown id {sorted(extra)[0]!r}")

    report = evaluate(gold_indices, pred_indices, schema)
    rendered = render_report(report, "json")
    if args.report:
        Path(args.report).write_text(rendered + "\n", encoding="utf-8")
    else:
        print(rendered)
    print(f"macro_f1={report.macro_f1:.6f}", file=sys.stderr)
    return 0


def cmd_gen_synthetic(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    docs = synth.generate(args.seed, args.per_class)
    synth.write_corpus_jsonl(docs, out_dir / "corpus.jsonl")
    table = synth.synth_embeddings(docs, args.seed)
    write_embeddings(table, out_dir / "embeddings.bin", "binary")
    print(
        f"wrote {len(docs)} documents and {table.dim}-dim embeddings to {out_dir}/",
        file=sys.stderr,
    )
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="styloboost",
        description=(
            "Stylometric features + gradient-boosted trees for AI-text "
            "detection (binary) and model attribution (multiclass)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("extract-features", help="compute per-document feature JSONL")
    p.add_argument("--input", required=True, help="corpus file (JSONL or CSV)")
    p.add_argument("--output", required=True, help="feature JSONL to write")
    p.add_argument("--embeddings", help="optional embedding file (binary or JSONL)")
    p.add_argument(
        "--mttr-window",
        type=int,
        default=stylometry.DEFAULT_MTTR_WINDOW,
        help="sliding window for the moving-average type-token ratio (default 50)",
    )
    p.set_defaults(func=cmd_extract_features)

    p = sub.add_parser("train", help="train a boosted-tree classifier")
    p.add_argument("--features", required=True, help="feature JSONL from extract-features")
    p.add_argument("--corpus", required=True, help="labeled corpus file")
    p.add_argument("--task", required=True, choices=["binary", "multiclass"])
    p.add_argument("--out", required=True, help="model JSON to write")
    p.add_argument("--config", help="JSON config file (GbdtConfig field names)")
    p.add_argument(
        "--collapse-ai",
        action="store_true",
        help="map the six generator class labels onto 'ai' when loading the corpus",
    )
    p.add_argument("--rounds", type=int, help="boosting rounds (default 300)")
    p.add_argument("--max-depth", type=int, help="maximum tree depth (default 6)")
    p.add_argument("--learning-rate", type=float, help="shrinkage in (0,1] (default 0.1)")
    p.add_argument("--l2-lambda", type=float, help="L2 leaf regularization (default 1.0)")
    p.add_argument("--min-leaf-samples", type=int, help="minimum samples per leaf (default 20)")
    p.add_argument("--subsample", type=float, help="per-round row subsample in (0,1] (default 1.0)")
    p.add_argument("--seed", type=int, help="subsampling seed (default 0)")
    p.add_argument("--mttr-window", type=int, help="window recorded in the model (default 50)")
    p.add_argument(
        "--valid",
        type=float,
        help="holdout fraction in (0,1) enabling early stopping (off by default)",
    )
    p.add_argument(
        "--patience",
        type=int,
        default=10,
        help="rounds without holdout improvement before stopping (default 10)",
    )
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="write prediction CSV for a feature file")
    p.add_argument("--model", required=True, help="model JSON from train")
    p.add_argument("--features", required=True, help="feature JSONL")
    p.add_argument("--out", required=True, help="CSV to write: id,predicted_label,prob_<class>...")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("evaluate", help="score a prediction CSV against gold labels")
    p.add_argument("--pred", required=True, help="prediction CSV from predict")
    p.add_argument("--corpus", required=True, help="gold labeled corpus")
    p.add_argument("--task", required=True, choices=["binary", "multiclass"])
    p.add_argument(
        "--collapse-ai",
        action="store_true",
        help="map the six generator class labels onto 'ai' when loading gold labels",
    )
    p.add_argument("--report", help="write the JSON report here instead of stdout")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("gen-synthetic", help="write the seeded synthetic corpus + embeddings")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--per-class", type=int, required=True, help="documents per class")
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_gen_synthetic)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except NumericError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (
        CliError,
        corpus_mod.CorpusError,
        EmbeddingFormatError,
        FeatureError,
        ModelError,
        EvalError,
        OSError,
        ValueError,
    ) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

#!/usr/bin/env python3
"""Benchmark the compiled split kernel against the pure numpy fallback.

Trains the same model with both backends on a synthetic attribution
workload, reports wall time, and verifies the resulting model files are
byte-identical (the backends are required to be arithmetic-identical).

Usage:
    python benchmarks/bench_backends.py [--per-class 120] [--rounds 60]
"""

import argparse
import json
import time

from styloboost.corpus import MULTICLASS_SCHEMA
from styloboost.features import assemble
from styloboost.gbdt import GbdtConfig, compiled_available, train
from styloboost.gbdt.model import _model_to_dict
from styloboost.stylometry import extract
from styloboost.synth import generate, synth_embeddings


def build_matrix(per_class: int, seed: int = 7):
    docs = generate(seed, per_class)
    emb = synth_embeddings(docs, seed)
    stylo = [extract(d.text) for d in docs]
    return assemble(docs, stylo, emb, MULTICLASS_SCHEMA)


def run(backend: str, matrix, cfg: GbdtConfig):
    started = time.perf_counter()
    model = train(matrix, cfg, "multiclass", backend=backend)
    elapsed = time.perf_counter() - started
    return elapsed, json.dumps(_model_to_dict(model))


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--per-class", type=int, default=120)
    parser.add_argument("--rounds", type=int, default=60)
    parser.add_argument("--max-depth", type=int, default=6)
    args = parser.parse_args()

    matrix = build_matrix(args.per_class)
    cfg = GbdtConfig(rounds=args.rounds, max_depth=args.max_depth)
    n, d = matrix.rows.shape
    print(f"workload: {n} rows x {d} features, {cfg.rounds} rounds x 7 classes")

    t_py, model_py = run("python", matrix, cfg)
    print(f"python backend: {t_py:7.2f}s")

    if not compiled_available():
        print("cython backend: not built (pip install -e . --no-build-isolation)")
        return 0

    t_cy, model_cy = run("cython", matrix, cfg)
    print(f"cython backend: {t_cy:7.2f}s  ({t_py / t_cy:.1f}x faster)")
    if model_py == model_cy:
        print("parity: serialized models are byte-identical")
        return 0
    print("parity: MISMATCH between backends")
    return 1


if __name__ == "__main__":
    raise SystemExit(main())

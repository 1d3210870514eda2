"""embedgen command line: corpus JSONL in, embedding file out."""

from __future__ import annotations

import argparse
import sys

from . import DEFAULT_MODEL, EmbedJob, EmbedgenError, run_job
from .encoders import EncoderError


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="embedgen",
        description=(
            "Compute sentence embeddings for a corpus and write them in the "
            "styloboost embedding format (EMB1 binary by default)."
        ),
    )
    parser.add_argument("--input", required=True, help="corpus JSONL with id/text per line")
    parser.add_argument(
        "--model",
        default=DEFAULT_MODEL,
        help=f"model checkpoint, or hash:<dim> for the offline encoder (default {DEFAULT_MODEL})",
    )
    parser.add_argument("--batch", type=int, default=32, help="encoding batch size (default 32)")
    parser.add_argument("--out", required=True, help="embedding file to write")
    parser.add_argument(
        "--jsonl", action="store_true", help="write JSONL instead of EMB1 binary"
    )
    args = parser.parse_args(argv)

    job = EmbedJob(
        corpus_path=args.input,
        model_id=args.model,
        batch_size=args.batch,
        output_path=args.out,
        jsonl=args.jsonl,
    )
    try:
        summary = run_job(job)
    except (EmbedgenError, EncoderError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(
        f"embedded {summary.count} documents (dim {summary.dim}) "
        f"in {summary.elapsed:.2f}s -> {args.out}",
        file=sys.stderr,
    )
    return 0


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()

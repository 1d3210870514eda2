"""Text encoders: pretrained sentence-embedding models or the offline hash encoder.

The model identifier selects the backend:

  * ``hash:<dim>`` — a deterministic token-hashing encoder that needs no
    downloads. Useful for tests, CI, and pipeline dry runs; identical
    texts map to identical vectors.
  * anything else — a sentence-transformers checkpoint name or path
    (default pinned in cli.py to an E5-family model).

All encoders return one float32 vector per input text; normalization is
applied by the caller.
"""

from __future__ import annotations

import hashlib

import numpy as np


class EncoderError(RuntimeError):
    pass


class HashEncoder:
    """Deterministic bag-of-hashed-tokens embedding (offline, no weights)."""

    def __init__(self, dim: int):
        if dim < 1:
            raise EncoderError(f"hash encoder dim must be >= 1, got {dim}")
        self.dim = dim

    def encode(self, texts: list[str], batch_size: int) -> np.ndarray:
        del batch_size  # no batching needed
        out = np.zeros((len(texts), self.dim), dtype=np.float32)
        for row, text in enumerate(texts):
            tokens = text.lower().split()
            if not tokens:
                out[row, 0] = 1.0
                continue
            for token in tokens:
                digest = hashlib.sha256(token.encode("utf-8")).digest()
                index = int.from_bytes(digest[:8], "little") % self.dim
                sign = 1.0 if digest[8] % 2 == 0 else -1.0
                out[row, index] += sign
            if not out[row].any():
                out[row, 0] = 1.0
        return out


class SentenceTransformerEncoder:
    """Wrapper around a sentence-transformers checkpoint (lazy import)."""

    def __init__(self, model_id: str):
        try:
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise EncoderError(
                "sentence-transformers is not installed; install the 'model' "
                "extra or use a hash:<dim> encoder"
            ) from exc
        try:
            self._model = SentenceTransformer(model_id)
        except Exception as exc:
            raise EncoderError(f"failed to load model {model_id!r}: {exc}") from exc
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str], batch_size: int) -> np.ndarray:
        vectors = self._model.encode(
            texts,
            batch_size=batch_size,
            convert_to_numpy=True,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float32)


def make_encoder(model_id: str):
    if model_id.startswith("hash:"):
        try:
            dim = int(model_id.split(":", 1)[1])
        except ValueError:
            raise EncoderError(f"bad hash encoder spec {model_id!r}; use hash:<dim>") from None
        return HashEncoder(dim)
    return SentenceTransformerEncoder(model_id)

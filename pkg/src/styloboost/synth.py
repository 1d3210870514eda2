"""Deterministic synthetic corpus: 7 style-distinct classes plus embeddings.

All randomness derives from a counter-based splitmix-style generator
keyed on (seed, purpose, class index, document index), so the same seed
reproduces the same corpus byte-for-byte on any platform — no dependence
on process RNG state. The mixing recipe is documented in the README so
other implementations can reproduce it exactly.

The synthetic text is not natural language; the class profiles exist to
give the stylometric features and the synthetic embeddings a real,
learnable class signal at desk scale.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import textproc
from .corpus import MULTICLASS_CLASSES, Document
from .embedding_io import EmbeddingTable

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15

# stream purposes (mixing keys)
_VOCAB = 1
_DOC = 2
_EMB_MEAN = 3
_EMB_NOISE = 4

EMBEDDING_DIM = 32
_EMB_NOISE_SCALE = 0.8

_STOPWORDS = tuple(sorted(textproc.STOPWORDS))
_LETTERS = "abcdefghijklmnopqrstuvwxyz"


def mix64(x: int) -> int:
    """splitmix64 finalizer (Steele et al. constants)."""
    x &= _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return x ^ (x >> 31)


class SplitMix:
    """Sequential splitmix64 stream with a keyed starting state."""

    def __init__(self, seed: int, *keys: int):
        state = mix64(seed & _MASK64)
        for key in keys:
            state = mix64(state ^ mix64(((key & _MASK64) + 1) * _GOLDEN & _MASK64))
        self._state = state

    def next_u64(self) -> int:
        self._state = (self._state + _GOLDEN) & _MASK64
        return mix64(self._state)

    def next_float(self) -> float:
        """Uniform in [0, 1) with 53 random bits."""
        return (self.next_u64() >> 11) * 2.0**-53

    def below(self, n: int) -> int:
        return self.next_u64() % n


@dataclass(frozen=True)
class StyleProfile:
    vocab_size: int
    stopword_rate: float
    sentence_len_mean: float
    sentence_len_dispersion: float
    repetition_rate: float
    verb_suffix_rate: float
    uppercase_rate: float

    def __post_init__(self):
        if self.vocab_size < 10:
            raise ValueError("vocab_size must be >= 10")
        for name in (
            "stopword_rate",
            "sentence_len_dispersion",
            "repetition_rate",
            "verb_suffix_rate",
            "uppercase_rate",
        ):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must be in [0, 1]")


# one profile per class, in MULTICLASS_CLASSES order; pairs differ in >= 3 params
DEFAULT_PROFILES: dict[str, StyleProfile] = {
    "human": StyleProfile(900, 0.30, 24.0, 0.50, 0.04, 0.10, 0.02),
    "gemma-2-9b": StyleProfile(300, 0.38, 9.0, 0.10, 0.18, 0.06, 0.00),
    "gpt_4-o": StyleProfile(650, 0.44, 13.0, 0.18, 0.08, 0.14, 0.01),
    "llama-8b": StyleProfile(180, 0.22, 6.0, 0.06, 0.30, 0.04, 0.06),
    "mistral-7b": StyleProfile(520, 0.18, 17.0, 0.30, 0.12, 0.22, 0.03),
    "qwen-2-72b": StyleProfile(380, 0.50, 11.0, 0.22, 0.22, 0.02, 0.12),
    "yi-large": StyleProfile(760, 0.12, 28.0, 0.40, 0.06, 0.28, 0.00),
}


def _class_vocab(seed: int, class_index: int, size: int) -> list[str]:
    stream = SplitMix(seed, _VOCAB, class_index)
    words = []
    for _ in range(size):
        length = 3 + stream.below(6)
        words.append("".join(_LETTERS[stream.below(26)] for _ in range(length)))
    return words


def _doc_text(profile: StyleProfile, vocab: list[str], stream: SplitMix) -> str:
    sentences = []
    n_sentences = 6 + stream.below(8)
    emitted: list[str] = []
    for _ in range(n_sentences):
        u = stream.next_float()
        spread = profile.sentence_len_dispersion * (2.0 * u - 1.0)
        length = max(2, int(round(profile.sentence_len_mean * (1.0 + spread))))
        words = []
        for _ in range(length):
            r = stream.next_float()
            if r < profile.stopword_rate:
                word = _STOPWORDS[stream.below(len(_STOPWORDS))]
            elif r < profile.stopword_rate + profile.repetition_rate and emitted:
                word = emitted[stream.below(len(emitted))]
            else:
                word = vocab[stream.below(len(vocab))]
                if stream.next_float() < profile.verb_suffix_rate:
                    word += "ing" if stream.next_float() < 0.5 else "ed"
            emitted.append(word)
            if stream.next_float() < profile.uppercase_rate:
                word = word.upper()
            words.append(word)
        words[0] = words[0][0].upper() + words[0][1:]
        sentences.append(" ".join(words) + ".")
    return " ".join(sentences)


def generate(
    seed: int,
    docs_per_class: int,
    profiles: dict[str, StyleProfile] | None = None,
) -> list[Document]:
    """Produce 7 x docs_per_class labeled documents, class-major order."""
    if docs_per_class < 1:
        raise ValueError("docs_per_class must be >= 1")
    profiles = profiles or DEFAULT_PROFILES
    docs = []
    for c, name in enumerate(MULTICLASS_CLASSES):
        profile = profiles[name]
        vocab = _class_vocab(seed, c, profile.vocab_size)
        for i in range(docs_per_class):
            stream = SplitMix(seed, _DOC, c, i)
            docs.append(
                Document(id=f"{name}-{i:05d}", text=_doc_text(profile, vocab, stream), label=name)
            )
    return docs


def synth_embeddings(docs: list[Document], seed: int, dim: int = EMBEDDING_DIM) -> EmbeddingTable:
    """Class-mean vectors plus seeded noise, one per labeled document.

    Noise per component is a scaled Irwin-Hall(4) sum, so the recipe
    stays pure integer/float arithmetic (no platform RNG, no libm).
    """
    class_index = {name: c for c, name in enumerate(MULTICLASS_CLASSES)}
    means: dict[int, list[float]] = {}
    counters: dict[int, int] = {}
    entries: dict[str, np.ndarray] = {}
    for doc in docs:
        if doc.label not in class_index:
            raise ValueError(f"document {doc.id!r} has non-schema label {doc.label!r}")
        c = class_index[doc.label]
        if c not in means:
            mean_stream = SplitMix(seed, _EMB_MEAN, c)
            means[c] = [2.0 * mean_stream.next_float() - 1.0 for _ in range(dim)]
        doc_counter = counters.get(c, 0)
        counters[c] = doc_counter + 1
        noise_stream = SplitMix(seed, _EMB_NOISE, c, doc_counter)
        vec = np.empty(dim, dtype=np.float32)
        for j in range(dim):
            s = sum(noise_stream.next_float() for _ in range(4)) - 2.0
            vec[j] = np.float32(means[c][j] + _EMB_NOISE_SCALE * s)
        entries[doc.id] = vec
    return EmbeddingTable(dim=dim, entries=entries)


def write_corpus_jsonl(docs: list[Document], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for doc in docs:
            fh.write(json.dumps({"id": doc.id, "text": doc.text, "label": doc.label}) + "\n")

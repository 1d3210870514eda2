"""The 11 stylometric features, computed as a fixed-order vector.

Feature order is part of the on-disk contract (feature files, model
files) and never changes:

    word_count, unique_word_count, stop_word_count, mttr, hapax_rate,
    bigram_uniqueness, sentence_count, avg_sentence_length,
    lowercase_ratio, burstiness, verb_ratio

Type-based features (unique words, hapaxes, bigrams, the moving-average
type-token ratio) case-fold tokens; lowercase_ratio is computed over the
raw text. Degenerate inputs never raise: empty text yields the all-zero
vector.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import textproc

DEFAULT_MTTR_WINDOW = 50

FEATURE_NAMES = (
    "word_count",
    "unique_word_count",
    "stop_word_count",
    "mttr",
    "hapax_rate",
    "bigram_uniqueness",
    "sentence_count",
    "avg_sentence_length",
    "lowercase_ratio",
    "burstiness",
    "verb_ratio",
)


def feature_names() -> list[str]:
    """Canonical feature order; index i names values()[i]."""
    return list(FEATURE_NAMES)


@dataclass(frozen=True)
class StyloVector:
    word_count: float
    unique_word_count: float
    stop_word_count: float
    mttr: float
    hapax_rate: float
    bigram_uniqueness: float
    sentence_count: float
    avg_sentence_length: float
    lowercase_ratio: float
    burstiness: float
    verb_ratio: float

    def values(self) -> list[float]:
        return [getattr(self, name) for name in FEATURE_NAMES]


def _mttr(folded: list[str], window: int) -> float:
    n = len(folded)
    if n == 0:
        return 0.0
    if n < window:
        return len(set(folded)) / n
    counts: dict[str, int] = {}
    distinct = 0
    acc = 0.0
    for i, tok in enumerate(folded):
        counts[tok] = counts.get(tok, 0) + 1
        if counts[tok] == 1:
            distinct += 1
        if i >= window:
            out = folded[i - window]
            counts[out] -= 1
            if counts[out] == 0:
                distinct -= 1
        if i >= window - 1:
            acc += distinct / window
    return acc / (n - window + 1)


def extract(text: str, mttr_window: int = DEFAULT_MTTR_WINDOW) -> StyloVector:
    """Compute the 11-feature vector for one document.

    ``mttr_window`` is the sliding-window width for the moving-average
    type-token ratio; texts shorter than the window fall back to the
    plain type-token ratio.
    """
    if mttr_window < 1:
        raise ValueError("mttr_window must be >= 1")
    stream = textproc.tokenize(text)
    tokens = stream.tokens
    folded = [t.casefold() for t in tokens]
    n = len(tokens)

    counts: dict[str, int] = {}
    for tok in folded:
        counts[tok] = counts.get(tok, 0) + 1
    unique = len(counts)
    stop_count = sum(1 for tok in tokens if textproc.is_stopword(tok))
    hapax = sum(1 for c in counts.values() if c == 1) / n if n else 0.0
    bigram = (
        len({(folded[i], folded[i + 1]) for i in range(n - 1)}) / (n - 1)
        if n >= 2
        else 0.0
    )

    sentences = textproc.split_sentences(text, stream)
    lengths = sentences.lengths()
    s = len(lengths)
    avg_len = n / s if n else 0.0
    lower_ratio = stream.lowercase / stream.alphabetic if stream.alphabetic else 0.0

    if s < 2:
        burst = 0.0
    else:
        # population standard deviation over per-sentence token counts
        mu = sum(lengths) / s
        acc = 0.0
        for length in lengths:
            d = length - mu
            acc += d * d
        sigma = math.sqrt(acc / s)
        burst = (sigma - mu) / (sigma + mu)

    verb_ratio = sum(1 for tok in tokens if textproc.is_verb(tok)) / n if n else 0.0

    return StyloVector(
        word_count=float(n),
        unique_word_count=float(unique),
        stop_word_count=float(stop_count),
        mttr=_mttr(folded, mttr_window),
        hapax_rate=hapax,
        bigram_uniqueness=bigram,
        sentence_count=float(s),
        avg_sentence_length=avg_len,
        lowercase_ratio=lower_ratio,
        burstiness=burst,
        verb_ratio=verb_ratio,
    )

"""Deterministic tokenization, sentence segmentation, stopwords, verb tagging.

Everything in this module is pure and total: no model downloads, no
locale dependence, no randomness. The stopword and verb lists are
versioned data files shipped with the package; their SHA-256 hashes are
recorded in trained model files (see :mod:`styloboost.gbdt`) so a model
can detect that it is being used against different lists.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from importlib import resources

APOSTROPHES = ("'", "’")

_SENTENCE_GAP = re.compile(r"[.!?]+\s+")


@dataclass(frozen=True)
class TokenStream:
    """Tokens of one text plus character-level case statistics.

    ``tokens`` keep their original case; ``offsets`` are (start, end)
    character positions into the raw text. ``lowercase``/``uppercase``
    count cased letters only, so unicameral scripts (e.g. CJK) add to
    ``alphabetic`` but to neither case bucket.
    """

    tokens: list[str]
    offsets: list[tuple[int, int]]
    lowercase: int
    uppercase: int
    alphabetic: int


@dataclass(frozen=True)
class SentenceSpans:
    """Half-open (start, end) token-index spans partitioning a TokenStream."""

    spans: list[tuple[int, int]]

    def lengths(self) -> list[int]:
        return [end - start for start, end in self.spans]


def _is_token_char(ch: str) -> bool:
    return ch.isalpha() or ch.isdigit()


def tokenize(text: str) -> TokenStream:
    """Split text into maximal runs of letters/digits.

    An apostrophe (straight or curly) joins a token only when flanked by
    letters on both sides, so "don't" is one token but "cats'" is not.
    """
    tokens: list[str] = []
    offsets: list[tuple[int, int]] = []
    n = len(text)
    i = 0
    while i < n:
        if _is_token_char(text[i]):
            start = i
            i += 1
            while i < n:
                ch = text[i]
                if _is_token_char(ch):
                    i += 1
                elif (
                    ch in APOSTROPHES
                    and text[i - 1].isalpha()
                    and i + 1 < n
                    and text[i + 1].isalpha()
                ):
                    i += 1
                else:
                    break
            tokens.append(text[start:i])
            offsets.append((start, i))
        else:
            i += 1

    lower = upper = alpha = 0
    for ch in text:
        if ch.isalpha():
            alpha += 1
            if ch.islower():
                lower += 1
            elif ch.isupper():
                upper += 1
    return TokenStream(tokens, offsets, lower, upper, alpha)


def split_sentences(text: str, stream: TokenStream) -> SentenceSpans:
    """Segment a tokenized text into sentences.

    A boundary falls after token i when the raw text between token i and
    token i+1 is exactly one or more of ``. ! ?`` followed by whitespace,
    and token i+1 starts with an uppercase letter. End of text always
    closes the last sentence; token streams without any terminator are a
    single sentence. The rule is applied literally, so abbreviations
    ("Mr.") split too.
    """
    count = len(stream.tokens)
    if count == 0:
        return SentenceSpans([])
    spans: list[tuple[int, int]] = []
    start = 0
    for i in range(count - 1):
        gap = text[stream.offsets[i][1] : stream.offsets[i + 1][0]]
        if _SENTENCE_GAP.fullmatch(gap) and stream.tokens[i + 1][0].isupper():
            spans.append((start, i + 1))
            start = i + 1
    spans.append((start, count))
    return SentenceSpans(spans)


def _load_wordlist(name: str) -> frozenset[str]:
    data = resources.files("styloboost.data").joinpath(name).read_text("utf-8")
    return frozenset(line for line in data.splitlines() if line)


def _wordlist_sha256(name: str) -> str:
    raw = resources.files("styloboost.data").joinpath(name).read_bytes()
    return hashlib.sha256(raw).hexdigest()


STOPWORDS = _load_wordlist("stopwords.txt")
VERBS = _load_wordlist("verbs.txt")

STOPWORD_LIST_SHA256 = _wordlist_sha256("stopwords.txt")
VERB_LIST_SHA256 = _wordlist_sha256("verbs.txt")


def is_stopword(token: str) -> bool:
    """Case-insensitive membership in the pinned stopword list."""
    return token.casefold() in STOPWORDS


def is_verb(token: str) -> bool:
    """Heuristic verb detection: pinned closed list, else -ing/-ed suffix.

    The suffix rule requires a remaining stem of at least 3 characters
    and skips stopwords (so "during" is not a verb but "walked" is).
    """
    low = token.casefold()
    if low in VERBS:
        return True
    if low in STOPWORDS:
        return False
    if low.endswith("ing") and len(low) >= 6:
        return True
    if low.endswith("ed") and len(low) >= 5:
        return True
    return False

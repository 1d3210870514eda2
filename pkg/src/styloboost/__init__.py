"""styloboost: stylometric features + gradient-boosted trees for AI-text
detection (human vs. AI) and model attribution (7-way).

The pipeline is corpus -> stylometry (11 features, optionally
concatenated with external dense embeddings) -> boosted-tree classifier
-> F1 evaluation. See the README for the CLI walkthrough and file
format documentation.
"""

from . import corpus, embedding_io, evaluation, features, gbdt, stylometry, synth, textproc

__version__ = "0.1.0"

__all__ = [
    "corpus",
    "embedding_io",
    "evaluation",
    "features",
    "gbdt",
    "stylometry",
    "synth",
    "textproc",
    "__version__",
]

"""Gradient-boosted decision-tree classifier with a compiled hot kernel.

Public surface: configuration/model types, train, the predict functions,
and JSON (de)serialization. The split-search inner loop runs on a Cython
kernel when built, with an arithmetic-identical numpy fallback.
"""

from .backends import compiled_available, resolve_backend, thread_count
from .model import (
    GbdtConfig,
    GbdtModel,
    ModelError,
    NumericError,
    StylometryHashMismatch,
    StylometrySignature,
    Tree,
    load_model,
    predict_class,
    predict_proba,
    save_model,
)
from .train import train

__all__ = [
    "GbdtConfig",
    "GbdtModel",
    "ModelError",
    "NumericError",
    "StylometryHashMismatch",
    "StylometrySignature",
    "Tree",
    "compiled_available",
    "load_model",
    "predict_class",
    "predict_proba",
    "resolve_backend",
    "save_model",
    "thread_count",
    "train",
]

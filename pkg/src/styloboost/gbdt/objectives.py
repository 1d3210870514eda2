"""Logistic and softmax objectives: probabilities, gradients, hessians, loss.

Gradients/hessians are the standard second-order boosting quantities:
logistic g = sigma(s) - y, h = sigma(s)(1 - sigma(s)); softmax
g_k = p_k - [y = k], h_k = p_k(1 - p_k).
"""

from __future__ import annotations

import numpy as np

_EPS = 1e-15


def sigmoid(x: np.ndarray) -> np.ndarray:
    # exp may overflow for very negative scores; 1/(1+inf) -> 0 is the right limit
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def softmax(scores: np.ndarray) -> np.ndarray:
    s = np.asarray(scores, dtype=np.float64)
    e = np.exp(s - s.max(axis=1, keepdims=True))
    return e / e.sum(axis=1, keepdims=True)


def logistic_grad_hess(scores: np.ndarray, y: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = sigmoid(scores)
    return p - y, p * (1.0 - p)


def softmax_grad_hess(scores: np.ndarray, y_onehot: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    p = softmax(scores)
    return p - y_onehot, p * (1.0 - p)


def binary_logloss(scores: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(sigmoid(scores), _EPS, 1.0 - _EPS)
    return float(-np.mean(y * np.log(p) + (1.0 - y) * np.log(1.0 - p)))


def multiclass_logloss(scores: np.ndarray, y: np.ndarray) -> float:
    p = np.clip(softmax(scores), _EPS, 1.0)
    return float(-np.mean(np.log(p[np.arange(len(y)), y])))

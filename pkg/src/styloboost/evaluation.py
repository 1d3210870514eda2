"""Confusion-matrix metrics: per-class and macro/micro/weighted F1.

Macro F1 is the headline metric reported by the CLI. The zero-division
convention is F1 = 0 (likewise precision/recall), so degenerate
predictors score comparably instead of producing NaNs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .corpus import LabelSchema


class EvalError(ValueError):
    """Raised for mismatched or out-of-range evaluation inputs."""


@dataclass(frozen=True)
class ClassMetrics:
    name: str
    precision: float
    recall: float
    f1: float
    support: int


@dataclass(frozen=True)
class EvalReport:
    classes: list[str]
    confusion: np.ndarray  # (K, K) int64, rows = gold, cols = predicted
    per_class: list[ClassMetrics]
    accuracy: float
    macro_f1: float
    micro_f1: float
    weighted_f1: float

    @property
    def support(self) -> list[int]:
        return [m.support for m in self.per_class]


def _safe_div(num: float, den: float) -> float:
    return num / den if den > 0 else 0.0


def evaluate(gold, pred, schema: LabelSchema) -> EvalReport:
    """Score predicted class indices against gold indices."""
    gold = np.asarray(gold, dtype=np.int64)
    pred = np.asarray(pred, dtype=np.int64)
    if gold.shape != pred.shape or gold.ndim != 1:
        raise EvalError(f"gold/pred length mismatch: {gold.shape} vs {pred.shape}")
    if gold.size == 0:
        raise EvalError("nothing to evaluate")
    k = len(schema.classes)
    for name, arr in (("gold", gold), ("pred", pred)):
        if arr.min() < 0 or arr.max() >= k:
            raise EvalError(f"{name} contains class index outside [0, {k})")

    confusion = np.zeros((k, k), dtype=np.int64)
    np.add.at(confusion, (gold, pred), 1)

    per_class = []
    for i, name in enumerate(schema.classes):
        tp = float(confusion[i, i])
        precision = _safe_div(tp, float(confusion[:, i].sum()))
        recall = _safe_div(tp, float(confusion[i, :].sum()))
        f1 = _safe_div(2.0 * precision * recall, precision + recall)
        per_class.append(
            ClassMetrics(name, precision, recall, f1, int(confusion[i, :].sum()))
        )

    n = int(confusion.sum())
    tp_total = float(np.trace(confusion))
    accuracy = tp_total / n
    macro_f1 = float(np.mean([m.f1 for m in per_class]))
    # single-label: global FP = global FN = n - TP, so micro P = R = F1 = accuracy
    micro_f1 = accuracy
    weighted_f1 = _safe_div(
        sum(m.f1 * m.support for m in per_class), float(sum(m.support for m in per_class))
    )
    return EvalReport(
        classes=list(schema.classes),
        confusion=confusion,
        per_class=per_class,
        accuracy=accuracy,
        macro_f1=macro_f1,
        micro_f1=micro_f1,
        weighted_f1=weighted_f1,
    )


def render_report(report: EvalReport, format: str = "json") -> str:
    """Render a report as canonical JSON (6-decimal metrics) or an aligned table."""
    if format == "json":
        payload = {
            "classes": report.classes,
            "confusion": report.confusion.tolist(),
            "per_class": [
                {
                    "class": m.name,
                    "precision": round(m.precision, 6),
                    "recall": round(m.recall, 6),
                    "f1": round(m.f1, 6),
                    "support": m.support,
                }
                for m in report.per_class
            ],
            "accuracy": round(report.accuracy, 6),
            "macro_f1": round(report.macro_f1, 6),
            "micro_f1": round(report.micro_f1, 6),
            "weighted_f1": round(report.weighted_f1, 6),
        }
        return json.dumps(payload, indent=2)
    if format == "text":
        width = max(len("class"), *(len(c) for c in report.classes), len("weighted avg"))
        lines = [
            f"{'class':<{width}}  {'precision':>9}  {'recall':>9}  {'f1':>9}  {'support':>7}"
        ]
        for m in report.per_class:
            lines.append(
                f"{m.name:<{width}}  {m.precision:>9.6f}  {m.recall:>9.6f}  "
                f"{m.f1:>9.6f}  {m.support:>7d}"
            )
        total = sum(m.support for m in report.per_class)
        lines.append("")
        lines.append(f"{'accuracy':<{width}}  {report.accuracy:>9.6f}")
        lines.append(f"{'macro f1':<{width}}  {report.macro_f1:>9.6f}")
        lines.append(f"{'micro f1':<{width}}  {report.micro_f1:>9.6f}")
        lines.append(f"{'weighted f1':<{width}}  {report.weighted_f1:>9.6f}")
        lines.append(f"{'documents':<{width}}  {total:>9d}")
        return "\n".join(lines)
    raise ValueError(f"unknown report format {format!r}")

"""Evaluation metrics: accuracy and macro-averaged precision/recall/F1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from ..sentiment import CANONICAL_ORDER, SentimentClass


class MetricsError(ValueError):
    pass


class LengthMismatchError(MetricsError):
    pass


@dataclass(frozen=True)
class EvalMetrics:
    accuracy: float
    macro_f1: float
    macro_precision: float
    macro_recall: float

    def __post_init__(self):
        for value in (self.accuracy, self.macro_f1, self.macro_precision, self.macro_recall):
            if not 0.0 <= value <= 1.0:
                raise MetricsError(f"metric value {value} outside [0, 1]")

    def to_dict(self) -> dict:
        return {
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "macro_precision": self.macro_precision,
            "macro_recall": self.macro_recall,
        }


def evaluate(preds: Sequence[SentimentClass], golds: Sequence[SentimentClass]) -> EvalMetrics:
    """Exact-match accuracy plus macro precision/recall/F1 over the five classes.

    Empty denominators (a class never predicted, or never present) contribute 0
    to the macro average.
    """
    if len(preds) != len(golds):
        raise LengthMismatchError(f"{len(preds)} predictions vs {len(golds)} golds")
    if not preds:
        raise MetricsError("nothing to evaluate")

    correct = sum(1 for p, g in zip(preds, golds) if p is g)
    precisions, recalls, f1s = [], [], []
    for cls in CANONICAL_ORDER:
        tp = sum(1 for p, g in zip(preds, golds) if p is cls and g is cls)
        pred_n = sum(1 for p in preds if p is cls)
        gold_n = sum(1 for g in golds if g is cls)
        precision = tp / pred_n if pred_n else 0.0
        recall = tp / gold_n if gold_n else 0.0
        f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
        precisions.append(precision)
        recalls.append(recall)
        f1s.append(f1)

    n_classes = len(CANONICAL_ORDER)
    return EvalMetrics(
        accuracy=correct / len(preds),
        macro_f1=sum(f1s) / n_classes,
        macro_precision=sum(precisions) / n_classes,
        macro_recall=sum(recalls) / n_classes,
    )

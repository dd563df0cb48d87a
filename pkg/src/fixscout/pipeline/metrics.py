"""Scalar metrics, precision-recall curves, and precision-first threshold selection.

Zero-division conventions differ by context, deliberately: on the PR curve a
threshold with no predicted positives scores precision 1 (standard curve
convention); the scalar `evaluate` reports precision 0 when positives exist
but none were predicted.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

RECALL_GRID = np.round(np.linspace(0.0, 1.0, 101), 2)


class MetricsError(ValueError):
    pass


@dataclass
class FoldResult:
    fold: int
    precision: float
    recall: float
    f1: float
    accuracy: float
    pr_points: list[tuple[float, float, float]] = field(default_factory=list)
    chosen_threshold: float = 0.5

    def as_dict(self) -> dict:
        return {
            "fold": self.fold,
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "accuracy": self.accuracy,
            "chosen_threshold": self.chosen_threshold,
        }


def evaluate(y_true, y_pred) -> tuple[float, float, float, float]:
    """(precision, recall, f1, accuracy) from confusion counts."""
    y_true = np.asarray(y_true, dtype=int)
    y_pred = np.asarray(y_pred, dtype=int)
    if len(y_true) != len(y_pred):
        raise MetricsError(f"{len(y_true)} labels vs {len(y_pred)} predictions")
    tp = int(np.sum((y_true == 1) & (y_pred == 1)))
    fp = int(np.sum((y_true == 0) & (y_pred == 1)))
    fn = int(np.sum((y_true == 1) & (y_pred == 0)))
    positives = tp + fn
    predicted = tp + fp
    if predicted > 0:
        precision = tp / predicted
    else:
        precision = 0.0 if positives > 0 else 1.0
    recall = tp / positives if positives > 0 else 1.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall > 0 else 0.0
    accuracy = float(np.mean(y_true == y_pred)) if len(y_true) else 0.0
    return precision, recall, f1, accuracy


def pr_curve(y_true, scores) -> list[tuple[float, float, float]]:
    """(threshold, precision, recall) at every distinct score, descending thresholds."""
    y_true = np.asarray(y_true, dtype=int)
    scores = np.asarray(scores, dtype=float)
    if len(set(np.unique(y_true).tolist())) < 2:
        raise MetricsError("precision-recall curve needs both classes present")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_y = y_true[order]
    tp_cum = np.cumsum(sorted_y)
    positives = int(y_true.sum())
    # last index of each distinct score block
    distinct = np.flatnonzero(np.append(sorted_scores[1:] != sorted_scores[:-1], True))
    points = []
    for i in distinct:
        threshold = float(sorted_scores[i])
        predicted = i + 1
        tp = int(tp_cum[i])
        points.append((threshold, tp / predicted, tp / positives))
    return points


def resample_precision(points, grid=RECALL_GRID) -> np.ndarray:
    """Max precision achievable at recall >= each grid value (interpolated PR curve)."""
    best = np.zeros(len(grid))
    recalls = np.array([p[2] for p in points])
    precisions = np.array([p[1] for p in points])
    for i, r in enumerate(grid):
        feasible = precisions[recalls >= r - 1e-12]
        best[i] = feasible.max() if len(feasible) else 0.0
    return best


def fold_average_pr(per_fold_points: list[list[tuple[float, float, float]]]):
    """Pointwise mean/std of per-fold interpolated curves on the fixed recall grid."""
    curves = np.vstack([resample_precision(p) for p in per_fold_points])
    return RECALL_GRID.copy(), curves.mean(axis=0), curves.std(axis=0)


def pick_threshold(points, min_recall: float) -> float:
    """Highest-precision threshold subject to recall >= min_recall.
    Ties prefer higher recall, then a lower threshold."""
    if not 0.0 <= min_recall <= 1.0:
        raise MetricsError(f"min_recall must be in [0, 1], got {min_recall}")
    feasible = [(p, r, t) for (t, p, r) in points if r >= min_recall - 1e-12]
    if not feasible:
        best = max((r for (_, _, r) in points), default=0.0)
        raise MetricsError(f"no threshold reaches recall {min_recall}; best achievable is {best:.4f}")
    precision, recall, threshold = max(feasible, key=lambda x: (x[0], x[1], -x[2]))
    return float(threshold)

"""Feature-selection steps: variance threshold (on a min-max scaled copy),
greedy Pearson correlation filter, and recursive feature elimination.

Every step fits on training rows only and returns a boolean column mask;
downstream consumers keep the unscaled values of the surviving columns.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from fixscout.learners import NO_IMPORTANCE_ALGORITHMS, ModelSpec, fit


class SelectionError(ValueError):
    pass


def prune_mask(X) -> np.ndarray:
    """Constant/duplicate column mask, same policy as embedding pruning but on a
    bare array; used by the leak-free per-fold pruning mode."""
    from fixscout.embedding import _round_sig

    X = np.asarray(X, dtype=float)
    mask = np.zeros(X.shape[1], dtype=bool)
    seen: set[bytes] = set()
    for j in range(X.shape[1]):
        col = _round_sig(X[:, j])
        if np.all(col == col[0]):
            continue
        key = col.tobytes()
        if key in seen:
            continue
        seen.add(key)
        mask[j] = True
    return mask


def variance_select(X, threshold: float) -> np.ndarray:
    """Keep columns whose variance on a min-max scaled copy reaches `threshold`."""
    X = np.asarray(X, dtype=float)
    mins = X.min(axis=0)
    spans = X.max(axis=0) - mins
    spans_safe = np.where(spans > 0, spans, 1.0)
    scaled = (X - mins) / spans_safe
    variances = scaled.var(axis=0)
    mask = variances >= threshold
    if not mask.any():
        raise SelectionError(f"variance threshold {threshold} removes every column")
    return mask


def correlation_filter(X, r_max: float) -> np.ndarray:
    """Greedy scan in column order; drop columns too correlated with an already-kept one."""
    X = np.asarray(X, dtype=float)
    n_cols = X.shape[1]
    mask = np.zeros(n_cols, dtype=bool)
    kept: list[int] = []
    stds = X.std(axis=0)
    centered = X - X.mean(axis=0)
    for j in range(n_cols):
        drop = False
        for k in kept:
            if stds[j] == 0 or stds[k] == 0:
                continue  # constant columns correlate with nothing
            r = (centered[:, j] @ centered[:, k]) / (len(X) * stds[j] * stds[k])
            if abs(r) > r_max:
                drop = True
                break
        if not drop:
            mask[j] = True
            kept.append(j)
    return mask


def rfe(spec: ModelSpec, X, y, n_keep: int, step: int = 1) -> np.ndarray:
    """Iteratively drop the `step` lowest-importance columns until `n_keep` remain."""
    if spec.algorithm in NO_IMPORTANCE_ALGORITHMS:
        raise SelectionError(f"{spec.algorithm} exposes no feature importances; RFE not applicable")
    if step < 1:
        raise SelectionError("step must be >= 1")
    X = np.asarray(X, dtype=float)
    n_cols = X.shape[1]
    mask = np.ones(n_cols, dtype=bool)
    if n_keep >= n_cols:
        return mask
    while mask.sum() > n_keep:
        columns = np.flatnonzero(mask)
        model = fit(spec, X[:, columns], y)
        ranking = np.argsort(model.feature_importances, kind="stable")
        n_drop = min(step, mask.sum() - n_keep)
        mask[columns[ranking[:n_drop]]] = False
    return mask


@dataclass(frozen=True)
class SelectionConfig:
    """Which selection steps run, and with what knobs. RFE is only sampled for
    algorithms that expose importances."""

    variance: bool = False
    variance_threshold: float = 0.01
    correlation: bool = False
    r_max: float = 0.95
    use_rfe: bool = False
    rfe_n_keep: int = 25
    rfe_step: int = 1
    prune: bool = False  # leak-free per-fold constant/duplicate pruning

    def fit_mask(self, spec: ModelSpec, X_train, y_train) -> np.ndarray:
        X_train = np.asarray(X_train, dtype=float)
        mask = np.ones(X_train.shape[1], dtype=bool)
        if self.prune:
            sub = prune_mask(X_train)
            if sub.any():
                mask = sub.copy()
        if self.variance:
            active = np.flatnonzero(mask)
            sub = variance_select(X_train[:, active], self.variance_threshold)
            mask[active[~sub]] = False
        if self.correlation and mask.sum() > 1:
            active = np.flatnonzero(mask)
            sub = correlation_filter(X_train[:, active], self.r_max)
            mask[active[~sub]] = False
        if self.use_rfe and mask.sum() > self.rfe_n_keep:
            active = np.flatnonzero(mask)
            sub = rfe(spec, X_train[:, active], y_train, self.rfe_n_keep, self.rfe_step)
            mask[active[~sub]] = False
        return mask

    def to_dict(self) -> dict:
        out = {"variance": self.variance, "correlation": self.correlation, "rfe": self.use_rfe}
        if self.variance:
            out["variance_threshold"] = self.variance_threshold
        if self.correlation:
            out["r_max"] = self.r_max
        if self.use_rfe:
            out["rfe_n_keep"] = self.rfe_n_keep
            out["rfe_step"] = self.rfe_step
        return out

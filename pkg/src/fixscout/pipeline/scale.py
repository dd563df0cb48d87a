"""Standardization fit on training folds only; test folds reuse the training statistics."""

from __future__ import annotations

import numpy as np


class StandardScaler:
    def __init__(self):
        self.mean_: np.ndarray | None = None
        self.scale_: np.ndarray | None = None

    def fit(self, X) -> "StandardScaler":
        X = np.asarray(X, dtype=float)
        if len(X) == 0:
            raise ValueError("cannot fit a scaler on an empty matrix")
        self.mean_ = X.mean(axis=0)
        std = X.std(axis=0)  # population std
        self.scale_ = np.where(std > 0, std, 1.0)  # constant columns map to 0
        return self

    def transform(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return (X - self.mean_) / self.scale_

    def fit_transform(self, X) -> np.ndarray:
        return self.fit(X).transform(X)


def standard_scale(X_train, X_test) -> tuple[np.ndarray, np.ndarray, StandardScaler]:
    scaler = StandardScaler().fit(X_train)
    return scaler.transform(X_train), scaler.transform(X_test), scaler

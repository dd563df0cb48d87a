"""Gaussian naive Bayes with variance smoothing."""

from __future__ import annotations

import numpy as np


class GaussianNBLearner:
    def __init__(self, var_smoothing: float = 1e-9):
        self.var_smoothing = float(var_smoothing)
        self.priors: np.ndarray | None = None
        self.means: np.ndarray | None = None
        self.variances: np.ndarray | None = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        epsilon = self.var_smoothing * max(float(X.var(axis=0).max()), 1e-300)
        self.priors = np.array([np.mean(y == c) for c in (0, 1)])
        self.means = np.vstack([X[y == c].mean(axis=0) for c in (0, 1)])
        self.variances = np.vstack([X[y == c].var(axis=0) for c in (0, 1)]) + epsilon
        return self

    def posteriors(self, X) -> np.ndarray:
        """(n, 2) posterior matrix, rows normalized to one."""
        X = np.asarray(X, dtype=float)
        log_joint = np.empty((len(X), 2))
        for c in (0, 1):
            var = self.variances[c]
            log_like = -0.5 * (np.log(2 * np.pi * var) + (X - self.means[c]) ** 2 / var).sum(axis=1)
            log_joint[:, c] = np.log(self.priors[c]) + log_like
        shifted = log_joint - log_joint.max(axis=1, keepdims=True)
        probs = np.exp(shifted)
        return probs / probs.sum(axis=1, keepdims=True)

    def predict_proba(self, X) -> np.ndarray:
        return self.posteriors(X)[:, 1]

    def get_params(self) -> dict:
        return {
            "var_smoothing": self.var_smoothing,
            "priors": self.priors.tolist(),
            "means": self.means.tolist(),
            "variances": self.variances.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "GaussianNBLearner":
        learner = cls(params["var_smoothing"])
        learner.priors = np.asarray(params["priors"], dtype=float)
        learner.means = np.asarray(params["means"], dtype=float)
        learner.variances = np.asarray(params["variances"], dtype=float)
        return learner

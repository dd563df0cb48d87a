"""Linear models: L2 logistic regression (Newton iterations) and a linear SVM
trained by deterministic full-batch sub-gradient descent with a held-in
logistic calibration over its training scores.

The loss/gradient pairs are exposed as module functions so tests can check the
analytic gradients against central finite differences.
"""

from __future__ import annotations

import numpy as np


def _sigmoid(z: np.ndarray) -> np.ndarray:
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


# --- logistic regression -----------------------------------------------------
# params layout: [w_0 .. w_{d-1}, bias]; the bias is not regularized.


def logistic_loss(params: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float) -> float:
    w, b = params[:-1], params[-1]
    z = X @ w + b
    # log(1 + exp(-t)) written stably for both signs of t
    t = np.where(y == 1, z, -z)
    nll = np.logaddexp(0.0, -t).mean()
    return float(nll + 0.5 * l2 * (w @ w))


def logistic_gradient(params: np.ndarray, X: np.ndarray, y: np.ndarray, l2: float) -> np.ndarray:
    w, b = params[:-1], params[-1]
    p = _sigmoid(X @ w + b)
    err = (p - y) / len(y)
    grad_w = X.T @ err + l2 * w
    grad_b = err.sum()
    return np.append(grad_w, grad_b)


class LogisticRegressionLearner:
    def __init__(self, l2: float = 1e-2, max_iter: int = 100, tol: float = 1e-10):
        self.l2 = float(l2)
        self.max_iter = int(max_iter)
        self.tol = float(tol)
        self.params: np.ndarray | None = None

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        n, d = X.shape
        params = np.zeros(d + 1)
        design = np.hstack([X, np.ones((n, 1))])
        reg = np.append(np.full(d, self.l2), 0.0)
        for _ in range(self.max_iter):
            grad = logistic_gradient(params, X, y, self.l2)
            if np.max(np.abs(grad)) < self.tol:
                break
            p = _sigmoid(design @ params)
            weights = np.maximum(p * (1.0 - p), 1e-12)
            hessian = (design.T * weights) @ design / n + np.diag(reg)
            hessian[np.diag_indices_from(hessian)] += 1e-12
            params = params - np.linalg.solve(hessian, grad)
        self.params = params
        return self

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return _sigmoid(X @ self.params[:-1] + self.params[-1])

    def importances(self) -> np.ndarray:
        w = np.abs(self.params[:-1])
        total = w.sum()
        if total <= 0:
            return np.full(len(w), 1.0 / len(w))
        return w / total

    def get_params(self) -> dict:
        return {"l2": self.l2, "max_iter": self.max_iter, "tol": self.tol, "params": self.params.tolist()}

    @classmethod
    def from_params(cls, params: dict) -> "LogisticRegressionLearner":
        learner = cls(params["l2"], params["max_iter"], params["tol"])
        learner.params = np.asarray(params["params"], dtype=float)
        return learner


# --- linear SVM ---------------------------------------------------------------


def hinge_loss(params: np.ndarray, X: np.ndarray, y_signed: np.ndarray, l2: float) -> float:
    w, b = params[:-1], params[-1]
    margins = 1.0 - y_signed * (X @ w + b)
    return float(np.maximum(margins, 0.0).mean() + 0.5 * l2 * (w @ w))


def hinge_gradient(params: np.ndarray, X: np.ndarray, y_signed: np.ndarray, l2: float) -> np.ndarray:
    """Sub-gradient; coincides with the gradient wherever no margin sits exactly at 1."""
    w, b = params[:-1], params[-1]
    margins = 1.0 - y_signed * (X @ w + b)
    active = margins > 0
    coeff = np.where(active, -y_signed, 0.0) / len(y_signed)
    grad_w = X.T @ coeff + l2 * w
    grad_b = coeff.sum()
    return np.append(grad_w, grad_b)


class LinearSVMLearner:
    def __init__(self, l2: float = 1e-2, epochs: int = 400, lr0: float = 0.5):
        self.l2 = float(l2)
        self.epochs = int(epochs)
        self.lr0 = float(lr0)
        self.params: np.ndarray | None = None
        self.calibration: tuple[float, float] | None = None  # (scale, offset)

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y_signed = np.where(np.asarray(y, dtype=int) == 1, 1.0, -1.0)
        params = np.zeros(X.shape[1] + 1)
        for t in range(self.epochs):
            step = self.lr0 / np.sqrt(t + 1.0)
            params = params - step * hinge_gradient(params, X, y_signed, self.l2)
        self.params = params
        self._fit_calibration(X, (y_signed + 1) / 2)
        return self

    def decision_scores(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        return X @ self.params[:-1] + self.params[-1]

    def _fit_calibration(self, X, y) -> None:
        """Platt-style logistic fit on the training scores (1-D Newton)."""
        scores = self.decision_scores(X)
        theta = np.zeros(2)  # [scale, offset]
        for _ in range(100):
            z = theta[0] * scores + theta[1]
            p = _sigmoid(z)
            err = (p - y) / len(y)
            grad = np.array([(err * scores).sum(), err.sum()])
            if np.max(np.abs(grad)) < 1e-12:
                break
            wgt = np.maximum(p * (1 - p), 1e-12) / len(y)
            h11 = (wgt * scores * scores).sum()
            h12 = (wgt * scores).sum()
            h22 = wgt.sum()
            hess = np.array([[h11, h12], [h12, h22]]) + 1e-9 * np.eye(2)
            theta = theta - np.linalg.solve(hess, grad)
        self.calibration = (float(theta[0]), float(theta[1]))

    def predict_proba(self, X) -> np.ndarray:
        scale, offset = self.calibration
        return _sigmoid(scale * self.decision_scores(X) + offset)

    def get_params(self) -> dict:
        return {
            "l2": self.l2,
            "epochs": self.epochs,
            "lr0": self.lr0,
            "params": self.params.tolist(),
            "calibration": list(self.calibration),
        }

    @classmethod
    def from_params(cls, params: dict) -> "LinearSVMLearner":
        learner = cls(params["l2"], params["epochs"], params["lr0"])
        learner.params = np.asarray(params["params"], dtype=float)
        learner.calibration = (params["calibration"][0], params["calibration"][1])
        return learner

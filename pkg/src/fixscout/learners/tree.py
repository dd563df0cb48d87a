"""CART-style trees: a gini classification tree (sample-weight aware, optional
per-split feature subsampling) and a squared-error regression tree used by the
boosting learners.

Determinism: candidate features are scanned in ascending index order and split
positions in ascending threshold order, with strict improvement required to
replace the incumbent, so ties resolve to the lowest feature index, then the
lowest threshold.  Splitting continues while a node is impure and a valid
split exists, even at zero gain (that is what lets depth-2 trees fit XOR).

The split search is vectorized over all candidate features at once: one
argsort and one cumulative sum per node, then an argmin over the flattened
(feature-major) cost matrix whose first-occurrence semantics implement the
tie-break for free.
"""

from __future__ import annotations

import numpy as np


def _best_split_vectorized(Xs: np.ndarray, grad: np.ndarray, curv: np.ndarray, min_leaf: int, mode: str):
    """Shared split scan. For classification, grad = w*y and curv = w (gini cost);
    for regression, grad = residuals and curv = residuals**2 (SSE cost).

    Returns (cost, local_feature_index, threshold) or None."""
    n, k = Xs.shape
    if n < 2 * min_leaf:
        return None
    order = np.argsort(Xs, axis=0, kind="stable")
    xs = np.take_along_axis(Xs, order, axis=0)
    g = np.take_along_axis(np.broadcast_to(grad[:, None], (n, k)), order, axis=0)
    c = np.take_along_axis(np.broadcast_to(curv[:, None], (n, k)), order, axis=0)
    cg = np.cumsum(g, axis=0)
    cc = np.cumsum(c, axis=0)
    counts = np.arange(1, n, dtype=float)
    row_ok = (counts >= min_leaf) & (n - counts >= min_leaf)
    valid = (xs[:-1] < xs[1:]) & row_ok[:, None]
    if not valid.any():
        return None
    gl, gr = cg[:-1], cg[-1] - cg[:-1]
    cl, cr = cc[:-1], cc[-1] - cc[:-1]
    if mode == "gini":
        cost = _gini_cost(cl, gl) + _gini_cost(cr, gr)
    else:
        nl = counts[:, None]
        nr = n - nl
        cost = (cl - gl**2 / nl) + (cr - gr**2 / nr)
    cost = np.where(valid, cost, np.inf)
    flat = int(np.argmin(cost.T.ravel()))  # feature-major: ties -> lowest feature, lowest threshold
    feature_local, position = divmod(flat, n - 1)
    threshold = 0.5 * (xs[position, feature_local] + xs[position + 1, feature_local])
    return float(cost[position, feature_local]), int(feature_local), float(threshold)


def _gini_cost(w_total: np.ndarray, w_one: np.ndarray) -> np.ndarray:
    with np.errstate(divide="ignore", invalid="ignore"):
        safe = np.where(w_total > 0, w_total, 1.0)
        p1 = np.where(w_total > 0, w_one / safe, 0.0)
    return w_total * (1.0 - p1**2 - (1.0 - p1) ** 2)


class DecisionTreeLearner:
    """Binary gini tree with probability leaves (class frequencies)."""

    def __init__(self, max_depth: int | None = None, min_samples_leaf: int = 1, max_features: int | None = None):
        self.max_depth = max_depth
        self.min_samples_leaf = int(min_samples_leaf)
        self.max_features = max_features
        self.root: dict | None = None
        self.n_features = 0
        self.importances_raw: np.ndarray | None = None

    def fit(self, X, y, sample_weight=None, rng: np.random.Generator | None = None):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        w = np.ones(len(y)) if sample_weight is None else np.asarray(sample_weight, dtype=float)
        self.n_features = X.shape[1]
        self.importances_raw = np.zeros(self.n_features)
        self.root = self._build(X, y.astype(float), w, np.arange(len(y)), 0, rng)
        return self

    def _candidate_features(self, rng):
        if self.max_features is None or self.max_features >= self.n_features:
            return np.arange(self.n_features)
        if rng is None:
            return np.arange(self.max_features)
        chosen = rng.choice(self.n_features, size=self.max_features, replace=False)
        return np.sort(chosen)  # ascending order keeps the tie-break deterministic

    def _build(self, X, y, w, idx, depth, rng) -> dict:
        w_node = w[idx]
        w_total = float(w_node.sum())
        w_one = float((w_node * y[idx]).sum())
        prob = w_one / w_total if w_total > 0 else 0.5
        impurity = 1.0 - prob * prob - (1.0 - prob) ** 2 if w_total > 0 else 0.0
        node = {"prob": float(prob), "n": int(len(idx))}
        if (
            impurity <= 0.0
            or (self.max_depth is not None and depth >= self.max_depth)
            or len(idx) < 2 * self.min_samples_leaf
        ):
            return node
        features = self._candidate_features(rng)
        found = _best_split_vectorized(
            X[np.ix_(idx, features)], w_node * y[idx], w_node, self.min_samples_leaf, "gini"
        )
        if found is None:
            return node
        cost, local_feature, threshold = found
        feature = int(features[local_feature])
        self.importances_raw[feature] += w_total * impurity - cost
        mask = X[idx, feature] <= threshold
        node["feature"] = feature
        node["threshold"] = threshold
        node["left"] = self._build(X, y, w, idx[mask], depth + 1, rng)
        node["right"] = self._build(X, y, w, idx[~mask], depth + 1, rng)
        return node

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(len(X))
        for i, row in enumerate(X):
            node = self.root
            while "feature" in node:
                node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
            out[i] = node["prob"]
        return out

    def importances(self) -> np.ndarray:
        total = self.importances_raw.sum()
        if total <= 0:
            return np.full(self.n_features, 1.0 / self.n_features)
        return self.importances_raw / total

    def get_params(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "max_features": self.max_features,
            "root": self.root,
            "n_features": self.n_features,
            "importances_raw": self.importances_raw.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "DecisionTreeLearner":
        tree = cls(params["max_depth"], params["min_samples_leaf"], params["max_features"])
        tree.root = params["root"]
        tree.n_features = params["n_features"]
        tree.importances_raw = np.asarray(params["importances_raw"], dtype=float)
        return tree


class RegressionTree:
    """Squared-error tree over gradient targets; leaves hold the Newton step
    sum(gradient) / sum(hessian) so the boosting learner can consume it directly."""

    def __init__(self, max_depth: int = 3, min_samples_leaf: int = 1):
        self.max_depth = max_depth
        self.min_samples_leaf = int(min_samples_leaf)
        self.root: dict | None = None
        self.n_features = 0
        self.importances_raw: np.ndarray | None = None

    def fit(self, X, gradient, hessian):
        X = np.asarray(X, dtype=float)
        g = np.asarray(gradient, dtype=float)
        h = np.asarray(hessian, dtype=float)
        self.n_features = X.shape[1]
        self.importances_raw = np.zeros(self.n_features)
        self.root = self._build(X, g, h, np.arange(len(g)), 0)
        return self

    def _build(self, X, g, h, idx, depth) -> dict:
        g_node = g[idx]
        value = g_node.sum() / max(h[idx].sum(), 1e-12)
        node = {"value": float(value), "n": int(len(idx))}
        sse_node = float((g_node**2).sum() - g_node.sum() ** 2 / max(len(idx), 1))
        if depth >= self.max_depth or len(idx) < 2 * self.min_samples_leaf or sse_node <= 1e-12:
            return node
        found = _best_split_vectorized(X[idx], g_node, g_node**2, self.min_samples_leaf, "sse")
        if found is None:
            return node
        cost, feature, threshold = found
        self.importances_raw[feature] += max(sse_node - cost, 0.0)
        mask = X[idx, feature] <= threshold
        node["feature"] = feature
        node["threshold"] = threshold
        node["left"] = self._build(X, g, h, idx[mask], depth + 1)
        node["right"] = self._build(X, g, h, idx[~mask], depth + 1)
        return node

    def predict(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        out = np.empty(len(X))
        for i, row in enumerate(X):
            node = self.root
            while "feature" in node:
                node = node["left"] if row[node["feature"]] <= node["threshold"] else node["right"]
            out[i] = node["value"]
        return out

    def get_params(self) -> dict:
        return {
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "root": self.root,
            "n_features": self.n_features,
            "importances_raw": self.importances_raw.tolist(),
        }

    @classmethod
    def from_params(cls, params: dict) -> "RegressionTree":
        tree = cls(params["max_depth"], params["min_samples_leaf"])
        tree.root = params["root"]
        tree.n_features = params["n_features"]
        tree.importances_raw = np.asarray(params["importances_raw"], dtype=float)
        return tree

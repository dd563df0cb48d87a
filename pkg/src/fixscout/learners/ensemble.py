"""Tree ensembles: bagged forests, SAMME boosting, and logistic-loss gradient
boosting.  All randomness flows from one seed through spawned child
generators, so fits are bit-reproducible."""

from __future__ import annotations

import math

import numpy as np

from fixscout.learners.tree import DecisionTreeLearner, RegressionTree


class RandomForestLearner:
    """Bootstrap aggregation of gini trees with per-split feature subsampling.

    The forest probability is exactly the arithmetic mean of its trees'
    leaf probabilities (exposed via tree_probabilities for verification)."""

    def __init__(
        self,
        n_estimators: int = 100,
        max_depth: int | None = None,
        min_samples_leaf: int = 1,
        max_features: str | int = "sqrt",
        seed: int = 0,
    ):
        self.n_estimators = int(n_estimators)
        self.max_depth = max_depth
        self.min_samples_leaf = int(min_samples_leaf)
        self.max_features = max_features
        self.seed = int(seed)
        self.trees: list[DecisionTreeLearner] = []

    def _resolved_max_features(self, d: int) -> int:
        if self.max_features == "sqrt":
            return max(1, int(math.sqrt(d)))
        if self.max_features is None:
            return d
        return min(int(self.max_features), d)

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        n, d = X.shape
        k = self._resolved_max_features(d)
        self.trees = []
        for seq in np.random.SeedSequence(self.seed).spawn(self.n_estimators):
            rng = np.random.default_rng(seq)
            sample = rng.integers(0, n, size=n)
            # deduplicate the bootstrap into weights: same estimator, smaller node scans
            rows, counts = np.unique(sample, return_counts=True)
            tree = DecisionTreeLearner(self.max_depth, self.min_samples_leaf, max_features=k)
            tree.fit(X[rows], y[rows], sample_weight=counts.astype(float), rng=rng)
            self.trees.append(tree)
        return self

    def tree_probabilities(self, X) -> np.ndarray:
        return np.vstack([t.predict_proba(X) for t in self.trees])

    def predict_proba(self, X) -> np.ndarray:
        return self.tree_probabilities(X).mean(axis=0)

    def importances(self) -> np.ndarray:
        stack = np.vstack([t.importances() for t in self.trees]).mean(axis=0)
        total = stack.sum()
        return stack / total if total > 0 else np.full(len(stack), 1.0 / len(stack))

    def get_params(self) -> dict:
        return {
            "n_estimators": self.n_estimators,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "max_features": self.max_features,
            "seed": self.seed,
            "trees": [t.get_params() for t in self.trees],
        }

    @classmethod
    def from_params(cls, params: dict) -> "RandomForestLearner":
        forest = cls(
            params["n_estimators"],
            params["max_depth"],
            params["min_samples_leaf"],
            params["max_features"],
            params["seed"],
        )
        forest.trees = [DecisionTreeLearner.from_params(p) for p in params["trees"]]
        return forest


class AdaBoostLearner:
    """SAMME over depth-limited gini trees; probability is the alpha-weighted
    vote fraction for class 1."""

    def __init__(self, n_estimators: int = 50, learning_rate: float = 1.0, max_depth: int = 1):
        self.n_estimators = int(n_estimators)
        self.learning_rate = float(learning_rate)
        self.max_depth = int(max_depth)
        self.stages: list[tuple[float, DecisionTreeLearner]] = []
        self.base_rate = 0.5

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        n = len(y)
        w = np.full(n, 1.0 / n)
        self.base_rate = float(y.mean())
        self.stages = []
        for _ in range(self.n_estimators):
            tree = DecisionTreeLearner(self.max_depth, min_samples_leaf=1)
            tree.fit(X, y, sample_weight=w)
            pred = (tree.predict_proba(X) >= 0.5).astype(int)
            wrong = pred != y
            err = float(w[wrong].sum() / w.sum())
            if err <= 0.0:
                self.stages.append((1.0, tree))
                break
            if err >= 0.5:  # weak learner no better than chance; stop
                if not self.stages:
                    self.stages.append((1e-10, tree))
                break
            alpha = self.learning_rate * math.log((1.0 - err) / err)
            self.stages.append((alpha, tree))
            w = w * np.exp(alpha * wrong)
            w = w / w.sum()
        return self

    def staged_training_error(self, X, y) -> list[float]:
        """Error of the partial ensemble after each boosting round."""
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=int)
        votes = np.zeros(len(y))
        total_alpha = 0.0
        errors = []
        for alpha, tree in self.stages:
            votes = votes + alpha * (tree.predict_proba(X) >= 0.5)
            total_alpha += alpha
            pred = (votes / total_alpha >= 0.5).astype(int)
            errors.append(float(np.mean(pred != y)))
        return errors

    def predict_proba(self, X) -> np.ndarray:
        if not self.stages:
            return np.full(len(np.asarray(X)), self.base_rate)
        votes = np.zeros(len(np.asarray(X)))
        total_alpha = 0.0
        for alpha, tree in self.stages:
            votes += alpha * (tree.predict_proba(X) >= 0.5)
            total_alpha += alpha
        return votes / total_alpha

    def importances(self) -> np.ndarray:
        total_alpha = sum(alpha for alpha, _ in self.stages)
        if total_alpha <= 0:
            d = self.stages[0][1].n_features
            return np.full(d, 1.0 / d)
        stack = sum(alpha * tree.importances() for alpha, tree in self.stages) / total_alpha
        s = stack.sum()
        return stack / s if s > 0 else np.full(len(stack), 1.0 / len(stack))

    def get_params(self) -> dict:
        return {
            "n_estimators": self.n_estimators,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "base_rate": self.base_rate,
            "stages": [[alpha, tree.get_params()] for alpha, tree in self.stages],
        }

    @classmethod
    def from_params(cls, params: dict) -> "AdaBoostLearner":
        model = cls(params["n_estimators"], params["learning_rate"], params["max_depth"])
        model.base_rate = params["base_rate"]
        model.stages = [(alpha, DecisionTreeLearner.from_params(p)) for alpha, p in params["stages"]]
        return model


class GradientBoostingLearner:
    """Binary classification by gradient boosting with logistic loss and
    Newton-step regression-tree leaves."""

    def __init__(
        self,
        n_estimators: int = 100,
        learning_rate: float = 0.1,
        max_depth: int = 3,
        min_samples_leaf: int = 1,
    ):
        self.n_estimators = int(n_estimators)
        self.learning_rate = float(learning_rate)
        self.max_depth = int(max_depth)
        self.min_samples_leaf = int(min_samples_leaf)
        self.f0 = 0.0
        self.trees: list[RegressionTree] = []

    def fit(self, X, y):
        X = np.asarray(X, dtype=float)
        y = np.asarray(y, dtype=float)
        rate = min(max(float(y.mean()), 1e-9), 1 - 1e-9)
        self.f0 = math.log(rate / (1.0 - rate))
        raw = np.full(len(y), self.f0)
        self.trees = []
        for _ in range(self.n_estimators):
            p = 1.0 / (1.0 + np.exp(-raw))
            gradient = y - p
            hessian = p * (1.0 - p)
            tree = RegressionTree(self.max_depth, self.min_samples_leaf)
            tree.fit(X, gradient, hessian)
            raw = raw + self.learning_rate * tree.predict(X)
            self.trees.append(tree)
        return self

    def decision_scores(self, X) -> np.ndarray:
        raw = np.full(len(np.asarray(X)), self.f0)
        for tree in self.trees:
            raw = raw + self.learning_rate * tree.predict(X)
        return raw

    def predict_proba(self, X) -> np.ndarray:
        return 1.0 / (1.0 + np.exp(-self.decision_scores(X)))

    def importances(self) -> np.ndarray:
        stack = np.sum([t.importances_raw for t in self.trees], axis=0)
        total = stack.sum()
        return stack / total if total > 0 else np.full(len(stack), 1.0 / len(stack))

    def get_params(self) -> dict:
        return {
            "n_estimators": self.n_estimators,
            "learning_rate": self.learning_rate,
            "max_depth": self.max_depth,
            "min_samples_leaf": self.min_samples_leaf,
            "f0": self.f0,
            "trees": [t.get_params() for t in self.trees],
        }

    @classmethod
    def from_params(cls, params: dict) -> "GradientBoostingLearner":
        model = cls(
            params["n_estimators"], params["learning_rate"], params["max_depth"], params["min_samples_leaf"]
        )
        model.f0 = params["f0"]
        model.trees = [RegressionTree.from_params(p) for p in params["trees"]]
        return model

"""Seven base classifiers behind one probability interface.

``fit(spec, X, y)`` dispatches on ``spec.algorithm`` and returns a
TrainedModel whose ``predict_proba`` yields class-1 probabilities.  Feature
importances exist for every algorithm except gaussian_nb and linear_svm.
Given a fixed seed, training is fully deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fixscout.learners.ensemble import AdaBoostLearner, GradientBoostingLearner, RandomForestLearner
from fixscout.learners.linear import LinearSVMLearner, LogisticRegressionLearner
from fixscout.learners.naive_bayes import GaussianNBLearner
from fixscout.learners.tree import DecisionTreeLearner

ALGORITHMS = (
    "gaussian_nb",
    "logistic_regression",
    "decision_tree",
    "random_forest",
    "adaboost",
    "gradient_boosting",
    "linear_svm",
)

NO_IMPORTANCE_ALGORITHMS = frozenset({"gaussian_nb", "linear_svm"})

_ALLOWED_HYPERPARAMETERS = {
    "gaussian_nb": {"var_smoothing"},
    "logistic_regression": {"l2", "max_iter"},
    "decision_tree": {"max_depth", "min_samples_leaf"},
    "random_forest": {"n_estimators", "max_depth", "min_samples_leaf", "max_features"},
    "adaboost": {"n_estimators", "learning_rate", "max_depth"},
    "gradient_boosting": {"n_estimators", "learning_rate", "max_depth", "min_samples_leaf"},
    "linear_svm": {"l2", "epochs"},
}


class LearnerError(ValueError):
    pass


@dataclass(frozen=True)
class ModelSpec:
    algorithm: str
    hyperparameters: dict = field(default_factory=dict)
    seed: int = 0

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise LearnerError(f"unknown algorithm {self.algorithm!r}")
        unknown = set(self.hyperparameters) - _ALLOWED_HYPERPARAMETERS[self.algorithm]
        if unknown:
            raise LearnerError(f"{self.algorithm} does not take hyperparameters {sorted(unknown)}")

    def key(self) -> str:
        hp = json.dumps(self.hyperparameters, sort_keys=True)
        return f"{self.algorithm}|{hp}|seed={self.seed}"


@dataclass
class TrainedModel:
    spec: ModelSpec
    impl: object
    n_features: int
    feature_importances: np.ndarray | None

    def predict_proba(self, X) -> np.ndarray:
        X = np.asarray(X, dtype=float)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise LearnerError(f"expected {self.n_features} features, got {X.shape}")
        return np.clip(self.impl.predict_proba(X), 0.0, 1.0)

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        return (self.predict_proba(X) >= threshold).astype(int)


def _validate_training_data(X, y):
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    if X.ndim != 2:
        raise LearnerError(f"X must be 2-D, got shape {X.shape}")
    if len(y) != len(X):
        raise LearnerError(f"{len(X)} rows vs {len(y)} labels")
    if not np.all(np.isfinite(X)):
        raise LearnerError("X contains NaN or infinite values")
    classes = set(np.unique(y).tolist())
    if not classes <= {0, 1}:
        raise LearnerError(f"labels must be 0/1, got {sorted(classes)}")
    if len(classes) < 2:
        raise LearnerError("training data contains a single class")
    return X, y


def _construct(spec: ModelSpec):
    hp = spec.hyperparameters
    if spec.algorithm == "gaussian_nb":
        return GaussianNBLearner(hp.get("var_smoothing", 1e-9))
    if spec.algorithm == "logistic_regression":
        return LogisticRegressionLearner(hp.get("l2", 1e-2), hp.get("max_iter", 100))
    if spec.algorithm == "decision_tree":
        return DecisionTreeLearner(hp.get("max_depth"), hp.get("min_samples_leaf", 1))
    if spec.algorithm == "random_forest":
        return RandomForestLearner(
            hp.get("n_estimators", 100),
            hp.get("max_depth"),
            hp.get("min_samples_leaf", 1),
            hp.get("max_features", "sqrt"),
            seed=spec.seed,
        )
    if spec.algorithm == "adaboost":
        return AdaBoostLearner(hp.get("n_estimators", 50), hp.get("learning_rate", 1.0), hp.get("max_depth", 1))
    if spec.algorithm == "gradient_boosting":
        return GradientBoostingLearner(
            hp.get("n_estimators", 100),
            hp.get("learning_rate", 0.1),
            hp.get("max_depth", 3),
            hp.get("min_samples_leaf", 1),
        )
    if spec.algorithm == "linear_svm":
        return LinearSVMLearner(hp.get("l2", 1e-2), hp.get("epochs", 400))
    raise LearnerError(f"unknown algorithm {spec.algorithm!r}")


def fit(spec: ModelSpec, X, y) -> TrainedModel:
    X, y = _validate_training_data(X, y)
    impl = _construct(spec)
    impl.fit(X, y)
    importances = None
    if spec.algorithm not in NO_IMPORTANCE_ALGORITHMS:
        importances = np.asarray(impl.importances(), dtype=float)
    return TrainedModel(spec, impl, X.shape[1], importances)


def predict_proba(model: TrainedModel, X) -> np.ndarray:
    return model.predict_proba(X)


_IMPL_CLASSES = {
    "gaussian_nb": GaussianNBLearner,
    "logistic_regression": LogisticRegressionLearner,
    "decision_tree": DecisionTreeLearner,
    "random_forest": RandomForestLearner,
    "adaboost": AdaBoostLearner,
    "gradient_boosting": GradientBoostingLearner,
    "linear_svm": LinearSVMLearner,
}

_FORMAT = "fixscout-model"
_FORMAT_VERSION = 1


def save_model(model: TrainedModel, path: str | Path) -> None:
    """Versioned JSON container; floats survive exactly (shortest-repr round trip)."""
    payload = {
        "format": _FORMAT,
        "version": _FORMAT_VERSION,
        "spec": {
            "algorithm": model.spec.algorithm,
            "hyperparameters": model.spec.hyperparameters,
            "seed": model.spec.seed,
        },
        "n_features": model.n_features,
        "importances": None if model.feature_importances is None else model.feature_importances.tolist(),
        "params": model.impl.get_params(),
    }
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(payload), encoding="utf-8")


def load_model(path: str | Path) -> TrainedModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != _FORMAT or payload.get("version") != _FORMAT_VERSION:
        raise LearnerError(f"not a fixscout model file: {path}")
    spec = ModelSpec(
        payload["spec"]["algorithm"],
        payload["spec"]["hyperparameters"],
        payload["spec"]["seed"],
    )
    impl = _IMPL_CLASSES[spec.algorithm].from_params(payload["params"])
    importances = payload["importances"]
    return TrainedModel(
        spec,
        impl,
        payload["n_features"],
        None if importances is None else np.asarray(importances, dtype=float),
    )

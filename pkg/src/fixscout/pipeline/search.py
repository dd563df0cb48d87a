"""Randomized configuration search over preprocessing toggles and model
hyperparameters, evaluated by stratified cross-validation.

The operating point is precision-first: a single threshold is chosen on the
pooled out-of-fold scores subject to a recall floor, then per-fold metrics are
computed at that threshold.  Selection and scaling are fit inside each
training fold only, so test folds never leak into them.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from fixscout.learners import NO_IMPORTANCE_ALGORITHMS, ModelSpec, fit
from fixscout.pipeline.metrics import (
    FoldResult,
    MetricsError,
    evaluate,
    fold_average_pr,
    pick_threshold,
    pr_curve,
)
from fixscout.pipeline.scale import StandardScaler
from fixscout.pipeline.select import SelectionConfig, SelectionError

DEFAULT_MIN_RECALL = 0.3

MAX_DEPTH_CHOICES = (2, 3, 4, 6, 8, 12, 16, None)
MIN_LEAF_CHOICES = (1, 2, 5, 10)
N_ESTIMATORS_CHOICES = (50, 100, 200, 400)
LEARNING_RATE_CHOICES = (0.01, 0.05, 0.1, 0.3)
VARIANCE_THRESHOLD_CHOICES = (0.005, 0.01, 0.02, 0.05)
R_MAX_CHOICES = (0.8, 0.9, 0.95, 0.99)
RFE_KEEP_CHOICES = (10, 25, 50, 100)
RFE_STEP_CHOICES = (10, 20)  # elimination refits the model every round; large steps keep search affordable
RFE_PROBABILITY = 0.35


@dataclass(frozen=True)
class PipelineConfig:
    spec: ModelSpec
    selection: SelectionConfig = field(default_factory=SelectionConfig)

    def to_dict(self) -> dict:
        return {
            "algorithm": self.spec.algorithm,
            "hyperparameters": dict(self.spec.hyperparameters),
            "seed": self.spec.seed,
            "selection": self.selection.to_dict(),
        }


@dataclass
class CvOutcome:
    oof_probs: np.ndarray
    threshold: float
    fold_results: list[FoldResult]
    mean: dict[str, float]
    std: dict[str, float]

    @property
    def selection_key(self) -> tuple[float, float]:
        return (self.mean["precision"], self.mean["recall"])

    def pr_summary(self):
        per_fold = [fr.pr_points for fr in self.fold_results if fr.pr_points]
        return fold_average_pr(per_fold)


def fold_partitions(fold_ids: np.ndarray) -> list[tuple[np.ndarray, np.ndarray]]:
    parts = []
    for f in sorted(np.unique(fold_ids).tolist()):
        test = np.flatnonzero(fold_ids == f)
        train = np.flatnonzero(fold_ids != f)
        parts.append((train, test))
    return parts


def summarize_oof(oof_probs: np.ndarray, y: np.ndarray, fold_ids: np.ndarray, min_recall: float) -> CvOutcome:
    """Per-fold metrics at precision-first thresholds.

    Each fold is scored at a threshold picked on the *other* folds'
    out-of-fold scores, so a fold never influences its own operating point;
    the pooled-curve threshold is kept as the deployable scalar."""
    points = pr_curve(y, oof_probs)
    threshold = pick_threshold(points, min_recall)
    fold_results = []
    for f in sorted(np.unique(fold_ids).tolist()):
        test = fold_ids == f
        rest = ~test
        fold_threshold = pick_threshold(pr_curve(y[rest], oof_probs[rest]), min_recall)
        pred = (oof_probs[test] >= fold_threshold).astype(int)
        precision, recall, f1, accuracy = evaluate(y[test], pred)
        try:
            fold_points = pr_curve(y[test], oof_probs[test])
        except MetricsError:
            fold_points = []
        fold_results.append(FoldResult(int(f), precision, recall, f1, accuracy, fold_points, fold_threshold))
    keys = ("precision", "recall", "f1", "accuracy")
    stacked = {k: np.array([getattr(fr, k) for fr in fold_results]) for k in keys}
    mean = {k: float(v.mean()) for k, v in stacked.items()}
    std = {k: float(v.std()) for k, v in stacked.items()}
    return CvOutcome(oof_probs, threshold, fold_results, mean, std)


def nested_grid_outcome(
    candidates: list[tuple[object, np.ndarray]],
    y: np.ndarray,
    fold_ids: np.ndarray,
    min_recall: float,
) -> tuple[CvOutcome, list]:
    """Out-of-selection CV estimate of a finite grid's selection procedure.

    For every fold, both the winning candidate and its threshold are chosen on
    the remaining folds' out-of-fold scores; the held-out fold only gets
    evaluated.  Candidate order breaks exact ties (first wins).  Returns the
    outcome plus the per-fold chosen candidate keys."""
    y = np.asarray(y, dtype=int)
    fold_results = []
    choices = []
    pooled = np.zeros(len(y))
    for f in sorted(np.unique(fold_ids).tolist()):
        test = fold_ids == f
        rest = ~test
        best = None
        for key, oof in candidates:
            try:
                t = pick_threshold(pr_curve(y[rest], oof[rest]), min_recall)
            except MetricsError:
                continue
            precision, recall, _, _ = evaluate(y[rest], (oof[rest] >= t).astype(int))
            if best is None or (precision, recall) > best[0]:
                best = ((precision, recall), key, t, oof)
        if best is None:
            raise MetricsError(f"no candidate reaches recall {min_recall} outside fold {f}")
        _, key, threshold, oof = best
        choices.append(key)
        pooled[test] = oof[test]
        pred = (oof[test] >= threshold).astype(int)
        precision, recall, f1, accuracy = evaluate(y[test], pred)
        try:
            fold_points = pr_curve(y[test], oof[test])
        except MetricsError:
            fold_points = []
        fold_results.append(FoldResult(int(f), precision, recall, f1, accuracy, fold_points, threshold))
    keys = ("precision", "recall", "f1", "accuracy")
    stacked = {k: np.array([getattr(fr, k) for fr in fold_results]) for k in keys}
    mean = {k: float(v.mean()) for k, v in stacked.items()}
    std = {k: float(v.std()) for k, v in stacked.items()}
    outcome = CvOutcome(pooled, float(np.mean([fr.chosen_threshold for fr in fold_results])), fold_results, mean, std)
    return outcome, choices


def cross_validate_config(
    config: PipelineConfig,
    X: np.ndarray,
    y: np.ndarray,
    fold_ids: np.ndarray,
    min_recall: float = DEFAULT_MIN_RECALL,
) -> CvOutcome:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=int)
    oof = np.zeros(len(y))
    for train, test in fold_partitions(fold_ids):
        mask = config.selection.fit_mask(config.spec, X[train], y[train])
        scaler = StandardScaler().fit(X[train][:, mask])
        model = fit(config.spec, scaler.transform(X[train][:, mask]), y[train])
        oof[test] = model.predict_proba(scaler.transform(X[test][:, mask]))
    return summarize_oof(oof, y, fold_ids, min_recall)


def sample_hyperparameters(rng: np.random.Generator, algorithm: str) -> dict:
    if algorithm == "gaussian_nb":
        return {"var_smoothing": float(10 ** rng.uniform(-12, -6))}
    if algorithm == "logistic_regression":
        return {"l2": float(10 ** rng.uniform(-4, 2))}
    if algorithm == "linear_svm":
        return {"l2": float(10 ** rng.uniform(-4, 2))}
    if algorithm == "decision_tree":
        return {
            "max_depth": _choice(rng, MAX_DEPTH_CHOICES),
            "min_samples_leaf": _choice(rng, MIN_LEAF_CHOICES),
        }
    if algorithm == "random_forest":
        return {
            "n_estimators": _choice(rng, N_ESTIMATORS_CHOICES),
            "max_depth": _choice(rng, MAX_DEPTH_CHOICES),
            "min_samples_leaf": _choice(rng, MIN_LEAF_CHOICES),
        }
    if algorithm == "adaboost":
        return {
            "n_estimators": _choice(rng, N_ESTIMATORS_CHOICES),
            "learning_rate": _choice(rng, LEARNING_RATE_CHOICES),
            "max_depth": _choice(rng, (1, 2, 3)),
        }
    if algorithm == "gradient_boosting":
        return {
            "n_estimators": _choice(rng, N_ESTIMATORS_CHOICES),
            "learning_rate": _choice(rng, LEARNING_RATE_CHOICES),
            "max_depth": _choice(rng, (2, 3, 4)),
            "min_samples_leaf": _choice(rng, MIN_LEAF_CHOICES),
        }
    raise ValueError(f"unknown algorithm {algorithm!r}")


def _choice(rng: np.random.Generator, options):
    return options[int(rng.integers(len(options)))]


def sample_selection(rng: np.random.Generator, algorithm: str, n_features: int) -> SelectionConfig:
    supports_rfe = algorithm not in NO_IMPORTANCE_ALGORITHMS
    return SelectionConfig(
        variance=bool(rng.random() < 0.5),
        variance_threshold=_choice(rng, VARIANCE_THRESHOLD_CHOICES),
        correlation=bool(rng.random() < 0.5),
        r_max=_choice(rng, R_MAX_CHOICES),
        use_rfe=bool(supports_rfe and n_features > min(RFE_KEEP_CHOICES) and rng.random() < RFE_PROBABILITY),
        rfe_n_keep=_choice(rng, RFE_KEEP_CHOICES),
        rfe_step=_choice(rng, RFE_STEP_CHOICES),
    )


@dataclass
class SearchResult:
    config: PipelineConfig
    outcome: CvOutcome
    draw_index: int
    n_evaluated: int
    n_failed: int


def random_search(
    algorithm: str,
    X: np.ndarray,
    y: np.ndarray,
    fold_ids: np.ndarray,
    n_iter: int = 200,
    seed: int = 0,
    min_recall: float = DEFAULT_MIN_RECALL,
) -> SearchResult:
    """Best of n_iter sampled configurations by mean CV precision, ties broken
    by mean recall and then by the earlier draw."""
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    rng = np.random.default_rng(seed)
    best: SearchResult | None = None
    failed = 0
    for i in range(n_iter):
        model_seed = int(rng.integers(2**31 - 1))
        hp = sample_hyperparameters(rng, algorithm)
        selection = sample_selection(rng, algorithm, X.shape[1])
        config = PipelineConfig(ModelSpec(algorithm, hp, model_seed), selection)
        try:
            outcome = cross_validate_config(config, X, y, fold_ids, min_recall)
        except (SelectionError, MetricsError):
            failed += 1
            continue
        if best is None or outcome.selection_key > best.outcome.selection_key:
            best = SearchResult(config, outcome, i, n_iter, failed)
    if best is None:
        raise SelectionError(f"all {n_iter} sampled configurations failed for {algorithm}")
    best.n_failed = failed
    return best

"""Model fusion: soft voting over base probabilities and stacked generalization
with a cross-validated final estimator.

Voting weights are binary (a base is fully in or out), so the voting grid over
four bases holds exactly 15 member subsets.  Stacking feeds the final
estimator a matrix of out-of-fold base probabilities covering every training
row exactly once.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from fixscout.learners import ALGORITHMS, ModelSpec, TrainedModel, fit
from fixscout.pipeline.folds import stratified_kfold
from fixscout.pipeline.metrics import FoldResult, MetricsError, evaluate, pick_threshold, pr_curve
from fixscout.pipeline.scale import StandardScaler
from fixscout.pipeline.select import SelectionError
from fixscout.pipeline.search import (
    DEFAULT_MIN_RECALL,
    CvOutcome,
    PipelineConfig,
    fold_partitions,
    nested_grid_outcome,
    summarize_oof,
)


class EnsembleError(ValueError):
    pass


def soft_vote(probs: np.ndarray, weights) -> np.ndarray:
    """Arithmetic mean of the included models' class-1 probabilities.

    `probs` has one row per model; `weights` are binary include/exclude flags."""
    probs = np.atleast_2d(np.asarray(probs, dtype=float))
    weights = np.asarray(weights, dtype=int)
    if len(weights) != len(probs):
        raise EnsembleError(f"{len(probs)} probability rows vs {len(weights)} weights")
    if set(weights.tolist()) - {0, 1}:
        raise EnsembleError("voting weights must be binary")
    included = np.flatnonzero(weights)
    if len(included) == 0:
        raise EnsembleError("at least one model must be included in the vote")
    return probs[included].mean(axis=0)


def voting_grid(n_bases: int) -> list[tuple[int, ...]]:
    """All non-empty include/exclude assignments (2^n - 1 combinations)."""
    grid = []
    for size in range(1, n_bases + 1):
        for chosen in combinations(range(n_bases), size):
            weights = tuple(1 if i in chosen else 0 for i in range(n_bases))
            grid.append(weights)
    return grid


@dataclass
class VotingSearch:
    weights: tuple[int, ...]
    outcome: CvOutcome  # out-of-selection estimate (nested subset + threshold choice)
    grid: list[dict] = field(default_factory=list)
    per_fold_choice: list[tuple[int, ...]] = field(default_factory=list)


def grid_search_voting(
    base_oof: np.ndarray,
    y: np.ndarray,
    fold_ids: np.ndarray,
    min_recall: float = DEFAULT_MIN_RECALL,
) -> VotingSearch:
    """Exhaustive search over base-model subsets using precomputed OOF probabilities.

    The returned weights are the all-folds winner (the deployable choice); the
    returned outcome is the nested estimate, where each fold's subset and
    threshold come from the other folds only."""
    if base_oof.ndim != 2:
        raise EnsembleError("base_oof must be (n_models, n_rows)")
    best: tuple | None = None
    grid_report = []
    candidates = []
    for weights in voting_grid(len(base_oof)):
        combined = soft_vote(base_oof, weights)
        candidates.append((weights, combined))
        outcome = summarize_oof(combined, y, fold_ids, min_recall)
        grid_report.append(
            {
                "weights": list(weights),
                "precision_mean": outcome.mean["precision"],
                "recall_mean": outcome.mean["recall"],
            }
        )
        if best is None or outcome.selection_key > best[1].selection_key:
            best = (weights, outcome)
    nested, choices = nested_grid_outcome(candidates, y, fold_ids, min_recall)
    return VotingSearch(best[0], nested, grid_report, choices)


def nested_voting_outcome(
    algo_oofs: list[dict[str, np.ndarray]],
    y: np.ndarray,
    fold_ids: np.ndarray,
    min_recall: float = DEFAULT_MIN_RECALL,
) -> CvOutcome:
    """Fully nested voting estimate: per held-out fold, the per-embedding base
    algorithm, the subset, and the threshold are all chosen on the other folds.

    `algo_oofs` holds one {algorithm: oof_probs} map per embedding."""
    y = np.asarray(y, dtype=int)
    fold_results = []
    pooled = np.zeros(len(y))
    for f in sorted(np.unique(fold_ids).tolist()):
        test = fold_ids == f
        rest = ~test
        bases = []
        for per_algo in algo_oofs:
            chosen = _best_on_rest(list(per_algo.items()), y, rest, min_recall)
            bases.append(per_algo[chosen] if chosen is not None else next(iter(per_algo.values())))
        base_matrix = np.vstack(bases)
        candidates = [(w, soft_vote(base_matrix, w)) for w in voting_grid(len(bases))]
        subset = _best_on_rest(candidates, y, rest, min_recall)
        combined = dict(candidates)[subset]
        threshold = pick_threshold(pr_curve(y[rest], combined[rest]), min_recall)
        pooled[test] = combined[test]
        precision, recall, f1, accuracy = evaluate(y[test], (combined[test] >= threshold).astype(int))
        try:
            fold_points = pr_curve(y[test], combined[test])
        except MetricsError:
            fold_points = []
        fold_results.append(FoldResult(int(f), precision, recall, f1, accuracy, fold_points, threshold))
    keys = ("precision", "recall", "f1", "accuracy")
    stacked = {k: np.array([getattr(fr, k) for fr in fold_results]) for k in keys}
    mean = {k: float(v.mean()) for k, v in stacked.items()}
    std = {k: float(v.std()) for k, v in stacked.items()}
    threshold = float(np.mean([fr.chosen_threshold for fr in fold_results]))
    return CvOutcome(pooled, threshold, fold_results, mean, std)


def _best_on_rest(candidates, y, rest, min_recall):
    """Key of the candidate scoring best (precision, recall) on the rest rows."""
    best = None
    for key, oof in candidates:
        try:
            t = pick_threshold(pr_curve(y[rest], oof[rest]), min_recall)
        except MetricsError:
            continue
        precision, recall, _, _ = evaluate(y[rest], (oof[rest] >= t).astype(int))
        if best is None or (precision, recall) > best[0]:
            best = ((precision, recall), key)
    return best[1] if best is not None else None


# --- stacking -------------------------------------------------------------------

# deliberately small per-estimator grids; the point is that all seven families run
STACKING_GRIDS: dict[str, list[dict]] = {
    "gaussian_nb": [{}],
    "logistic_regression": [{"l2": 0.01}, {"l2": 1.0}],
    "decision_tree": [{"max_depth": 2}, {"max_depth": 4}],
    "random_forest": [{"n_estimators": 50, "max_depth": 3}],
    "adaboost": [{"n_estimators": 50}],
    "gradient_boosting": [{"n_estimators": 50, "max_depth": 2}],
    "linear_svm": [{"l2": 0.01}],
}


def _fit_base_fold(config: PipelineConfig, X_train, y_train, X_eval):
    try:
        mask = config.selection.fit_mask(config.spec, X_train, y_train)
    except SelectionError:
        # a threshold tuned on the outer training set can wipe every column on a
        # smaller inner fold; fall back to the unselected columns there
        mask = np.ones(X_train.shape[1], dtype=bool)
    scaler = StandardScaler().fit(X_train[:, mask])
    model = fit(config.spec, scaler.transform(X_train[:, mask]), y_train)
    return model.predict_proba(scaler.transform(X_eval[:, mask]))


def stacking_feature_folds(
    base_configs: list[PipelineConfig],
    base_matrices: list[np.ndarray],
    y: np.ndarray,
    fold_ids: np.ndarray,
    seed: int = 0,
    inner_k: int = 5,
):
    """Per outer fold: the inner-OOF base-probability matrix for the training
    rows and the full-train base probabilities for the test rows.

    Every training row appears in the inner-OOF matrix exactly once, matching
    how the final estimator is trained."""
    if len(base_configs) != len(base_matrices):
        raise EnsembleError("one matrix per base model required")
    heights = {len(m) for m in base_matrices}
    if len(heights) != 1:
        raise EnsembleError("base matrices disagree on row count (fold mismatch)")
    folds = []
    for outer_index, (train, test) in enumerate(fold_partitions(fold_ids)):
        y_train = y[train]
        inner_ids = stratified_kfold(y_train, k=inner_k, seed=seed * 1000 + outer_index)
        z_train = np.zeros((len(train), len(base_configs)))
        z_test = np.zeros((len(test), len(base_configs)))
        for b, (config, X) in enumerate(zip(base_configs, base_matrices)):
            X_train = X[train]
            for inner_train, inner_test in fold_partitions(inner_ids):
                z_train[inner_test, b] = _fit_base_fold(
                    config, X_train[inner_train], y_train[inner_train], X_train[inner_test]
                )
            z_test[:, b] = _fit_base_fold(config, X_train, y_train, X[test])
        folds.append({"train": train, "test": test, "z_train": z_train, "z_test": z_test})
    return folds


def evaluate_stacking(
    final_spec: ModelSpec,
    feature_folds,
    y: np.ndarray,
    fold_ids: np.ndarray,
    min_recall: float = DEFAULT_MIN_RECALL,
) -> CvOutcome:
    oof = np.zeros(len(y))
    for fold in feature_folds:
        model = fit(final_spec, fold["z_train"], y[fold["train"]])
        oof[fold["test"]] = model.predict_proba(fold["z_test"])
    return summarize_oof(oof, y, fold_ids, min_recall)


@dataclass
class StackingSearch:
    final_spec: ModelSpec
    outcome: CvOutcome  # out-of-selection estimate (nested estimator + threshold choice)
    grid: list[dict] = field(default_factory=list)
    per_fold_choice: list = field(default_factory=list)


def grid_search_stacking(
    base_configs: list[PipelineConfig],
    base_matrices: list[np.ndarray],
    y: np.ndarray,
    fold_ids: np.ndarray,
    min_recall: float = DEFAULT_MIN_RECALL,
    seed: int = 0,
) -> StackingSearch:
    """All seven final-estimator families over their small grids.

    As with voting, the winner comes from the full grid while the reported
    outcome nests the estimator/threshold choice away from the scored fold."""
    feature_folds = stacking_feature_folds(base_configs, base_matrices, y, fold_ids, seed=seed)
    best: tuple | None = None
    grid_report = []
    candidates = []
    for algorithm in ALGORITHMS:
        for hp in STACKING_GRIDS[algorithm]:
            final_spec = ModelSpec(algorithm, hp, seed=seed)
            try:
                outcome = evaluate_stacking(final_spec, feature_folds, y, fold_ids, min_recall)
            except MetricsError:
                continue
            candidates.append(((algorithm, tuple(sorted(hp.items()))), outcome.oof_probs))
            grid_report.append(
                {
                    "final_estimator": algorithm,
                    "hyperparameters": hp,
                    "precision_mean": outcome.mean["precision"],
                    "recall_mean": outcome.mean["recall"],
                }
            )
            if best is None or outcome.selection_key > best[1].selection_key:
                best = (final_spec, outcome)
    if best is None:
        raise EnsembleError("every stacking configuration failed")
    nested, choices = nested_grid_outcome(candidates, y, fold_ids, min_recall)
    return StackingSearch(best[0], nested, grid_report, choices)


@dataclass
class StackedModel:
    """Full-data stacked ensemble: per-base masks/scalers/models plus the final estimator."""

    base_artifacts: list[dict]
    final_model: TrainedModel

    def base_probabilities(self, base_matrices: list[np.ndarray]) -> np.ndarray:
        cols = []
        for artifact, X in zip(self.base_artifacts, base_matrices):
            mask = artifact["mask"]
            cols.append(artifact["model"].predict_proba(artifact["scaler"].transform(X[:, mask])))
        return np.column_stack(cols)

    def predict_proba(self, base_matrices: list[np.ndarray]) -> np.ndarray:
        return self.final_model.predict_proba(self.base_probabilities(base_matrices))


def stack(
    base_configs: list[PipelineConfig],
    base_matrices: list[np.ndarray],
    y: np.ndarray,
    fold_ids: np.ndarray,
    final_spec: ModelSpec,
    seed: int = 0,
) -> StackedModel:
    """Train the deliverable stacked model: the final estimator learns from the
    cross-validated OOF probability matrix, bases are refit on all rows."""
    folds = stacking_feature_folds(base_configs, base_matrices, y, fold_ids, seed=seed)
    n = len(y)
    z = np.zeros((n, len(base_configs)))
    for fold in folds:
        # the inner-OOF rows of each outer-train partition would overlap across
        # outer folds; instead assemble the canonical OOF matrix from the
        # outer-test predictions, which tile the dataset exactly once
        z[fold["test"], :] = fold["z_test"]
    final_model = fit(final_spec, z, y)
    artifacts = []
    for config, X in zip(base_configs, base_matrices):
        mask = config.selection.fit_mask(config.spec, X, y)
        scaler = StandardScaler().fit(X[:, mask])
        model = fit(config.spec, scaler.transform(X[:, mask]), y)
        artifacts.append({"mask": mask, "scaler": scaler, "model": model, "config": config})
    return StackedModel(artifacts, final_model)

"""Training orchestration: per-embedding randomized search over the seven
algorithms, then voting and stacking grids over the four per-embedding
winners, producing the run report and full-data model artifacts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from fixscout.embedding import EmbeddingMatrix
from fixscout.learners import ALGORITHMS, TrainedModel, fit, load_model, save_model
from fixscout.pipeline.ensemble import (
    StackedModel,
    StackingSearch,
    VotingSearch,
    grid_search_stacking,
    grid_search_voting,
    nested_voting_outcome,
    stack,
)
from fixscout.pipeline.folds import stratified_kfold
from fixscout.pipeline.metrics import RECALL_GRID
from fixscout.pipeline.scale import StandardScaler
from fixscout.pipeline.search import (
    CvOutcome,
    PipelineConfig,
    SearchResult,
    random_search,
)

EMBEDDING_ORDER = ("lint", "lint_style", "metrics", "graph")


class TrainError(ValueError):
    pass


@dataclass
class TrainOptions:
    seed: int = 0
    n_iter: int = 200
    min_recall: float = 0.3
    use_manifest_folds: bool = True
    k: int = 5
    algorithms: tuple[str, ...] = ALGORITHMS
    prune_per_fold: bool = False


@dataclass
class EmbeddingResult:
    analyzer_id: str
    search: SearchResult
    per_algorithm: list[dict]
    algorithm_results: dict[str, SearchResult]

    @property
    def outcome(self) -> CvOutcome:
        return self.search.outcome

    @property
    def config(self) -> PipelineConfig:
        return self.search.config


@dataclass
class TrainArtifacts:
    fold_ids: np.ndarray
    commit_ids: list[str]
    embedding_results: dict[str, EmbeddingResult]
    voting: VotingSearch
    stacking: StackingSearch
    full_models: dict[str, dict] = field(default_factory=dict)
    stacked_model: StackedModel | None = None


def _aligned_labels_and_folds(matrices: dict[str, EmbeddingMatrix], options: TrainOptions):
    first = next(iter(matrices.values()))
    commit_ids = first.commit_ids
    for m in matrices.values():
        if m.commit_ids != commit_ids:
            raise TrainError(f"embedding {m.analyzer_id} disagrees on commit ids/order")
        if m.provenance != first.provenance:
            raise TrainError(f"embedding {m.analyzer_id} disagrees on labels/folds")
    y = first.labels()
    if options.use_manifest_folds:
        fold_ids = first.folds()
        if np.any(fold_ids < 0) or np.any(fold_ids >= options.k):
            raise TrainError("manifest fold assignments out of range")
    else:
        fold_ids = stratified_kfold(y, k=options.k, seed=options.seed)
    return commit_ids, y, fold_ids


def train_run(matrices: dict[str, EmbeddingMatrix], options: TrainOptions) -> tuple[dict, TrainArtifacts]:
    """The full training/evaluation pass over the four embeddings."""
    order = [a for a in EMBEDDING_ORDER if a in matrices] + [
        a for a in matrices if a not in EMBEDDING_ORDER
    ]
    commit_ids, y, fold_ids = _aligned_labels_and_folds(matrices, options)

    embedding_results: dict[str, EmbeddingResult] = {}
    for a_index, analyzer_id in enumerate(order):
        X = matrices[analyzer_id].matrix()
        best: SearchResult | None = None
        per_algorithm = []
        algorithm_results: dict[str, SearchResult] = {}
        for g_index, algorithm in enumerate(options.algorithms):
            seed = options.seed * 10000 + a_index * 100 + g_index
            result = random_search(
                algorithm, X, y, fold_ids,
                n_iter=options.n_iter, seed=seed, min_recall=options.min_recall,
            )
            if options.prune_per_fold:
                result = _with_prune(result, X, y, fold_ids, options)
            algorithm_results[algorithm] = result
            per_algorithm.append(
                {
                    "algorithm": algorithm,
                    "precision_mean": result.outcome.mean["precision"],
                    "recall_mean": result.outcome.mean["recall"],
                }
            )
            if best is None or result.outcome.selection_key > best.outcome.selection_key:
                best = result
        embedding_results[analyzer_id] = EmbeddingResult(analyzer_id, best, per_algorithm, algorithm_results)

    base_oof = np.vstack([embedding_results[a].outcome.oof_probs for a in order])
    voting = grid_search_voting(base_oof, y, fold_ids, options.min_recall)
    # deepest honest estimate: base algorithm, subset and threshold all chosen
    # away from the scored fold (the winner/grid above stay selection-side)
    algo_oofs = [
        {algo: res.outcome.oof_probs for algo, res in embedding_results[a].algorithm_results.items()}
        for a in order
    ]
    voting.outcome = nested_voting_outcome(algo_oofs, y, fold_ids, options.min_recall)

    base_configs = [embedding_results[a].config for a in order]
    base_matrices = [matrices[a].matrix() for a in order]
    stacking = grid_search_stacking(
        base_configs, base_matrices, y, fold_ids, options.min_recall, seed=options.seed
    )

    artifacts = TrainArtifacts(fold_ids, commit_ids, embedding_results, voting, stacking)
    _fit_full_models(artifacts, matrices, order, y, options)
    report = _build_report(order, embedding_results, voting, stacking, fold_ids, y, options)
    return report, artifacts


def _with_prune(result: SearchResult, X, y, fold_ids, options: TrainOptions) -> SearchResult:
    """Re-evaluate the winning config with leak-free per-fold pruning enabled."""
    from dataclasses import replace

    from fixscout.pipeline.search import cross_validate_config

    config = PipelineConfig(result.config.spec, replace(result.config.selection, prune=True))
    outcome = cross_validate_config(config, X, y, fold_ids, options.min_recall)
    return SearchResult(config, outcome, result.draw_index, result.n_evaluated, result.n_failed)


def _fit_full_models(artifacts, matrices, order, y, options) -> None:
    for analyzer_id in order:
        config = artifacts.embedding_results[analyzer_id].config
        X = matrices[analyzer_id].matrix()
        mask = config.selection.fit_mask(config.spec, X, y)
        scaler = StandardScaler().fit(X[:, mask])
        model = fit(config.spec, scaler.transform(X[:, mask]), y)
        artifacts.full_models[analyzer_id] = {
            "config": config,
            "mask": mask,
            "scaler": scaler,
            "model": model,
        }
    base_configs = [artifacts.embedding_results[a].config for a in order]
    base_matrices = [matrices[a].matrix() for a in order]
    artifacts.stacked_model = stack(
        base_configs, base_matrices, y, artifacts.fold_ids, artifacts.stacking.final_spec, seed=options.seed
    )


def _curve_dict(outcome: CvOutcome) -> dict:
    grid, mean, std = outcome.pr_summary()
    return {
        "recall_grid": grid.tolist(),
        "precision_mean": mean.tolist(),
        "precision_std": std.tolist(),
    }


def _outcome_dict(outcome: CvOutcome) -> dict:
    return {
        "per_fold": [fr.as_dict() for fr in outcome.fold_results],
        "mean": outcome.mean,
        "std": outcome.std,
        "chosen_threshold": outcome.threshold,
    }


def _build_report(order, embedding_results, voting, stacking, fold_ids, y, options) -> dict:
    fold_sizes = {int(f): int(np.sum(fold_ids == f)) for f in np.unique(fold_ids)}
    report = {
        "options": {
            "seed": options.seed,
            "n_iter": options.n_iter,
            "min_recall": options.min_recall,
            "use_manifest_folds": options.use_manifest_folds,
            "algorithms": list(options.algorithms),
            "prune_per_fold": options.prune_per_fold,
        },
        "data": {
            "rows": int(len(fold_ids)),
            "positives": int(y.sum()),
            "fold_sizes": fold_sizes,
        },
        "embeddings": {},
        "ensembles": {},
    }
    for analyzer_id in order:
        result = embedding_results[analyzer_id]
        report["embeddings"][analyzer_id] = {
            "best": result.config.to_dict(),
            "algorithms_searched": result.per_algorithm,
            "cv": _outcome_dict(result.outcome),
            "pr_curve": _curve_dict(result.outcome),
        }
    report["ensembles"]["voting"] = {
        "grid_size": len(voting.grid),
        "grid": voting.grid,
        "best": {
            "weights": list(voting.weights),
            "included": [order[i] for i, w in enumerate(voting.weights) if w],
        },
        "cv": _outcome_dict(voting.outcome),
        "pr_curve": _curve_dict(voting.outcome),
    }
    report["ensembles"]["stacking"] = {
        "final_estimators": len({g["final_estimator"] for g in stacking.grid}),
        "grid": stacking.grid,
        "best": {
            "final_estimator": stacking.final_spec.algorithm,
            "hyperparameters": dict(stacking.final_spec.hyperparameters),
        },
        "cv": _outcome_dict(stacking.outcome),
        "pr_curve": _curve_dict(stacking.outcome),
    }
    report["ensembles"]["winner"] = (
        "voting" if voting.outcome.selection_key >= stacking.outcome.selection_key else "stacking"
    )
    return report


# --- artifact files ------------------------------------------------------------


def save_pipeline_artifact(entry: dict, analyzer_id: str, path: Path) -> None:
    payload = {
        "format": "fixscout-pipeline",
        "version": 1,
        "analyzer_id": analyzer_id,
        "config": entry["config"].to_dict(),
        "mask": np.asarray(entry["mask"], dtype=bool).tolist(),
        "scaler": {"mean": entry["scaler"].mean_.tolist(), "scale": entry["scaler"].scale_.tolist()},
    }
    path.parent.mkdir(parents=True, exist_ok=True)
    model_path = path.with_suffix(".model.json")
    save_model(entry["model"], model_path)
    payload["model_file"] = model_path.name
    path.write_text(json.dumps(payload), encoding="utf-8")


def load_pipeline_artifact(path: Path) -> dict:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if payload.get("format") != "fixscout-pipeline":
        raise TrainError(f"not a pipeline artifact: {path}")
    scaler = StandardScaler()
    scaler.mean_ = np.asarray(payload["scaler"]["mean"], dtype=float)
    scaler.scale_ = np.asarray(payload["scaler"]["scale"], dtype=float)
    model = load_model(Path(path).parent / payload["model_file"])
    return {
        "analyzer_id": payload["analyzer_id"],
        "config": payload["config"],
        "mask": np.asarray(payload["mask"], dtype=bool),
        "scaler": scaler,
        "model": model,
    }


def write_pr_curve_csv(curve: dict, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["recall_grid,precision_mean,precision_std"]
    for r, m, s in zip(curve["recall_grid"], curve["precision_mean"], curve["precision_std"]):
        lines.append(f"{r!r},{m!r},{s!r}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")

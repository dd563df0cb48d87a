"""Feature selection, scaling, cross-validation, search, ensembling, evaluation."""

from fixscout.pipeline.folds import FoldError, stratified_kfold
from fixscout.pipeline.metrics import (
    FoldResult,
    MetricsError,
    evaluate,
    fold_average_pr,
    pick_threshold,
    pr_curve,
    resample_precision,
)
from fixscout.pipeline.scale import StandardScaler, standard_scale
from fixscout.pipeline.select import SelectionConfig, SelectionError, correlation_filter, rfe, variance_select
from fixscout.pipeline.search import PipelineConfig, cross_validate_config, random_search
from fixscout.pipeline.ensemble import soft_vote, stack, voting_grid
from fixscout.pipeline.train import TrainOptions, train_run

__all__ = [
    "FoldError",
    "stratified_kfold",
    "FoldResult",
    "MetricsError",
    "evaluate",
    "fold_average_pr",
    "pick_threshold",
    "pr_curve",
    "resample_precision",
    "StandardScaler",
    "standard_scale",
    "SelectionConfig",
    "SelectionError",
    "correlation_filter",
    "rfe",
    "variance_select",
    "PipelineConfig",
    "cross_validate_config",
    "random_search",
    "soft_vote",
    "stack",
    "voting_grid",
    "TrainOptions",
    "train_run",
]

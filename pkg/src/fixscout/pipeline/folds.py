"""Stratified k-fold assignment.

Fold sizes differ by at most one and per-fold class counts stay within one of
the proportional share.  Externally supplied assignments (the manifest's
test_fold column) are used verbatim elsewhere; this generator only covers the
case where none exist.
"""

from __future__ import annotations

import numpy as np


class FoldError(ValueError):
    pass


def stratified_kfold(labels, k: int = 5, seed: int = 0) -> np.ndarray:
    y = np.asarray(labels, dtype=int)
    rng = np.random.default_rng(seed)
    folds = np.full(len(y), -1, dtype=int)
    totals = np.zeros(k, dtype=int)
    for cls in sorted(np.unique(y).tolist()):
        idx = np.flatnonzero(y == cls)
        if len(idx) < k:
            raise FoldError(f"class {cls} has {len(idx)} members, fewer than k={k}")
        rng.shuffle(idx)
        base, extra = divmod(len(idx), k)
        counts = np.full(k, base, dtype=int)
        # hand the remainder to the currently smallest folds (ties: lowest index)
        order = np.lexsort((np.arange(k), totals))
        counts[order[:extra]] += 1
        start = 0
        for fold_id in range(k):
            folds[idx[start : start + counts[fold_id]]] = fold_id
            start += counts[fold_id]
        totals += counts
    return folds

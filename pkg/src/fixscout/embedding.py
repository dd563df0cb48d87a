"""Commit embeddings: per-file analyzer vectors diffed across versions and
aggregated per commit into signed-change magnitude features.

Every input feature f becomes two output features: `f_pos` sums the positive
per-file changes of f over the commit and `f_neg` sums the magnitudes of the
negative ones, so all embedding values stay non-negative and the net change
is recoverable as f_pos - f_neg.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np


class FeatureMismatch(ValueError):
    pass


@dataclass
class FeatureVector:
    names: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self) -> None:
        self.values = np.asarray(self.values, dtype=float)
        if len(self.names) != len(self.values):
            raise FeatureMismatch(f"{len(self.names)} names vs {len(self.values)} values")
        if len(set(self.names)) != len(self.names):
            raise FeatureMismatch("duplicate feature names")
        if not np.all(np.isfinite(self.values)):
            raise FeatureMismatch("non-finite feature value")

    @classmethod
    def zero(cls, names: Iterable[str]) -> "FeatureVector":
        names = tuple(names)
        return cls(names, np.zeros(len(names)))

    @classmethod
    def from_dict(cls, names: Iterable[str], mapping: Mapping[str, float]) -> "FeatureVector":
        names = tuple(names)
        return cls(names, np.array([float(mapping.get(n, 0.0)) for n in names]))

    def as_dict(self) -> dict[str, float]:
        return dict(zip(self.names, self.values.tolist()))

    def __getitem__(self, name: str) -> float:
        return float(self.values[self.names.index(name)])


def version_vectors(pair, analyzer) -> tuple[FeatureVector, FeatureVector]:
    """Analyze both sides of a FilePair; absent sides embed to zero vectors."""
    zero = FeatureVector.zero(analyzer.feature_names)
    pre = analyzer.analyze(pair.pre_text) if pair.pre_text is not None else zero
    post = analyzer.analyze(pair.post_text) if pair.post_text is not None else zero
    return pre, post


def file_diff(pre: FeatureVector, post: FeatureVector) -> FeatureVector:
    if pre.names != post.names:
        raise FeatureMismatch("pre/post feature names differ")
    return FeatureVector(pre.names, post.values - pre.values)


def doubled_names(names: Iterable[str]) -> tuple[str, ...]:
    out: list[str] = []
    for n in names:
        out.append(f"{n}_pos")
        out.append(f"{n}_neg")
    return tuple(out)


def aggregate_commit(diffs: list[FeatureVector], feature_names: Iterable[str] | None = None) -> FeatureVector:
    """Fold per-file diffs into one commit vector of split positive/negative sums."""
    if diffs:
        names = diffs[0].names
        for d in diffs[1:]:
            if d.names != names:
                raise FeatureMismatch("diffs do not share one feature universe")
    elif feature_names is not None:
        names = tuple(feature_names)
    else:
        raise FeatureMismatch("empty diff list needs explicit feature_names")
    out = np.zeros(2 * len(names))
    for d in diffs:
        out[0::2] += np.maximum(d.values, 0.0)
        out[1::2] += np.maximum(-d.values, 0.0)
    return FeatureVector(doubled_names(names), out)


@dataclass
class EmbeddingMatrix:
    """Rectangular commit-by-feature matrix with label/fold provenance.

    Columns are kept in sorted name order; row order follows insertion
    (i.e. manifest order).
    """

    analyzer_id: str
    feature_names: list[str]
    rows: dict[str, np.ndarray] = field(default_factory=dict)
    provenance: dict[str, tuple[int, int]] = field(default_factory=dict)

    def __post_init__(self) -> None:
        order = np.argsort(self.feature_names, kind="stable")
        wanted = [self.feature_names[i] for i in order]
        if wanted != self.feature_names:
            self.rows = {cid: np.asarray(v, dtype=float)[order] for cid, v in self.rows.items()}
            self.feature_names = wanted
        if len(set(self.feature_names)) != len(self.feature_names):
            raise FeatureMismatch("duplicate column names")
        for cid, v in self.rows.items():
            if len(v) != len(self.feature_names):
                raise FeatureMismatch(f"row {cid} has {len(v)} values, expected {len(self.feature_names)}")

    def add_row(self, commit_id: str, vector: FeatureVector, label: int, fold: int) -> None:
        if commit_id in self.rows:
            raise FeatureMismatch(f"duplicate commit id {commit_id}")
        values = np.asarray(vector.values, dtype=float)
        if list(vector.names) != self.feature_names:
            order = sorted(range(len(vector.names)), key=lambda i: vector.names[i])
            if [vector.names[i] for i in order] != self.feature_names:
                raise FeatureMismatch("row features do not match matrix columns")
            values = values[order]
        self.rows[commit_id] = values
        self.provenance[commit_id] = (int(label), int(fold))

    @property
    def commit_ids(self) -> list[str]:
        return list(self.rows.keys())

    def matrix(self) -> np.ndarray:
        if not self.rows:
            return np.zeros((0, len(self.feature_names)))
        return np.vstack([self.rows[cid] for cid in self.rows])

    def labels(self) -> np.ndarray:
        return np.array([self.provenance[cid][0] for cid in self.rows], dtype=int)

    def folds(self) -> np.ndarray:
        return np.array([self.provenance[cid][1] for cid in self.rows], dtype=int)

    def select_columns(self, keep: list[str]) -> "EmbeddingMatrix":
        idx = [self.feature_names.index(n) for n in keep]
        return EmbeddingMatrix(
            self.analyzer_id,
            list(keep),
            {cid: v[idx] for cid, v in self.rows.items()},
            dict(self.provenance),
        )


def _round_sig(values: np.ndarray, digits: int = 12) -> np.ndarray:
    """Round to `digits` significant digits; used to ignore float noise when comparing columns."""
    out = values.copy()
    nz = out != 0
    if np.any(nz):
        mags = np.floor(np.log10(np.abs(out[nz]))).astype(int)
        factors = 10.0 ** (digits - 1 - mags)
        out[nz] = np.round(out[nz] * factors) / factors
    return out


def prune_columns(m: EmbeddingMatrix) -> EmbeddingMatrix:
    """Drop constant columns and value-identical duplicates (lexicographically first name wins)."""
    if not m.rows:
        return m
    data = m.matrix()
    keep: list[str] = []
    seen: set[bytes] = set()
    for j, name in enumerate(m.feature_names):  # feature_names are sorted
        col = _round_sig(data[:, j])
        if np.all(col == col[0]):
            continue
        key = col.tobytes()
        if key in seen:
            continue
        seen.add(key)
        keep.append(name)
    return m.select_columns(keep)


def write_matrix_csv(m: EmbeddingMatrix, path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["commit_id", "label", "test_fold"] + list(m.feature_names))
        for cid, values in m.rows.items():
            label, fold = m.provenance[cid]
            writer.writerow([cid, label, fold] + [repr(float(v)) for v in values])


def read_matrix_csv(path: str | Path, analyzer_id: str) -> EmbeddingMatrix:
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header[:3] != ["commit_id", "label", "test_fold"]:
            raise FeatureMismatch(f"unexpected embedding header in {path}")
        names = header[3:]
        m = EmbeddingMatrix(analyzer_id, list(names))
        for row in reader:
            cid, label, fold = row[0], int(row[1]), int(row[2])
            m.rows[cid] = np.array([float(x) for x in row[3:]], dtype=float)
            m.provenance[cid] = (label, fold)
        return m

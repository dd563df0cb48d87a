"""Chi-square screening of embedding features against the commit label.

Features are discretized first: mostly-zero features (>90% zeros) become
binary, everything else gets a zero category plus equal-frequency bins over
the nonzero values, choosing the largest bin count whose quantile edges stay
distinct so tied values never split across bins.  Tables with one degree of
freedom use Yates' continuity correction; significant features get a Cramér's
V strength classification.

The chi-square p-value comes from a local regularized incomplete gamma
implementation (series + continued fraction), accurate to ~1e-12.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from fixscout.embedding import EmbeddingMatrix

ALPHA = 0.05
MIN_EXPECTED_CELL = 5

# paper-derived defaults: pattern-rule and graph features bin to at most 4,
# class metrics to 7, style-rule features to 5
DEFAULT_MAX_BINS = {"lint": 4, "lint_style": 5, "metrics": 7, "graph": 4}


class StatsError(ValueError):
    pass


# --- incomplete gamma ---------------------------------------------------------

_EPS = 1e-16
_MAX_ITER = 500


def _lower_gamma_series(s: float, x: float) -> float:
    """Regularized lower incomplete gamma P(s, x) by series; requires x < s + 1."""
    term = 1.0 / s
    total = term
    a = s
    for _ in range(_MAX_ITER):
        a += 1.0
        term *= x / a
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + s * math.log(x) - math.lgamma(s))

def _upper_gamma_cf(s: float, x: float) -> float:
    """Regularized upper incomplete gamma Q(s, x) by Lentz continued fraction; x >= s + 1."""
    tiny = 1e-300
    b = x + 1.0 - s
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - s)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return math.exp(-x + s * math.log(x) - math.lgamma(s)) * h


def regularized_upper_gamma(s: float, x: float) -> float:
    """Q(s, x) = Gamma(s, x) / Gamma(s) for s > 0, x >= 0."""
    if s <= 0:
        raise StatsError(f"shape must be positive, got {s}")
    if x < 0:
        raise StatsError(f"x must be non-negative, got {x}")
    if x == 0:
        return 1.0
    if x < s + 1.0:
        return 1.0 - _lower_gamma_series(s, x)
    return _upper_gamma_cf(s, x)


def chi2_sf(chi2: float, dof: int) -> float:
    """Survival function of the chi-square distribution."""
    return regularized_upper_gamma(dof / 2.0, chi2 / 2.0)


# --- chi-square test ------------------------------------------------------------


def chi_square(table, correction: bool | None = None) -> tuple[float, float, int]:
    """Pearson chi-square; Yates' continuity correction applies on 1-dof tables.

    `correction=None` (default) applies Yates exactly when dof is 1;
    pass False to force the plain statistic.  Returns (statistic, p_value,
    dof).  Raises StatsError when a margin is empty, naming the offending row
    or column.
    """
    counts = np.asarray(table, dtype=float)
    if counts.ndim != 2 or counts.shape[0] < 2 or counts.shape[1] < 2:
        raise StatsError(f"contingency table must be at least 2x2, got shape {counts.shape}")
    if np.any(counts < 0):
        raise StatsError("negative count in contingency table")
    row_sums = counts.sum(axis=1)
    col_sums = counts.sum(axis=0)
    total = counts.sum()
    if total <= 0:
        raise StatsError("empty contingency table")
    for i, s in enumerate(row_sums):
        if s == 0:
            raise StatsError(f"row {i} of the contingency table is empty")
    for j, s in enumerate(col_sums):
        if s == 0:
            raise StatsError(f"column {j} of the contingency table is empty")
    expected = np.outer(row_sums, col_sums) / total
    dof = (counts.shape[0] - 1) * (counts.shape[1] - 1)
    dev = np.abs(counts - expected)
    if correction is None:
        correction = dof == 1
    if correction and dof == 1:
        # continuity correction, clamped so the corrected statistic never exceeds the plain one
        dev = np.maximum(dev - 0.5, 0.0)
    stat = float(np.sum(dev**2 / expected))
    return stat, chi2_sf(stat, dof), dof


def cramers_v(chi2: float, n: int, r: int, c: int) -> float:
    if n <= 0 or min(r - 1, c - 1) < 1:
        raise StatsError("Cramér's V needs n > 0 and a table of at least 2x2")
    return float(min(1.0, math.sqrt(chi2 / (n * min(r - 1, c - 1)))))


def strength_of(v: float) -> str:
    """Band boundaries are lower-inclusive: v=0.3 classifies as moderate."""
    if v >= 0.5:
        return "high"
    if v >= 0.3:
        return "moderate"
    if v >= 0.1:
        return "low"
    return "none"


# --- binning ---------------------------------------------------------------------


@dataclass
class BinnedFeature:
    categories: np.ndarray  # one category id per input value
    n_bins: int  # nonzero-value bins (0 when degenerate/binary)
    binary: bool
    degenerate: bool


def bin_feature(values, max_bins: int) -> BinnedFeature:
    """Discretize one feature column per the screening policy."""
    vals = np.asarray(values, dtype=float)
    if len(vals) < 2:
        raise StatsError("need at least 2 values to bin")
    if np.all(vals == vals[0]):
        return BinnedFeature(np.zeros(len(vals), dtype=int), 0, False, True)
    zero_mask = vals == 0
    if np.mean(zero_mask) > 0.9:
        return BinnedFeature((~zero_mask).astype(int), 0, True, False)
    nonzero = vals[~zero_mask]
    k = _largest_clean_bin_count(nonzero, max_bins)
    edges = np.quantile(nonzero, np.linspace(0, 1, k + 1))
    categories = np.zeros(len(vals), dtype=int)
    # category 0 means "not modified"; nonzero values land in 1..k
    categories[~zero_mask] = np.digitize(vals[~zero_mask], edges[1:-1], right=True) + 1
    return BinnedFeature(categories, k, False, False)


def _largest_clean_bin_count(nonzero: np.ndarray, max_bins: int) -> int:
    """Largest k <= max_bins whose equal-frequency edges are all distinct,
    so no tied value can straddle two bins."""
    distinct = len(np.unique(nonzero))
    for k in range(min(max_bins, distinct), 1, -1):
        edges = np.quantile(nonzero, np.linspace(0, 1, k + 1))
        if len(np.unique(edges)) == k + 1:
            return k
    return 1


def contingency_table(categories: np.ndarray, labels: np.ndarray) -> np.ndarray:
    cats = np.unique(categories)
    classes = np.unique(labels)
    table = np.zeros((len(cats), len(classes)), dtype=int)
    for i, cat in enumerate(cats):
        for j, cls in enumerate(classes):
            table[i, j] = int(np.sum((categories == cat) & (labels == cls)))
    return table


# --- per-feature association ----------------------------------------------------


@dataclass
class FeatureAssociation:
    feature: str
    chi2: float
    p_value: float
    dof: int
    significant: bool
    cramers_v: float | None = None
    strength: str | None = None
    note: str | None = None


@dataclass
class AssociationReport:
    analyzer_id: str
    entries: list[FeatureAssociation] = field(default_factory=list)
    skipped: list[tuple[str, str]] = field(default_factory=list)

    def strength_summary(self) -> dict[str, int]:
        summary = {"not_significant": 0, "none": 0, "low": 0, "moderate": 0, "high": 0}
        for e in self.entries:
            summary[e.strength if e.significant else "not_significant"] += 1
        return summary

    def significant_features(self) -> list[str]:
        return [e.feature for e in self.entries if e.significant]


def associate_feature(
    name: str,
    values: np.ndarray,
    labels: np.ndarray,
    max_bins: int,
    alpha: float = ALPHA,
) -> FeatureAssociation | tuple[str, str]:
    """Screen one feature; returns (name, reason) when it must be skipped."""
    binned = bin_feature(values, max_bins)
    if binned.degenerate:
        return name, "constant feature"
    note = None
    k = binned.n_bins
    table = contingency_table(binned.categories, labels)
    # shrink the bin count until every expected cell clears the minimum, or k=2
    while table.size and table.min() < MIN_EXPECTED_CELL and k > 2:
        k -= 1
        rebinned = bin_feature(values, k)
        binned = rebinned
        table = contingency_table(binned.categories, labels)
    if table.min() < MIN_EXPECTED_CELL:
        note = f"cell below {MIN_EXPECTED_CELL} even at minimum binning"
    if table.shape[0] < 2:
        return name, "single category after binning"
    chi2, p, dof = chi_square(table)
    significant = p < alpha
    entry = FeatureAssociation(name, chi2, p, dof, significant, note=note)
    if significant:
        v = cramers_v(chi2, int(table.sum()), table.shape[0], table.shape[1])
        entry.cramers_v = v
        entry.strength = strength_of(v)
    return entry


def association_report(
    m: EmbeddingMatrix,
    labels=None,
    max_bins: int | None = None,
    alpha: float = ALPHA,
) -> AssociationReport:
    """Chi-square screen of every column of an embedding matrix against the label."""
    if not m.rows:
        raise StatsError("empty embedding matrix")
    y = np.asarray(labels if labels is not None else m.labels(), dtype=int)
    bins = max_bins if max_bins is not None else DEFAULT_MAX_BINS.get(m.analyzer_id, 4)
    data = m.matrix()
    report = AssociationReport(m.analyzer_id)
    for j, name in enumerate(m.feature_names):
        result = associate_feature(name, data[:, j], y, bins, alpha)
        if isinstance(result, FeatureAssociation):
            report.entries.append(result)
        else:
            report.skipped.append(result)
    return report

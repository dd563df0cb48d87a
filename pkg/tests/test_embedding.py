import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fixscout.analyzers import LintAnalyzer
from fixscout.corpus import FilePair
from fixscout.embedding import (
    EmbeddingMatrix,
    FeatureMismatch,
    FeatureVector,
    aggregate_commit,
    file_diff,
    prune_columns,
    read_matrix_csv,
    version_vectors,
    write_matrix_csv,
)

NAMES = ("a", "b", "c")


def vec(*values):
    return FeatureVector(NAMES, np.array(values, dtype=float))


finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False, allow_infinity=False)
triples = arrays(np.float64, 3, elements=finite)


class TestFeatureVector:
    def test_rejects_nan(self):
        with pytest.raises(FeatureMismatch):
            FeatureVector(NAMES, np.array([1.0, np.nan, 0.0]))

    def test_rejects_duplicate_names(self):
        with pytest.raises(FeatureMismatch):
            FeatureVector(("a", "a"), np.zeros(2))

    def test_zero(self):
        z = FeatureVector.zero(NAMES)
        assert z.as_dict() == {"a": 0.0, "b": 0.0, "c": 0.0}


class TestVersionVectors:
    analyzer = LintAnalyzer("strict")

    def test_added_file_pre_is_zero(self):
        pair = FilePair("A.java", "added", None, "class A { void f() { System.out.println(1); } }")
        pre, post = version_vectors(pair, self.analyzer)
        assert not pre.values.any()
        assert post["SystemOutPrint"] == 1

    def test_deleted_file_post_is_zero(self):
        pair = FilePair("A.java", "deleted", "class A {}", None)
        pre, post = version_vectors(pair, self.analyzer)
        assert not post.values.any()

    def test_identical_sides_equal(self):
        src = "class A { void f() { g(99); } }"
        pair = FilePair("A.java", "modified", src, src)
        pre, post = version_vectors(pair, self.analyzer)
        assert np.array_equal(pre.values, post.values)

    def test_unparseable_side_sets_flag(self):
        pair = FilePair("A.java", "modified", "class A {}", "class A { ???")
        pre, post = version_vectors(pair, self.analyzer)
        assert pre["parse_error"] == 0
        assert post["parse_error"] == 1


class TestFileDiff:
    def test_arithmetic(self):
        assert file_diff(vec(2, 0, 1), vec(3, 0, 0)).values.tolist() == [1.0, 0.0, -1.0]

    def test_identity(self):
        assert not file_diff(vec(5, 5, 5), vec(5, 5, 5)).values.any()

    def test_name_mismatch(self):
        with pytest.raises(FeatureMismatch):
            file_diff(vec(1, 2, 3), FeatureVector(("x", "y", "z"), np.zeros(3)))

    @given(triples, triples)
    @settings(max_examples=50)
    def test_antisymmetry(self, a, b):
        d1 = file_diff(FeatureVector(NAMES, a), FeatureVector(NAMES, b))
        d2 = file_diff(FeatureVector(NAMES, b), FeatureVector(NAMES, a))
        assert np.array_equal(d1.values, -d2.values)


class TestAggregateCommit:
    def test_stated_formula(self):
        d1 = vec(2, 0, 0)
        d2 = vec(-3, 0, 0)
        out = aggregate_commit([d1, d2])
        assert out["a_pos"] == 2
        assert out["a_neg"] == 3

    def test_all_zero(self):
        out = aggregate_commit([vec(0, 0, 0), vec(0, 0, 0)])
        assert not out.values.any()

    def test_empty_needs_names(self):
        out = aggregate_commit([], feature_names=NAMES)
        assert out.names == ("a_pos", "a_neg", "b_pos", "b_neg", "c_pos", "c_neg")
        assert not out.values.any()
        with pytest.raises(FeatureMismatch):
            aggregate_commit([])

    @given(st.lists(triples, min_size=1, max_size=6))
    @settings(max_examples=50)
    def test_net_change_conservation(self, diff_values):
        diffs = [FeatureVector(NAMES, v) for v in diff_values]
        out = aggregate_commit(diffs)
        total = np.sum(diff_values, axis=0)
        for i, name in enumerate(NAMES):
            assert out[f"{name}_pos"] - out[f"{name}_neg"] == pytest.approx(total[i], abs=1e-9)
        assert np.all(out.values >= 0)


def toy_matrix(columns: dict[str, list[float]], labels=None) -> EmbeddingMatrix:
    names = list(columns)
    n_rows = len(next(iter(columns.values())))
    m = EmbeddingMatrix("lint", names)
    for i in range(n_rows):
        row = FeatureVector(tuple(names), np.array([columns[c][i] for c in names]))
        label = labels[i] if labels else i % 2
        m.add_row(f"c{i:03d}", row, label, i % 5)
    return m


class TestPrune:
    def test_constant_column_removed(self):
        m = toy_matrix({"a": [7, 7, 7], "b": [1, 2, 3]})
        pruned = prune_columns(m)
        assert pruned.feature_names == ["b"]

    def test_duplicate_keeps_lexicographically_first(self):
        m = toy_matrix({"zz": [1, 2, 3], "aa": [1, 2, 3], "mm": [4, 5, 6]})
        pruned = prune_columns(m)
        assert pruned.feature_names == ["aa", "mm"]

    def test_float_noise_counts_as_duplicate(self):
        base = [1.0, 2.0, 3.0]
        noisy = [v * (1 + 1e-14) for v in base]
        m = toy_matrix({"a": base, "b": noisy})
        assert prune_columns(m).feature_names == ["a"]

    def test_all_pruned_is_legal(self):
        m = toy_matrix({"a": [5, 5], "b": [5, 5]})
        pruned = prune_columns(m)
        assert pruned.feature_names == []
        assert pruned.commit_ids == m.commit_ids

    @given(
        st.lists(
            st.tuples(*(st.floats(min_value=-100, max_value=100, allow_nan=False) for _ in range(4))),
            min_size=2,
            max_size=8,
        )
    )
    @settings(max_examples=40)
    def test_idempotent(self, rows):
        cols = {f"f{j}": [r[j] for r in rows] for j in range(4)}
        m = toy_matrix(cols)
        once = prune_columns(m)
        twice = prune_columns(once)
        assert once.feature_names == twice.feature_names
        assert all(np.array_equal(once.rows[c], twice.rows[c]) for c in once.rows)


class TestMatrix:
    def test_columns_sorted_and_provenance_kept(self):
        m = toy_matrix({"zeta": [1, 2], "alpha": [3, 4]})
        assert m.feature_names == ["alpha", "zeta"]
        assert m.rows["c000"].tolist() == [3.0, 1.0]
        assert m.provenance["c001"] == (1, 1)

    def test_duplicate_commit_rejected(self):
        m = toy_matrix({"a": [1]})
        with pytest.raises(FeatureMismatch):
            m.add_row("c000", FeatureVector(("a",), np.array([2.0])), 0, 0)

    def test_csv_round_trip(self, tmp_path):
        m = toy_matrix({"b": [1.5, -2.25], "a": [0.1, 1e-9]})
        path = tmp_path / "emb.csv"
        write_matrix_csv(m, path)
        back = read_matrix_csv(path, "lint")
        assert back.feature_names == m.feature_names
        assert back.provenance == m.provenance
        for cid in m.rows:
            assert np.array_equal(back.rows[cid], m.rows[cid])

    def test_identity_commit_embeds_to_zero(self):
        analyzer = LintAnalyzer("strict")
        src = "class A { void f() { System.out.println(42); } }"
        pair = FilePair("A.java", "modified", src, src)
        pre, post = version_vectors(pair, analyzer)
        out = aggregate_commit([file_diff(pre, post)])
        assert not out.values.any()

import os
import subprocess

import pytest

from fixscout.corpus import (
    CommitRecord,
    GitRepo,
    ManifestError,
    PartialSample,
    UnreachableCommit,
    load_manifest,
    read_snapshot,
    repo_slug,
    resolve_commit,
    sample_negatives,
    save_manifest,
    write_snapshot,
)

SHA_A = "a" * 40
SHA_B = "b" * 40


def git(repo, *args):
    env = dict(os.environ)
    env.update(
        GIT_AUTHOR_NAME="t",
        GIT_AUTHOR_EMAIL="t@example.invalid",
        GIT_COMMITTER_NAME="t",
        GIT_COMMITTER_EMAIL="t@example.invalid",
        GIT_AUTHOR_DATE="2020-01-01T00:00:00 +0000",
        GIT_COMMITTER_DATE="2020-01-01T00:00:00 +0000",
    )
    proc = subprocess.run(["git", "-C", str(repo), *args], capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    return proc.stdout


@pytest.fixture
def fixture_repo(tmp_path):
    repo = tmp_path / "fixture"
    repo.mkdir()
    git(repo, "init", "--quiet", "-b", "main")

    def commit(files: dict, message: str) -> str:
        for path, content in files.items():
            target = repo / path
            if content is None:
                target.unlink()
            else:
                target.parent.mkdir(parents=True, exist_ok=True)
                target.write_text(content, encoding="utf-8")
        git(repo, "add", "-A")
        git(repo, "commit", "--quiet", "-m", message)
        return git(repo, "rev-parse", "HEAD").strip()

    return repo, commit


class TestManifest:
    HEADER = "repo_url,sha,label,test_fold,message\n"

    def test_header_only_is_empty(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(self.HEADER)
        assert load_manifest(path) == []

    def test_row_maps_to_record(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(self.HEADER + f"https://r.git,{SHA_A},1,3,fix xss\n")
        (record,) = load_manifest(path)
        assert record == CommitRecord("https://r.git", SHA_A, 1, 3, "fix xss")

    def test_duplicate_pair_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(self.HEADER + f"r,{SHA_A},1,0,\n" + f"r,{SHA_A},0,1,\n")
        with pytest.raises(ManifestError, match="duplicate"):
            load_manifest(path)

    def test_malformed_label_names_row_and_column(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(self.HEADER + f"r,{SHA_A},yes,0,\n")
        with pytest.raises(ManifestError, match=r":2: column 'label'"):
            load_manifest(path)

    def test_unknown_fold_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(self.HEADER + f"r,{SHA_A},1,7,\n")
        with pytest.raises(ManifestError, match="test_fold"):
            load_manifest(path)

    def test_bad_sha_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text(self.HEADER + "r,not-a-sha,1,0,\n")
        with pytest.raises(ManifestError, match="sha"):
            load_manifest(path)

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "m.csv"
        path.write_text("repo,sha,label\n")
        with pytest.raises(ManifestError, match="header"):
            load_manifest(path)

    def test_round_trip(self, tmp_path):
        records = [CommitRecord("r", SHA_A, 1, 0, "msg"), CommitRecord("r", SHA_B, 0, 4, None)]
        path = tmp_path / "m.csv"
        save_manifest(records, path)
        back = load_manifest(path)
        assert back[0] == records[0]
        assert back[1].sha == SHA_B
        assert back[1].message in (None, "")

    def test_record_invariants(self):
        with pytest.raises(ManifestError):
            CommitRecord("r", "zz", 1, 0)
        with pytest.raises(ManifestError):
            CommitRecord("r", SHA_A, 2, 0)
        with pytest.raises(ManifestError):
            CommitRecord("r", SHA_A, 1, 5)


class TestRepoSlug:
    @pytest.mark.parametrize(
        "url,expected",
        [
            ("https://github.com/acme/widget.git", "widget"),
            ("git@github.com:acme/widget.git", "widget"),
            ("widget", "widget"),
            ("https://host/a b!.git", "a-b-"),
        ],
    )
    def test_slugs(self, url, expected):
        assert repo_slug(url) == expected


class TestResolveCommit:
    def test_non_source_commit_gives_empty_snapshot(self, fixture_repo):
        repo_path, commit = fixture_repo
        commit({"A.java": "class A {}"}, "seed")
        sha = commit({"README.md": "# docs"}, "docs only")
        snap = resolve_commit(GitRepo(repo_path), CommitRecord("r", sha, 0, 0))
        assert snap.files == []

    def test_add_edit_delete_statuses(self, fixture_repo):
        repo_path, commit = fixture_repo
        commit({"B.java": "class B { int x; }", "C.java": "class C {}"}, "seed")
        sha = commit(
            {"A.java": "class A {}", "B.java": "class B { int x; int y; }", "C.java": None},
            "add A, edit B, delete C",
        )
        snap = resolve_commit(GitRepo(repo_path), CommitRecord("r", sha, 1, 0))
        by_path = {f.path: f for f in snap.files}
        assert set(by_path) == {"A.java", "B.java", "C.java"}
        assert by_path["A.java"].status == "added"
        assert by_path["A.java"].pre_text is None
        assert by_path["A.java"].post_text == "class A {}"
        assert by_path["B.java"].status == "modified"
        assert by_path["B.java"].pre_text != by_path["B.java"].post_text
        assert by_path["C.java"].status == "deleted"
        assert by_path["C.java"].post_text is None
        statuses = [f.status for f in snap.files]
        assert statuses.count("added") + statuses.count("modified") + statuses.count("deleted") == len(snap.files)

    def test_root_commit_is_all_added(self, fixture_repo):
        repo_path, commit = fixture_repo
        sha = commit({"A.java": "class A {}"}, "root")
        snap = resolve_commit(GitRepo(repo_path), CommitRecord("r", sha, 0, 0))
        assert [f.status for f in snap.files] == ["added"]

    def test_unreachable_commit_raises(self, fixture_repo):
        repo_path, commit = fixture_repo
        commit({"A.java": "class A {}"}, "seed")
        git(repo_path, "checkout", "--quiet", "-b", "doomed")
        sha = commit({"A.java": "class A { int q; }"}, "on doomed branch")
        git(repo_path, "checkout", "--quiet", "main")
        git(repo_path, "branch", "-D", "doomed")
        git(repo_path, "reflog", "expire", "--expire=now", "--all")
        git(repo_path, "gc", "--quiet", "--prune=now")
        with pytest.raises(UnreachableCommit):
            resolve_commit(GitRepo(repo_path), CommitRecord("r", sha, 1, 0))

    def test_merge_diffs_against_first_parent(self, fixture_repo):
        repo_path, commit = fixture_repo
        commit({"A.java": "class A {}"}, "base")
        git(repo_path, "checkout", "--quiet", "-b", "side")
        commit({"B.java": "class B {}"}, "side work")
        git(repo_path, "checkout", "--quiet", "main")
        commit({"C.java": "class C {}"}, "main work")
        git(repo_path, "merge", "--quiet", "--no-ff", "-m", "merge side", "side")
        sha = git(repo_path, "rev-parse", "HEAD").strip()
        snap = resolve_commit(GitRepo(repo_path), CommitRecord("r", sha, 0, 0))
        # vs. first parent (main): only B.java arrives through the merge
        assert [f.path for f in snap.files] == ["B.java"]

    def test_resolution_is_pure(self, fixture_repo):
        repo_path, commit = fixture_repo
        commit({"A.java": "class A {}"}, "seed")
        sha = commit({"A.java": "class A { int x; }"}, "edit")
        record = CommitRecord("r", sha, 1, 2)
        first = resolve_commit(GitRepo(repo_path), record)
        second = resolve_commit(GitRepo(repo_path), record)
        assert first.files == second.files


class TestSampleNegatives:
    def seed_repo(self, fixture_repo, n=10):
        repo_path, commit = fixture_repo
        shas = []
        for i in range(n):
            message = "fix security hole" if i == 4 else f"routine change {i}"
            shas.append(commit({f"F{i}.java": f"class F{i} {{}}"}, message))
        return repo_path, shas

    def test_draws_from_eligible_pool(self, fixture_repo):
        repo_path, shas = self.seed_repo(fixture_repo)
        positives = [CommitRecord("r", shas[0], 1, 0), CommitRecord("r", shas[1], 1, 1)]
        result = sample_negatives(GitRepo(repo_path), positives, keywords=("security",), seed=3)
        assert isinstance(result, list)
        assert len(result) == 2
        eligible = set(shas[2:]) - {shas[4]}  # the keyword commit is out
        for record in result:
            assert record.sha in eligible
            assert record.label == 0

    def test_exhausted_pool_returns_partial(self, fixture_repo):
        repo_path, shas = self.seed_repo(fixture_repo, n=3)
        positives = [CommitRecord("r", sha, 1, 0) for sha in shas]
        result = sample_negatives(GitRepo(repo_path), positives, seed=0)
        assert isinstance(result, PartialSample)
        assert result.found == 0
        assert result.requested == 3

    def test_all_keyword_matched_gives_empty_partial(self, fixture_repo):
        repo_path, commit = fixture_repo
        shas = [commit({f"G{i}.java": f"class G{i} {{}}"}, f"security fix {i}") for i in range(4)]
        positives = [CommitRecord("r", shas[0], 1, 0)]
        result = sample_negatives(GitRepo(repo_path), positives, keywords=("security",), seed=1)
        assert isinstance(result, PartialSample)
        assert result.found == 0

    def test_deterministic_for_seed(self, fixture_repo):
        repo_path, shas = self.seed_repo(fixture_repo)
        positives = [CommitRecord("r", shas[0], 1, 0), CommitRecord("r", shas[1], 1, 1)]
        a = sample_negatives(GitRepo(repo_path), positives, seed=42)
        b = sample_negatives(GitRepo(repo_path), positives, seed=42)
        assert a == b

    def test_size_filter(self, fixture_repo):
        repo_path, commit = fixture_repo
        big = commit({f"H{i}.java": f"class H{i} {{}}" for i in range(5)}, "big change")
        small = [commit({f"K{i}.java": f"class K{i} {{}}"}, f"small {i}") for i in range(3)]
        positives = [CommitRecord("r", small[0], 1, 0)]
        result = sample_negatives(
            GitRepo(repo_path), positives, size_limits=(1, 2), seed=0
        )
        assert isinstance(result, list)
        assert result[0].sha != big

    def test_disjoint_from_positives(self, fixture_repo):
        repo_path, shas = self.seed_repo(fixture_repo)
        positives = [CommitRecord("r", sha, 1, 0) for sha in shas[:3]]
        result = sample_negatives(GitRepo(repo_path), positives, seed=5)
        assert isinstance(result, list)
        assert {r.sha for r in result}.isdisjoint({p.sha for p in positives})


class TestSnapshotCache:
    def test_round_trip(self, tmp_path, fixture_repo):
        repo_path, commit = fixture_repo
        commit({"A.java": "class A {}"}, "seed")
        sha = commit({"A.java": "class A { int x; }", "B.java": "class B {}"}, "edit + add")
        record = CommitRecord("r", sha, 1, 2)
        snap = resolve_commit(GitRepo(repo_path), record)
        write_snapshot(tmp_path / "cache", snap)
        back = read_snapshot(tmp_path / "cache", record)
        assert back.record == record
        assert back.files == snap.files

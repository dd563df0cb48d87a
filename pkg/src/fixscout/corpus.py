"""Labeled commit corpus: manifest I/O, git snapshot resolution, negative sampling.

Repositories are consumed as pre-existing local clones through the system git
client.  Merge commits are diffed against their first parent; root commits
count as all-added.
"""

from __future__ import annotations

import csv
import json
import random
import re
import subprocess
from dataclasses import dataclass, field
from pathlib import Path

_EMPTY_TREE = "4b825dc642cb6eb9a060e54bf8d69288fbee4904"  # hash of the empty tree, stable across repos
_SHA_RE = re.compile(r"^[0-9a-f]{40}$")

DEFAULT_EXTENSIONS = (".java",)
DEFAULT_KEYWORDS = (
    "security",
    "vulnerab",
    "exploit",
    "cve",
    "xss",
    "injection",
    "overflow",
    "csrf",
    "denial of service",
    "rce",
)
DEFAULT_SIZE_LIMITS = (1, 100)

MANIFEST_COLUMNS = ("repo_url", "sha", "label", "test_fold")


class ManifestError(ValueError):
    pass


class GitError(RuntimeError):
    pass


class UnreachableCommit(GitError):
    """The manifest references a commit the clone no longer contains."""


@dataclass(frozen=True)
class CommitRecord:
    repo_url: str
    sha: str
    label: int
    test_fold: int
    message: str | None = None

    def __post_init__(self):
        if not _SHA_RE.match(self.sha):
            raise ManifestError(f"invalid sha {self.sha!r}")
        if self.label not in (0, 1):
            raise ManifestError(f"label must be 0 or 1, got {self.label!r}")
        if not 0 <= self.test_fold <= 4:
            raise ManifestError(f"test_fold must be in 0..4, got {self.test_fold!r}")


@dataclass(frozen=True)
class FilePair:
    path: str
    status: str  # modified | added | deleted
    pre_text: str | None
    post_text: str | None

    def __post_init__(self):
        if self.status == "added" and not (self.pre_text is None and self.post_text is not None):
            raise ValueError("added file must have only a post version")
        if self.status == "deleted" and not (self.pre_text is not None and self.post_text is None):
            raise ValueError("deleted file must have only a pre version")
        if self.status == "modified" and (self.pre_text is None or self.post_text is None):
            raise ValueError("modified file needs both versions")


@dataclass
class CommitSnapshot:
    record: CommitRecord
    files: list[FilePair] = field(default_factory=list)


@dataclass
class PartialSample:
    """Returned instead of a plain list when the eligible pool ran out."""

    records: list[CommitRecord]
    requested: int

    @property
    def found(self) -> int:
        return len(self.records)


# --- manifest ---------------------------------------------------------------


def load_manifest(path: str | Path) -> list[CommitRecord]:
    path = Path(path)
    if not path.exists():
        raise ManifestError(f"manifest not found: {path}")
    records: list[CommitRecord] = []
    seen: set[tuple[str, str]] = set()
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise ManifestError(f"{path}: empty file, expected a header row") from None
        if tuple(header[:4]) != MANIFEST_COLUMNS or len(header) > 5 or (len(header) == 5 and header[4] != "message"):
            raise ManifestError(f"{path}: header must be repo_url,sha,label,test_fold[,message], got {header}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) < 4:
                raise ManifestError(f"{path}:{lineno}: expected at least 4 columns, got {len(row)}")
            repo_url, sha = row[0].strip(), row[1].strip().lower()
            try:
                label = int(row[2])
            except ValueError:
                raise ManifestError(f"{path}:{lineno}: column 'label' is not an integer: {row[2]!r}") from None
            try:
                fold = int(row[3])
            except ValueError:
                raise ManifestError(f"{path}:{lineno}: column 'test_fold' is not an integer: {row[3]!r}") from None
            message = row[4] if len(row) > 4 else None
            try:
                record = CommitRecord(repo_url, sha, label, fold, message)
            except ManifestError as e:
                raise ManifestError(f"{path}:{lineno}: {e}") from None
            key = (repo_url, sha)
            if key in seen:
                raise ManifestError(f"{path}:{lineno}: duplicate (repo, sha) pair {key}")
            seen.add(key)
            records.append(record)
    return records


def save_manifest(records: list[CommitRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(MANIFEST_COLUMNS + ("message",))
        for r in records:
            writer.writerow([r.repo_url, r.sha, r.label, r.test_fold, r.message or ""])


def repo_slug(repo_url: str) -> str:
    """Directory name a clone of `repo_url` is expected under."""
    tail = repo_url.rstrip("/").split("/")[-1].split(":")[-1]
    if tail.endswith(".git"):
        tail = tail[: -len(".git")]
    return re.sub(r"[^A-Za-z0-9._-]", "-", tail) or "repo"


# --- git --------------------------------------------------------------------


class GitRepo:
    """Read-only handle on a local clone; every worker should hold its own."""

    def __init__(self, path: str | Path):
        self.path = Path(path)
        if not self.path.exists():
            raise GitError(f"clone not found: {self.path}")

    def _run(self, *args: str, check: bool = True) -> str:
        proc = subprocess.run(
            ["git", "-C", str(self.path), *args],
            capture_output=True,
            text=True,
        )
        if check and proc.returncode != 0:
            raise GitError(f"git {' '.join(args)} failed in {self.path}: {proc.stderr.strip()}")
        return proc.stdout

    def has_commit(self, sha: str) -> bool:
        proc = subprocess.run(
            ["git", "-C", str(self.path), "cat-file", "-e", f"{sha}^{{commit}}"],
            capture_output=True,
        )
        return proc.returncode == 0

    def first_parent(self, sha: str) -> str | None:
        line = self._run("rev-list", "--parents", "-n", "1", sha).split()
        return line[1] if len(line) > 1 else None

    def message(self, sha: str) -> str:
        return self._run("log", "-1", "--format=%B", sha)

    def changed_files(self, sha: str) -> list[tuple[str, str]]:
        """(status_letter, path) of every file changed vs. the first parent."""
        parent = self.first_parent(sha)
        base = parent if parent is not None else _EMPTY_TREE
        out = self._run("diff-tree", "-r", "--no-renames", "--name-status", base, sha)
        entries = []
        for line in out.splitlines():
            if not line.strip():
                continue
            status, _, path = line.partition("\t")
            entries.append((status.strip()[:1], path))
        return entries

    def file_text(self, sha: str, path: str) -> str:
        out = subprocess.run(
            ["git", "-C", str(self.path), "show", f"{sha}:{path}"],
            capture_output=True,
        )
        if out.returncode != 0:
            raise GitError(f"cannot read {path} at {sha[:12]}: {out.stderr.decode(errors='replace').strip()}")
        return out.stdout.decode("utf-8", errors="replace")

    def all_commits(self) -> list[str]:
        return self._run("rev-list", "--all").split()


def fetch_clone(repo_url: str, dest: Path) -> None:
    dest.parent.mkdir(parents=True, exist_ok=True)
    proc = subprocess.run(["git", "clone", "--quiet", repo_url, str(dest)], capture_output=True, text=True)
    if proc.returncode != 0:
        raise GitError(f"clone of {repo_url} failed: {proc.stderr.strip()}")


def resolve_commit(
    repo: GitRepo,
    record: CommitRecord,
    extensions: tuple[str, ...] = DEFAULT_EXTENSIONS,
) -> CommitSnapshot:
    """Materialize before/after texts of the source files a commit changed."""
    if not repo.has_commit(record.sha):
        raise UnreachableCommit(f"{record.sha} not reachable in {repo.path}")
    parent = repo.first_parent(record.sha)
    files: list[FilePair] = []
    for status, path in repo.changed_files(record.sha):
        if not path.endswith(extensions):
            continue
        if status == "A" or parent is None:
            files.append(FilePair(path, "added", None, repo.file_text(record.sha, path)))
        elif status == "D":
            files.append(FilePair(path, "deleted", repo.file_text(parent, path), None))
        else:  # M and mode/type changes
            pre = repo.file_text(parent, path)
            post = repo.file_text(record.sha, path)
            if pre == post:
                continue  # mode-only change; content did not move
            files.append(FilePair(path, "modified", pre, post))
    return CommitSnapshot(record, files)


def sample_negatives(
    repo: GitRepo,
    positives: list[CommitRecord],
    keywords: tuple[str, ...] = DEFAULT_KEYWORDS,
    size_limits: tuple[int, int] = DEFAULT_SIZE_LIMITS,
    seed: int = 0,
    repo_url: str | None = None,
) -> list[CommitRecord] | PartialSample:
    """Draw |positives| random label-0 commits that pass the keyword and size checks.

    Deterministic for a fixed seed.  Returns a PartialSample when the pool
    runs out before the quota is met.
    """
    quota = len(positives)
    taken: list[CommitRecord] = []
    exclude = {p.sha for p in positives}
    url = repo_url if repo_url is not None else (positives[0].repo_url if positives else str(repo.path))
    min_files, max_files = size_limits
    pool = [sha for sha in repo.all_commits() if sha not in exclude]
    random.Random(seed).shuffle(pool)
    lowered = tuple(k.lower() for k in keywords)
    for sha in pool:
        if len(taken) == quota:
            break
        message = repo.message(sha)
        if any(k in message.lower() for k in lowered):
            continue
        n_changed = len(repo.changed_files(sha))
        if not min_files <= n_changed <= max_files:
            continue
        taken.append(CommitRecord(url, sha, 0, len(taken) % 5, message.strip() or None))
    if len(taken) < quota:
        return PartialSample(taken, quota)
    return taken


# --- snapshot cache -----------------------------------------------------------


def snapshot_dir(cache_root: Path, record: CommitRecord) -> Path:
    return Path(cache_root) / record.sha


def write_snapshot(cache_root: Path, snap: CommitSnapshot) -> None:
    root = snapshot_dir(cache_root, snap.record)
    root.mkdir(parents=True, exist_ok=True)
    meta = {
        "repo_url": snap.record.repo_url,
        "sha": snap.record.sha,
        "label": snap.record.label,
        "test_fold": snap.record.test_fold,
        "files": [{"path": f.path, "status": f.status} for f in snap.files],
    }
    for pair in snap.files:
        for side, text in (("pre", pair.pre_text), ("post", pair.post_text)):
            if text is None:
                continue
            target = root / side / pair.path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(text, encoding="utf-8")
    (root / "meta.json").write_text(json.dumps(meta, indent=1), encoding="utf-8")


def read_snapshot(cache_root: Path, record: CommitRecord) -> CommitSnapshot:
    root = snapshot_dir(cache_root, record)
    meta_path = root / "meta.json"
    if not meta_path.exists():
        raise FileNotFoundError(f"no cached snapshot for {record.sha} under {cache_root}")
    meta = json.loads(meta_path.read_text(encoding="utf-8"))
    files = []
    for entry in meta["files"]:
        pre = root / "pre" / entry["path"]
        post = root / "post" / entry["path"]
        files.append(
            FilePair(
                entry["path"],
                entry["status"],
                pre.read_text(encoding="utf-8") if pre.exists() else None,
                post.read_text(encoding="utf-8") if post.exists() else None,
            )
        )
    return CommitSnapshot(record, files)


def has_snapshot(cache_root: Path, record: CommitRecord) -> bool:
    return (snapshot_dir(cache_root, record) / "meta.json").exists()

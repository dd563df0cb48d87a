"""Synthetic labeled corpus: a deterministic git repository of Java commits
where positive commits apply security-fix-shaped edits and negative commits
apply neutral ones.

At signal strength 0 both classes draw from the same neutral edit pool, so
every feature is label-independent by construction.  The generator also emits
the manifest (stratified folds) and a planted-features list naming the
embedding columns its positive patterns move, which the acceptance suite
checks against the chi-square screen.
"""

from __future__ import annotations

import json
import os
import random
import subprocess
from dataclasses import dataclass
from pathlib import Path

from fixscout.corpus import CommitRecord, save_manifest
from fixscout.pipeline.folds import stratified_kfold

SIGNAL_LEVELS = {"high": 1.0, "medium": 0.6, "low": 0.3, "0": 0.0, "none": 0.0}

REPO_NAME = "synth-corpus"

# Embedding columns the positive patterns move, per analyzer. Fixing a broad
# catch, deleting a hardcoded secret, replacing == string compares and adding
# validation branches each leave a distinct footprint.  (ast_node_count always
# deduplicates into ast_edge_count on tree graphs, so the edge variant is listed.)
PLANTED_FEATURES = {
    "lint": [
        "CatchBroadException_neg",
        "HardcodedSecretString_neg",
        "StringEqualsOperator_neg",
        "PrintStackTrace_neg",
    ],
    "metrics": [
        "comparison_count_pos",
        "wmc_pos",
    ],
    "graph": [
        "cfg_branch_node_count_pos",
        "cfg_node_count_pos",
        "ast_edge_count_pos",
    ],
}


@dataclass
class SynthOptions:
    n_commits: int = 200
    signal: str = "high"
    seed: int = 42
    n_files: int = 10
    folds: int = 5

    @property
    def signal_probability(self) -> float:
        if self.signal not in SIGNAL_LEVELS:
            raise ValueError(f"signal must be one of {sorted(SIGNAL_LEVELS)}, got {self.signal!r}")
        return SIGNAL_LEVELS[self.signal]


def _file_template(index: int, rng: random.Random) -> str:
    """One service class with a few vulnerable-looking spots to edit later."""
    levels = rng.randint(2, 4)
    checks = "\n".join(
        f"        if (input.length() > {10 * (i + 1)}) {{ count = count + {i + 1}; }}" for i in range(levels)
    )
    return f"""package synth.app;

import java.io.IOException;
import java.util.List;

public class Service{index} {{
    private String apiToken = "tok-{rng.randint(1000, 9999)}-secret";
    private int count = 0;
    private int limit = {rng.randint(50, 200)};

    public int handle(String input) {{
        if (input == "admin") {{
            return -1;
        }}
{checks}
        try {{
            process(input);
        }} catch (Exception e) {{
            e.printStackTrace();
        }}
        return count;
    }}

    private void process(String item) {{
        for (int i = 0; i < limit; i++) {{
            count = count + i;
        }}
    }}

    public int size() {{
        return count;
    }}
}}
"""


# --- edit operations --------------------------------------------------------------


def _edit_narrow_catch(text: str, rng) -> str | None:
    if "catch (Exception e)" not in text:
        return None
    return text.replace("catch (Exception e)", "catch (IOException e)", 1)


def _edit_handle_exception(text: str, rng) -> str | None:
    if "e.printStackTrace();" not in text:
        return None
    return text.replace("e.printStackTrace();", "count = -1;", 1)


def _edit_remove_secret(text: str, rng) -> str | None:
    marker = 'private String apiToken = "'
    if marker not in text:
        return None
    start = text.index(marker)
    end = text.index(";", start)
    return text[:start] + 'private String apiToken = System.getenv("API_TOKEN")' + text[end:]


def _edit_fix_string_compare(text: str, rng) -> str | None:
    if 'input == "admin"' not in text:
        return None
    return text.replace('input == "admin"', '"admin".equals(input)', 1)


def _edit_add_validation(text: str, rng) -> str | None:
    anchor = "    public int handle(String input) {\n"
    if anchor not in text:
        return None
    guard = (
        "        if (input == null) {\n"
        "            throw new IllegalArgumentException(\"input\");\n"
        "        }\n"
        f"        if (input.length() < {rng.randint(1, 3)}) {{\n"
        "            return 0;\n"
        "        }\n"
    )
    return text.replace(anchor, anchor + guard, 1)


SECURITY_EDITS = [
    _edit_narrow_catch,
    _edit_handle_exception,
    _edit_remove_secret,
    _edit_fix_string_compare,
    _edit_add_validation,
]


def _edit_rename_counter(text: str, rng) -> str | None:
    fresh = f"limit{rng.randint(2, 99)}"
    if "int limit =" not in text or fresh in text:
        return None
    return text.replace("limit", fresh)


def _edit_tweak_constant(text: str, rng) -> str | None:
    marker = "private int limit"
    if marker not in text:
        return None
    start = text.index("= ", text.index(marker)) + 2
    end = text.index(";", start)
    return text[:start] + str(rng.randint(50, 400)) + text[end:]


def _edit_add_comment(text: str, rng) -> str | None:
    note = f"// revision note {rng.randint(100, 999)}\n"
    return note + text


def _edit_add_getter(text: str, rng) -> str | None:
    name = f"value{rng.randint(2, 99)}"
    if f"int {name}()" in text:
        return None
    method = f"\n    public int {name}() {{\n        return count + {rng.randint(3, 9)};\n    }}\n"
    closing = text.rstrip().rfind("}")
    return text[:closing] + method + text[closing:]


# weights favor small footprints so label-independent noise stays modest
NEUTRAL_EDITS = [
    (_edit_add_comment, 0.35),
    (_edit_tweak_constant, 0.30),
    (_edit_rename_counter, 0.20),
    (_edit_add_getter, 0.15),
]


# --- repository assembly ------------------------------------------------------------


def _git(repo: Path, *args: str, env=None) -> str:
    proc = subprocess.run(["git", "-C", str(repo), *args], capture_output=True, text=True, env=env)
    if proc.returncode != 0:
        raise RuntimeError(f"git {' '.join(args)} failed: {proc.stderr.strip()}")
    return proc.stdout


def _commit_env(step: int) -> dict:
    # fixed identity and timestamps make commit shas reproducible run to run
    stamp = f"2021-01-01T{step // 3600:02d}:{(step // 60) % 60:02d}:{step % 60:02d} +0000"
    env = dict(os.environ)
    env.update(
        {
            "GIT_AUTHOR_NAME": "corpus-bot",
            "GIT_AUTHOR_EMAIL": "corpus@example.invalid",
            "GIT_COMMITTER_NAME": "corpus-bot",
            "GIT_COMMITTER_EMAIL": "corpus@example.invalid",
            "GIT_AUTHOR_DATE": stamp,
            "GIT_COMMITTER_DATE": stamp,
        }
    )
    return env


POSITIVE_MESSAGES = [
    "fix unchecked input handling",
    "harden request validation",
    "patch unsafe comparison",
    "correct error handling path",
]
NEGATIVE_MESSAGES = [
    "refactor counters",
    "update limits",
    "documentation touch-up",
    "add accessor",
]


def generate_corpus(out_dir: str | Path, options: SynthOptions) -> dict:
    """Create the repo, commit the edits, write manifest + planted features.

    Returns a summary dict (paths and counts)."""
    out_dir = Path(out_dir)
    if options.n_commits < 2 * options.folds:
        raise ValueError(
            f"need at least {2 * options.folds} commits to stratify both classes over {options.folds} folds"
        )
    repo = out_dir / "repos" / REPO_NAME
    if repo.exists():
        raise FileExistsError(f"{repo} already exists; refusing to overwrite")
    repo.mkdir(parents=True)
    rng = random.Random(options.seed)
    signal_p = options.signal_probability

    _git(repo, "init", "--quiet", "-b", "main")
    src = repo / "src" / "synth" / "app"
    src.mkdir(parents=True)
    files = []
    for i in range(options.n_files):
        path = src / f"Service{i}.java"
        path.write_text(_file_template(i, rng), encoding="utf-8")
        files.append(path)
    _git(repo, "add", "-A")
    _git(repo, "commit", "--quiet", "-m", "initial corpus", env=_commit_env(0))

    half = options.n_commits // 2
    labels = [1] * half + [0] * (options.n_commits - half)
    rng.shuffle(labels)

    records: list[tuple[str, int, str]] = []  # (sha, label, message)
    for step, label in enumerate(labels, start=1):
        path = files[rng.randrange(len(files))]
        text = path.read_text(encoding="utf-8")
        if label == 1 and rng.random() < signal_p:
            new_text = _apply_security_edits(text, rng)
            message = rng.choice(POSITIVE_MESSAGES)
        else:
            new_text = _apply_neutral_edit(text, rng)
            message = rng.choice(POSITIVE_MESSAGES if label == 1 else NEGATIVE_MESSAGES)
        if new_text == text:
            new_text = _edit_add_comment(text, rng)
        path.write_text(new_text, encoding="utf-8")
        # regenerating a file now and then replenishes the security patterns the
        # positive edits consume; a pattern-free (signal 0) corpus never needs it
        if signal_p > 0 and rng.random() < 0.4:
            refreshed = files[rng.randrange(len(files))]
            if refreshed != path:
                refreshed.write_text(
                    _file_template(int(refreshed.stem.removeprefix("Service")), rng), encoding="utf-8"
                )
        _git(repo, "add", "-A")
        _git(repo, "commit", "--quiet", "-m", message, env=_commit_env(step))
        sha = _git(repo, "rev-parse", "HEAD").strip()
        records.append((sha, label, message))

    fold_ids = stratified_kfold([label for _, label, _ in records], k=options.folds, seed=options.seed)
    manifest = [
        CommitRecord(REPO_NAME, sha, label, int(fold), message)
        for (sha, label, message), fold in zip(records, fold_ids)
    ]
    manifest_path = out_dir / "manifest.csv"
    save_manifest(manifest, manifest_path)

    planted_path = out_dir / "planted_features.json"
    planted_path.write_text(
        json.dumps({"signal": options.signal, "features": PLANTED_FEATURES}, indent=1),
        encoding="utf-8",
    )
    return {
        "repo": str(repo),
        "manifest": str(manifest_path),
        "planted_features": str(planted_path),
        "commits": len(manifest),
        "positives": sum(1 for r in manifest if r.label == 1),
    }


def _apply_security_edits(text: str, rng) -> str:
    """Apply a random subset of the applicable security patterns (at least one),
    so the pattern footprints vary commit to commit instead of co-occurring."""
    out = text
    applied = 0
    applicable = []
    for edit in SECURITY_EDITS:
        result = edit(out, rng)
        if result is None:
            continue
        applicable.append(edit)
        if rng.random() < 0.7:
            out = result
            applied += 1
    if applied == 0 and applicable:
        out = rng.choice(applicable)(out, rng)
    return out


def _apply_neutral_edit(text: str, rng) -> str:
    edits = [e for e, _ in NEUTRAL_EDITS]
    weights = [w for _, w in NEUTRAL_EDITS]
    order = rng.choices(range(len(edits)), weights=weights, k=8)
    for i in order:
        result = edits[i](text, rng)
        if result is not None:
            return result
    return _edit_add_comment(text, rng)

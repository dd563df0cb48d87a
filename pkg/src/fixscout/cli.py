"""Command-line front end wiring the stages together.

Stages communicate through plain files under one output directory:

    out/manifest.csv                      labeled commits (synth writes one)
    out/cache/<sha>/{meta.json,pre,post}  ingested file snapshots
    out/exclusions.csv                    commits dropped during ingest
    out/embeddings/<analyzer>.csv         one commit-level embedding per analyzer
    out/stats/<analyzer>_associations.csv chi-square screen per feature
    out/train/run_report.json             search results, CV metrics, ensembles
    out/train/models/                     deployable model artifacts
    out/report/summary.txt                human-readable digest

Each stage stamps its output with a hash of its inputs and options; re-running
with nothing changed is a no-op.  Options may come from a TOML config file
(--config); explicit flags win.
"""

from __future__ import annotations

import csv
import hashlib
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import click
import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from fixscout import corpus as corpus_mod
from fixscout.analyzers import default_analyzers
from fixscout.analyzers.clsmetrics import METRIC_IDS, class_metrics
from fixscout.analyzers.lint import catalog as lint_catalog
from fixscout.corpus import (
    GitError,
    GitRepo,
    ManifestError,
    UnreachableCommit,
    load_manifest,
    repo_slug,
)
from fixscout.embedding import (
    EmbeddingMatrix,
    aggregate_commit,
    doubled_names,
    file_diff,
    prune_columns,
    read_matrix_csv,
    version_vectors,
    write_matrix_csv,
)
from fixscout.java.parser import parse_file
from fixscout.pipeline.metrics import evaluate
from fixscout.pipeline.train import (
    EMBEDDING_ORDER,
    TrainOptions,
    load_pipeline_artifact,
    save_pipeline_artifact,
    train_run,
    write_pr_curve_csv,
)
from fixscout.stats import DEFAULT_MAX_BINS, association_report
from fixscout.synth import SynthOptions, generate_corpus

EXIT_VALIDATION = 1
EXIT_RUNTIME = 2

KNOWN_CONFIG_KEYS = {
    "manifest", "clone_root", "out", "extensions", "analyzers", "jobs",
    "seed", "n_iter", "min_recall", "alpha", "max_bins", "prune_mode",
    "folds", "n", "signal", "files", "min_files", "max_files",
}


class ValidationFailure(click.ClickException):
    exit_code = EXIT_VALIDATION


def _fail_validation(message: str):
    raise ValidationFailure(message)


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    p = Path(path)
    if not p.exists():
        _fail_validation(f"config file not found: {p}")
    with open(p, "rb") as fh:
        data = tomllib.load(fh)
    unknown = set(data) - KNOWN_CONFIG_KEYS
    if unknown:
        _fail_validation(f"unknown config keys: {sorted(unknown)}")
    return data


def _resolve(flag_value, config: dict, key: str, default):
    if flag_value is not None:
        return flag_value
    if key in config:
        return config[key]
    return default


# --- stamps (idempotency guards) -----------------------------------------------


def _hash_file(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _stamp_path(out: Path, stage: str) -> Path:
    return out / f".{stage}.stamp.json"


def _stage_fingerprint(parts: dict) -> str:
    return hashlib.sha256(json.dumps(parts, sort_keys=True).encode()).hexdigest()


def _stamp_matches(out: Path, stage: str, fingerprint: str) -> bool:
    path = _stamp_path(out, stage)
    if not path.exists():
        return False
    try:
        return json.loads(path.read_text())["fingerprint"] == fingerprint
    except (json.JSONDecodeError, KeyError):
        return False


def _write_stamp(out: Path, stage: str, fingerprint: str) -> None:
    _stamp_path(out, stage).write_text(json.dumps({"stage": stage, "fingerprint": fingerprint}))


def _read_stamp(out: Path, stage: str) -> str:
    path = _stamp_path(out, stage)
    if not path.exists():
        _fail_validation(
            f"missing {stage} output under {out}; run `fixscout {stage}` first"
        )
    return json.loads(path.read_text())["fingerprint"]


# --- CLI group -------------------------------------------------------------------


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML config file; flags win.")
@click.pass_context
def main(ctx, config_path):
    """Represent git commits as static-analysis embeddings and learn to flag security fixes."""
    ctx.obj = _load_config(config_path)


def _common_out(config, out):
    out = Path(_resolve(out, config, "out", None) or _fail_validation("--out is required"))
    out.mkdir(parents=True, exist_ok=True)
    return out


@main.command()
@click.option("--manifest", type=click.Path(), default=None)
@click.option("--clone-root", type=click.Path(), default=None)
@click.pass_obj
def fetch(config, manifest, clone_root):
    """Clone every repository named in the manifest (system git client)."""
    manifest = _resolve(manifest, config, "manifest", None) or _fail_validation("--manifest is required")
    clone_root = Path(_resolve(clone_root, config, "clone_root", None) or _fail_validation("--clone-root is required"))
    try:
        records = load_manifest(manifest)
    except ManifestError as e:
        _fail_validation(str(e))
    failures = 0
    for url in sorted({r.repo_url for r in records}):
        dest = clone_root / repo_slug(url)
        if dest.exists():
            click.echo(f"exists   {url} -> {dest}")
            continue
        try:
            corpus_mod.fetch_clone(url, dest)
            click.echo(f"cloned   {url} -> {dest}")
        except GitError as e:
            failures += 1
            click.echo(f"FAILED   {url}: {e}", err=True)
    if failures:
        sys.exit(EXIT_RUNTIME)


def _ingest_one(args):
    repo_path, record_fields, extensions = args
    record = corpus_mod.CommitRecord(*record_fields)
    repo = GitRepo(repo_path)
    try:
        snap = corpus_mod.resolve_commit(repo, record, tuple(extensions))
    except UnreachableCommit:
        return record.sha, "unreachable", 0
    return record.sha, "ok", snap


@main.command()
@click.option("--manifest", type=click.Path(), default=None)
@click.option("--clone-root", type=click.Path(), default=None)
@click.option("--out", type=click.Path(), default=None)
@click.option("--extensions", default=None, help="Comma-separated source extensions (default .java).")
@click.option("--min-files", type=int, default=None)
@click.option("--max-files", type=int, default=None)
@click.option("--jobs", type=int, default=None)
@click.pass_obj
def ingest(config, manifest, clone_root, out, extensions, min_files, max_files, jobs):
    """Materialize before/after snapshots for every manifest commit."""
    out = _common_out(config, out)
    manifest = Path(_resolve(manifest, config, "manifest", out / "manifest.csv"))
    clone_root = Path(_resolve(clone_root, config, "clone_root", out / "repos"))
    extensions = tuple((_resolve(extensions, config, "extensions", ".java")).split(","))
    min_files = _resolve(min_files, config, "min_files", 1)
    max_files = _resolve(max_files, config, "max_files", 100)
    jobs = _resolve(jobs, config, "jobs", 1)
    try:
        records = load_manifest(manifest)
    except ManifestError as e:
        _fail_validation(str(e))

    fingerprint = _stage_fingerprint(
        {
            "stage": "ingest",
            "manifest": _hash_file(manifest),
            "extensions": list(extensions),
            "min_files": min_files,
            "max_files": max_files,
        }
    )
    if _stamp_matches(out, "ingest", fingerprint):
        click.echo("ingest: inputs unchanged, keeping existing cache")
        return

    cache = out / "cache"
    exclusions: list[tuple[str, str]] = []
    kept = 0
    work = []
    for record in records:
        repo_dir = clone_root / repo_slug(record.repo_url)
        if not repo_dir.exists():
            exclusions.append((record.sha, f"clone missing: {repo_dir}"))
            continue
        work.append((str(repo_dir), (record.repo_url, record.sha, record.label, record.test_fold, record.message), extensions))

    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_ingest_one, work))
    else:
        results = [_ingest_one(item) for item in work]

    for sha, status, snap in results:
        if status == "unreachable":
            exclusions.append((sha, "unreachable commit"))
            continue
        n_files = len(snap.files)
        if n_files < min_files:
            exclusions.append((sha, "no changed source files" if n_files == 0 else f"fewer than {min_files} files"))
            continue
        if n_files > max_files:
            exclusions.append((sha, f"more than {max_files} changed files"))
            continue
        corpus_mod.write_snapshot(cache, snap)
        kept += 1

    with open(out / "exclusions.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["sha", "reason"])
        writer.writerows(exclusions)
    _write_stamp(out, "ingest", fingerprint)
    click.echo(f"ingest: cached {kept} commits, excluded {len(exclusions)} (see exclusions.csv)")


@main.command()
@click.option("--out", type=click.Path(), default=None)
@click.option("--n", "n_commits", type=int, default=None)
@click.option("--signal", default=None, type=str)
@click.option("--seed", type=int, default=None)
@click.option("--files", "n_files", type=int, default=None)
@click.pass_obj
def synth(config, out, n_commits, signal, seed, n_files):
    """Generate a synthetic labeled corpus (repo + manifest + planted features)."""
    out = _common_out(config, out)
    options = SynthOptions(
        n_commits=_resolve(n_commits, config, "n", 200),
        signal=str(_resolve(signal, config, "signal", "high")),
        seed=_resolve(seed, config, "seed", 42),
        n_files=_resolve(n_files, config, "files", 10),
    )
    fingerprint = _stage_fingerprint({"stage": "synth", "options": vars(options)})
    if _stamp_matches(out, "synth", fingerprint) and (out / "manifest.csv").exists():
        click.echo("synth: same options, keeping existing corpus")
        return
    repo_dir = out / "repos" / corpus_mod.repo_slug("synth-corpus")
    if repo_dir.exists():
        _fail_validation(f"{repo_dir} already exists; delete it or choose another --out")
    summary = generate_corpus(out, options)
    _write_stamp(out, "synth", fingerprint)
    click.echo(f"synth: {summary['commits']} commits ({summary['positives']} positive) in {summary['repo']}")


def _embed_one(args):
    cache_root, record_fields = args
    record = corpus_mod.CommitRecord(*record_fields)
    snap = corpus_mod.read_snapshot(Path(cache_root), record)
    analyzers = default_analyzers()
    row = {}
    for analyzer in analyzers:
        diffs = [file_diff(*version_vectors(pair, analyzer)) for pair in snap.files]
        row[analyzer.analyzer_id] = aggregate_commit(diffs, analyzer.feature_names).values.tolist()
    return record.sha, row


@main.command()
@click.option("--out", type=click.Path(), default=None)
@click.option("--manifest", type=click.Path(), default=None)
@click.option("--analyzers", "analyzer_filter", default=None, help="Comma-separated analyzer ids (default all four).")
@click.option("--prune-mode", type=click.Choice(["full", "per_fold"]), default=None)
@click.option("--jobs", type=int, default=None)
@click.pass_obj
def embed(config, out, manifest, analyzer_filter, prune_mode, jobs):
    """Turn cached snapshots into the four commit-embedding CSVs."""
    out = _common_out(config, out)
    manifest = Path(_resolve(manifest, config, "manifest", out / "manifest.csv"))
    prune_mode = _resolve(prune_mode, config, "prune_mode", "full")
    jobs = _resolve(jobs, config, "jobs", 1)
    wanted = _resolve(analyzer_filter, config, "analyzers", None)
    ingest_stamp = _read_stamp(out, "ingest")
    try:
        records = load_manifest(manifest)
    except ManifestError as e:
        _fail_validation(str(e))

    analyzers = default_analyzers()
    if wanted:
        keep = set(str(wanted).split(","))
        analyzers = [a for a in analyzers if a.analyzer_id in keep]
        if not analyzers:
            _fail_validation(f"no analyzer matches {wanted!r}")

    fingerprint = _stage_fingerprint(
        {
            "stage": "embed",
            "upstream": ingest_stamp,
            "manifest": _hash_file(manifest),
            "analyzers": [a.analyzer_id for a in analyzers],
            "prune_mode": prune_mode,
        }
    )
    if _stamp_matches(out, "embed", fingerprint):
        click.echo("embed: inputs unchanged, keeping existing embeddings")
        return

    cache = out / "cache"
    cached = [r for r in records if corpus_mod.has_snapshot(cache, r)]
    skipped = len(records) - len(cached)
    matrices = {
        a.analyzer_id: EmbeddingMatrix(a.analyzer_id, list(doubled_names(a.feature_names))) for a in analyzers
    }
    work = [(str(cache), (r.repo_url, r.sha, r.label, r.test_fold, r.message)) for r in cached]
    if jobs and jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_embed_one, work, chunksize=8))
    else:
        results = [_embed_one(item) for item in work]
    for record, (sha, row) in zip(cached, results):
        for analyzer_id, values in row.items():
            if analyzer_id in matrices:
                matrices[analyzer_id].rows[sha] = np.asarray(values, dtype=float)
                matrices[analyzer_id].provenance[sha] = (record.label, record.test_fold)

    emb_dir = out / "embeddings"
    for analyzer_id, matrix in matrices.items():
        if prune_mode == "full":
            matrix = prune_columns(matrix)
            if not matrix.feature_names:
                click.echo(f"embed: {analyzer_id} pruned to zero columns", err=True)
        write_matrix_csv(matrix, emb_dir / f"{analyzer_id}.csv")
    _write_stamp(out, "embed", fingerprint)
    click.echo(
        f"embed: wrote {len(matrices)} embeddings over {len(cached)} commits"
        + (f" ({skipped} without snapshots skipped)" if skipped else "")
    )


@main.command()
@click.option("--out", type=click.Path(), default=None)
@click.option("--alpha", type=float, default=None)
@click.option("--max-bins", "max_bins", type=int, default=None, help="Override the per-analyzer default bin caps.")
@click.pass_obj
def stats(config, out, alpha, max_bins):
    """Chi-square screen of every embedding feature against the label."""
    out = _common_out(config, out)
    alpha = _resolve(alpha, config, "alpha", 0.05)
    max_bins = _resolve(max_bins, config, "max_bins", None)
    embed_stamp = _read_stamp(out, "embed")
    fingerprint = _stage_fingerprint(
        {"stage": "stats", "upstream": embed_stamp, "alpha": alpha, "max_bins": max_bins}
    )
    if _stamp_matches(out, "stats", fingerprint):
        click.echo("stats: inputs unchanged, keeping existing reports")
        return
    emb_dir = out / "embeddings"
    stats_dir = out / "stats"
    stats_dir.mkdir(parents=True, exist_ok=True)
    summary_rows = []
    for path in sorted(emb_dir.glob("*.csv")):
        analyzer_id = path.stem
        matrix = read_matrix_csv(path, analyzer_id)
        bins = max_bins if max_bins is not None else DEFAULT_MAX_BINS.get(analyzer_id, 4)
        report = association_report(matrix, max_bins=bins, alpha=alpha)
        with open(stats_dir / f"{analyzer_id}_associations.csv", "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["feature", "chi2", "p", "dof", "significant", "cramers_v", "strength"])
            for e in report.entries:
                writer.writerow(
                    [
                        e.feature,
                        repr(e.chi2),
                        repr(e.p_value),
                        e.dof,
                        int(e.significant),
                        "" if e.cramers_v is None else repr(e.cramers_v),
                        e.strength or "",
                    ]
                )
            for feature, reason in report.skipped:
                writer.writerow([feature, "", "", "", "", "", f"skipped: {reason}"])
        summary = report.strength_summary()
        summary["analyzer"] = analyzer_id
        summary["features"] = len(report.entries)
        summary["significant"] = len(report.significant_features())
        summary_rows.append(summary)
    with open(stats_dir / "summary.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["analyzer", "features", "significant", "none", "low", "moderate", "high"])
        for row in summary_rows:
            writer.writerow(
                [row["analyzer"], row["features"], row["significant"], row["none"], row["low"], row["moderate"], row["high"]]
            )
    _write_stamp(out, "stats", fingerprint)
    click.echo(f"stats: screened {len(summary_rows)} embeddings")


@main.command()
@click.option("--out", type=click.Path(), default=None)
@click.option("--seed", type=int, default=None)
@click.option("--n-iter", type=int, default=None)
@click.option("--min-recall", type=float, default=None)
@click.option("--folds", type=click.Choice(["manifest", "generate"]), default=None)
@click.option("--prune-per-fold", is_flag=True, default=False)
@click.pass_obj
def train(config, out, seed, n_iter, min_recall, folds, prune_per_fold):
    """Randomized search per embedding, then voting/stacking grids; writes the run report."""
    out = _common_out(config, out)
    embed_stamp = _read_stamp(out, "embed")
    options = TrainOptions(
        seed=_resolve(seed, config, "seed", 0),
        n_iter=_resolve(n_iter, config, "n_iter", 200),
        min_recall=_resolve(min_recall, config, "min_recall", 0.3),
        use_manifest_folds=_resolve(folds, config, "folds", "manifest") == "manifest",
        prune_per_fold=prune_per_fold,
    )
    fingerprint = _stage_fingerprint(
        {
            "stage": "train",
            "upstream": embed_stamp,
            "seed": options.seed,
            "n_iter": options.n_iter,
            "min_recall": options.min_recall,
            "use_manifest_folds": options.use_manifest_folds,
            "prune_per_fold": options.prune_per_fold,
        }
    )
    if _stamp_matches(out, "train", fingerprint):
        click.echo("train: inputs unchanged, keeping existing run report")
        return
    emb_dir = out / "embeddings"
    paths = sorted(emb_dir.glob("*.csv"))
    if not paths:
        _fail_validation(f"no embeddings under {emb_dir}; run `fixscout embed` first")
    matrices = {p.stem: read_matrix_csv(p, p.stem) for p in paths}
    report, artifacts = train_run(matrices, options)

    train_dir = out / "train"
    train_dir.mkdir(parents=True, exist_ok=True)
    (train_dir / "run_report.json").write_text(json.dumps(report, indent=1), encoding="utf-8")
    models_dir = train_dir / "models"
    for analyzer_id, entry in artifacts.full_models.items():
        save_pipeline_artifact(entry, analyzer_id, models_dir / f"{analyzer_id}.json")
    ensembles = {
        "voting": {
            "weights": list(artifacts.voting.weights),
            "order": [a for a in EMBEDDING_ORDER if a in matrices] + [a for a in matrices if a not in EMBEDDING_ORDER],
            "threshold": artifacts.voting.outcome.threshold,
        },
        "stacking": {
            "final_estimator": artifacts.stacking.final_spec.algorithm,
            "hyperparameters": artifacts.stacking.final_spec.hyperparameters,
            "threshold": artifacts.stacking.outcome.threshold,
        },
    }
    (models_dir / "ensembles.json").write_text(json.dumps(ensembles, indent=1), encoding="utf-8")
    curves_dir = train_dir / "pr_curves"
    for analyzer_id, emb in report["embeddings"].items():
        write_pr_curve_csv(emb["pr_curve"], curves_dir / f"{analyzer_id}.csv")
    for kind in ("voting", "stacking"):
        write_pr_curve_csv(report["ensembles"][kind]["pr_curve"], curves_dir / f"{kind}.csv")
    _write_stamp(out, "train", fingerprint)
    winner = report["ensembles"]["winner"]
    cv = report["ensembles"][winner]["cv"]["mean"]
    click.echo(
        f"train: winner={winner} precision={cv['precision']:.3f} recall={cv['recall']:.3f} "
        f"(report: {train_dir / 'run_report.json'})"
    )


@main.command("evaluate")
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def evaluate_cmd(config, out):
    """Re-score the saved per-embedding models on their embeddings and print metrics."""
    out = _common_out(config, out)
    _read_stamp(out, "train")
    report = json.loads((out / "train" / "run_report.json").read_text(encoding="utf-8"))
    click.echo(f"{'embedding':<12} {'algorithm':<20} {'precision':>9} {'recall':>7} {'f1':>7} {'accuracy':>8}")
    for analyzer_id, emb in report["embeddings"].items():
        artifact = load_pipeline_artifact(out / "train" / "models" / f"{analyzer_id}.json")
        matrix = read_matrix_csv(out / "embeddings" / f"{analyzer_id}.csv", analyzer_id)
        X = matrix.matrix()[:, artifact["mask"]]
        probs = artifact["model"].predict_proba(artifact["scaler"].transform(X))
        threshold = emb["cv"]["chosen_threshold"]
        precision, recall, f1, accuracy = evaluate(matrix.labels(), (probs >= threshold).astype(int))
        click.echo(
            f"{analyzer_id:<12} {artifact['config']['algorithm']:<20} "
            f"{precision:>9.3f} {recall:>7.3f} {f1:>7.3f} {accuracy:>8.3f}"
        )
    click.echo("(full-data refit scored in-sample; see run_report.json for the honest CV numbers)")


@main.command()
@click.option("--out", type=click.Path(), default=None)
@click.pass_obj
def report(config, out):
    """Write the human-readable summary and PR-curve CSVs."""
    out = _common_out(config, out)
    _read_stamp(out, "train")
    run = json.loads((out / "train" / "run_report.json").read_text(encoding="utf-8"))
    report_dir = out / "report"
    report_dir.mkdir(parents=True, exist_ok=True)
    lines = ["fixscout run summary", "=" * 60, ""]
    lines.append(f"rows: {run['data']['rows']}  positives: {run['data']['positives']}")
    lines.append(f"options: {json.dumps(run['options'])}")
    lines.append("")
    lines.append("per-embedding best models (stratified 5-fold CV, mean +/- std)")
    lines.append("-" * 60)
    for analyzer_id, emb in run["embeddings"].items():
        mean, std = emb["cv"]["mean"], emb["cv"]["std"]
        best = emb["best"]
        lines.append(
            f"{analyzer_id:<12} {best['algorithm']:<20}"
            f" P={mean['precision']:.3f}+/-{std['precision']:.3f}"
            f" R={mean['recall']:.3f}+/-{std['recall']:.3f}"
            f" F1={mean['f1']:.3f} acc={mean['accuracy']:.3f}"
        )
    lines.append("")
    lines.append("ensembles")
    lines.append("-" * 60)
    for kind in ("voting", "stacking"):
        mean, std = run["ensembles"][kind]["cv"]["mean"], run["ensembles"][kind]["cv"]["std"]
        extra = (
            f"members={run['ensembles'][kind]['best']['included']}"
            if kind == "voting"
            else f"final={run['ensembles'][kind]['best']['final_estimator']}"
        )
        lines.append(
            f"{kind:<12} P={mean['precision']:.3f}+/-{std['precision']:.3f}"
            f" R={mean['recall']:.3f}+/-{std['recall']:.3f} {extra}"
        )
    lines.append(f"winner: {run['ensembles']['winner']}")
    lines.append("")
    lines.append("voting grid evaluated combinations: " + str(run["ensembles"]["voting"]["grid_size"]))
    lines.append(
        "stacking final estimators evaluated: " + str(run["ensembles"]["stacking"]["final_estimators"])
    )
    (report_dir / "summary.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")
    for analyzer_id, emb in run["embeddings"].items():
        write_pr_curve_csv(emb["pr_curve"], report_dir / f"pr_{analyzer_id}.csv")
    for kind in ("voting", "stacking"):
        write_pr_curve_csv(run["ensembles"][kind]["pr_curve"], report_dir / f"pr_{kind}.csv")
    click.echo((report_dir / "summary.txt").read_text(encoding="utf-8"))


@main.group()
def rules():
    """Lint rule catalog utilities."""


@rules.command("list")
@click.option("--catalog", "config_name", type=click.Choice(["strict", "style"]), default="strict")
def rules_list(config_name):
    """Emit the rule catalog as CSV (id, category, threshold, description)."""
    writer = csv.writer(sys.stdout)
    writer.writerow(["id", "category", "threshold", "description"])
    for rule in lint_catalog(config_name):
        writer.writerow([rule.id, rule.category, rule.threshold if rule.threshold is not None else "", rule.description])


@main.group()
def metrics():
    """Class-metrics utilities."""


@metrics.command("dump")
@click.argument("sources", nargs=-1, type=click.Path(exists=True))
def metrics_dump(sources):
    """Emit class-level metric rows for Java files as CSV."""
    if not sources:
        _fail_validation("give at least one source file")
    writer = csv.writer(sys.stdout)
    writer.writerow(["file", "class", "type", *METRIC_IDS])
    for source in sources:
        text = Path(source).read_text(encoding="utf-8", errors="replace")
        ast = parse_file(text)
        if not hasattr(ast, "walk"):
            click.echo(f"{source}: {ast}", err=True)
            continue
        for row in class_metrics(ast, file=str(source)):
            writer.writerow([row.file, row.class_name, row.class_type, *(row.metrics[m] for m in METRIC_IDS)])


def entrypoint():  # pragma: no cover - console script shim
    try:
        main(standalone_mode=True)
    except Exception as e:  # noqa: BLE001 - the CLI boundary maps crashes to exit 2
        click.echo(f"error: {e}", err=True)
        sys.exit(EXIT_RUNTIME)


if __name__ == "__main__":
    entrypoint()

"""Case-study orchestration: per-domain fine-tune, generation, dedup, novelty.

Each domain run leaves a manifest sufficient to re-execute it bit-
identically. The near-vs-far novelty hypothesis is decided with a
two-sided rank-sum test (normal approximation without continuity
correction, tie-corrected variance).
"""

from __future__ import annotations

import csv
import logging
import math
import shutil
import statistics
from dataclasses import dataclass
from datetime import datetime, timezone
from enum import Enum
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .config import BackendSpec, CorpusSpec, KeywordSpec, StudyConfig, StudyDomain
from .corpus import (
    ProximityTable,
    compute_proximity,
    corpus_sha256,
    domains_from_records,
    filter_titles,
    ingest_corpus,
    rank_domains,
    select_latest,
)
from .dataset import build_pairs, serialize_dataset
from .errors import DataError
from .ideas import IdeaRecord, IdeaSetStats, dedup_stats, generate_ideas, read_ideas_jsonl, write_ideas_jsonl
from .keywords import HashEmbeddingBackend, extract_keywords_cached, load_stopwords
from .lm.backends import CharMLPBackend
from .lm.config import FineTuneConfig, GenerationConfig
from .lm.training import finetune
from .novelty import (
    NoveltyReport,
    TermVectorStore,
    idea_novelty,
    load_term_vectors,
    min_scores_from_rows,
    read_novelty_csv,
    summarize,
    write_novelty_csv,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Rank-sum hypothesis machinery


class Direction(str, Enum):
    FAR_LOWER = "far_lower"
    NEAR_LOWER = "near_lower"
    INDISTINCT = "indistinct"


@dataclass(frozen=True)
class FieldComparison:
    near_scores: tuple[float, ...]
    far_scores: tuple[float, ...]
    median_near: float
    median_far: float
    rank_sum_statistic: float
    p_value: float
    direction: Direction
    alpha: float


def _fractional_ranks(values: Sequence[float]) -> list[float]:
    order = sorted(range(len(values)), key=values.__getitem__)
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def _normal_sf(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2.0))


def rank_sum_u(x: Sequence[float], y: Sequence[float]) -> float:
    """U statistic for sample x: rank sum of x minus its minimum possible value.

    Equals the count of (x_i, y_j) pairs with x_i > y_j, ties counting 1/2.
    """
    ranks = _fractional_ranks(list(x) + list(y))
    r1 = sum(ranks[: len(x)])
    return r1 - len(x) * (len(x) + 1) / 2.0


def rank_sum_test(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Two-sided rank-sum p-value via the normal approximation.

    No continuity correction; variance is tie-corrected. Degenerate samples
    (zero variance, e.g. identical lists) report p = 1.
    """
    n1, n2 = len(x), len(y)
    u = rank_sum_u(x, y)
    combined = sorted(list(x) + list(y))
    n = n1 + n2
    tie_sum = 0
    i = 0
    while i < n:
        j = i
        while j + 1 < n and combined[j + 1] == combined[i]:
            j += 1
        t = j - i + 1
        tie_sum += t * t * t - t
        i = j + 1
    tie_factor = 1.0 - tie_sum / (n * n * n - n) if n > 1 else 0.0
    variance = tie_factor * n1 * n2 * (n + 1) / 12.0
    if variance <= 0.0:
        return u, 1.0
    z = (u - n1 * n2 / 2.0) / math.sqrt(variance)
    return u, min(1.0, 2.0 * _normal_sf(abs(z)))


def compare_fields(
    near_scores: Sequence[float],
    far_scores: Sequence[float],
    alpha: float = 0.05,
) -> FieldComparison:
    """Decide whether far-field minimum relevancy scores sit lower than near-field."""
    if len(near_scores) < 3 or len(far_scores) < 3:
        raise DataError("insufficient sample: need at least 3 scores per side")
    u, p = rank_sum_test(list(near_scores), list(far_scores))
    median_near = statistics.median(near_scores)
    median_far = statistics.median(far_scores)
    if p < alpha and median_far < median_near:
        direction = Direction.FAR_LOWER
    elif p < alpha and median_near < median_far:
        direction = Direction.NEAR_LOWER
    else:
        direction = Direction.INDISTINCT
    return FieldComparison(
        near_scores=tuple(near_scores),
        far_scores=tuple(far_scores),
        median_near=median_near,
        median_far=median_far,
        rank_sum_statistic=u,
        p_value=p,
        direction=direction,
        alpha=alpha,
    )


# ---------------------------------------------------------------------------
# Run manifests


@dataclass(frozen=True)
class RunManifest:
    """Everything needed to re-execute one domain run bit-identically.

    Artifact paths under the runs directory are stored relative to it so a
    replay into a fresh directory produces byte-identical files.
    """

    run_id: str
    target_keyword: str
    domain_id: str
    display_name: str
    corpus_path: str
    corpus_hash: str
    term_vectors: str
    dataset_path: str
    dataset_shuffle_seed: int
    checkpoint: str
    checkpoint_step: int
    ideas_path: str
    novelty_path: str
    loss_path: str
    stats: IdeaSetStats
    created_at: str
    tool_version: str
    corpus_spec: CorpusSpec
    keywords_spec: KeywordSpec
    finetune_config: FineTuneConfig
    generation_config: GenerationConfig
    backend_spec: BackendSpec
    rank: int | None = None
    proximity: float | None = None


def write_run_manifest(path: str | Path, manifest: RunManifest, runs_dir: str | Path) -> None:
    runs_dir = Path(runs_dir)
    for rel in (manifest.dataset_path, manifest.checkpoint, manifest.ideas_path,
                manifest.novelty_path, manifest.loss_path):
        if not (runs_dir / rel).exists():
            raise DataError(f"manifest references missing artifact: {rel}")
    if not Path(manifest.corpus_path).exists():
        raise DataError(f"manifest references missing corpus: {manifest.corpus_path}")

    kw = manifest.keywords_spec
    ft = manifest.finetune_config
    gen = manifest.generation_config
    be = manifest.backend_spec
    pairs: list[tuple[str, object]] = [
        ("run_id", manifest.run_id),
        ("target_keyword", manifest.target_keyword),
        ("domain_id", manifest.domain_id),
        ("display_name", manifest.display_name),
        ("corpus_path", manifest.corpus_path),
        ("corpus_hash", manifest.corpus_hash),
        ("term_vectors", manifest.term_vectors),
        ("dataset_path", manifest.dataset_path),
        ("dataset_shuffle_seed", manifest.dataset_shuffle_seed),
        ("checkpoint", manifest.checkpoint),
        ("checkpoint_step", manifest.checkpoint_step),
        ("ideas_path", manifest.ideas_path),
        ("novelty_path", manifest.novelty_path),
        ("loss_path", manifest.loss_path),
        ("rank", "" if manifest.rank is None else manifest.rank),
        ("proximity", "" if manifest.proximity is None else repr(manifest.proximity)),
        ("stats.n_generated", manifest.stats.n_generated),
        ("stats.n_unique", manifest.stats.n_unique),
        ("stats.pct_unique", repr(manifest.stats.pct_unique)),
        ("created_at", manifest.created_at),
        ("tool_version", manifest.tool_version),
        ("corpus.min_title_words", manifest.corpus_spec.min_title_words),
        ("corpus.latest_n", manifest.corpus_spec.latest_n),
        ("keywords.ngram_min", kw.ngram_min),
        ("keywords.ngram_max", kw.ngram_max),
        ("keywords.stopwords", str(kw.stopwords_path) if kw.stopwords_path else ""),
        ("keywords.embed_dim", kw.embed_dim),
        ("keywords.embed_seed", kw.embed_seed),
        ("finetune.steps", ft.steps),
        ("finetune.batch_size", ft.batch_size),
        ("finetune.learning_rate", repr(ft.learning_rate)),
        ("finetune.log_every", ft.log_every),
        ("finetune.checkpoint_every", ft.checkpoint_every),
        ("finetune.seed", ft.seed),
        ("generation.temperature", repr(gen.temperature)),
        ("generation.top_k", gen.top_k),
        ("generation.max_new_tokens", gen.max_new_tokens),
        ("generation.n_samples", gen.n_samples),
        ("generation.seed", gen.seed),
        ("backend.kind", be.kind),
        ("backend.context_window", be.context_window),
        ("backend.embed_dim", be.embed_dim),
        ("backend.hidden_dim", be.hidden_dim),
        ("backend.seed", be.seed),
    ]
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text("".join(f"{k} = {v}\n" for k, v in pairs), encoding="utf-8")


def read_run_manifest(path: str | Path) -> RunManifest:
    values: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, sep, value = line.partition(" = ")
        if not sep:
            raise DataError(f"{path}: bad manifest line {line!r}")
        values[key] = value
    try:
        stats = IdeaSetStats(
            n_generated=int(values["stats.n_generated"]),
            n_unique=int(values["stats.n_unique"]),
            pct_unique=float(values["stats.pct_unique"]),
        )
        stopwords = values["keywords.stopwords"]
        return RunManifest(
            run_id=values["run_id"],
            target_keyword=values["target_keyword"],
            domain_id=values["domain_id"],
            display_name=values["display_name"],
            corpus_path=values["corpus_path"],
            corpus_hash=values["corpus_hash"],
            term_vectors=values["term_vectors"],
            dataset_path=values["dataset_path"],
            dataset_shuffle_seed=int(values["dataset_shuffle_seed"]),
            checkpoint=values["checkpoint"],
            checkpoint_step=int(values["checkpoint_step"]),
            ideas_path=values["ideas_path"],
            novelty_path=values["novelty_path"],
            loss_path=values["loss_path"],
            rank=int(values["rank"]) if values.get("rank") else None,
            proximity=float(values["proximity"]) if values.get("proximity") else None,
            stats=stats,
            created_at=values["created_at"],
            tool_version=values["tool_version"],
            corpus_spec=CorpusSpec(
                min_title_words=int(values["corpus.min_title_words"]),
                latest_n=int(values["corpus.latest_n"]),
            ),
            keywords_spec=KeywordSpec(
                ngram_min=int(values["keywords.ngram_min"]),
                ngram_max=int(values["keywords.ngram_max"]),
                stopwords_path=Path(stopwords) if stopwords else None,
                embed_dim=int(values["keywords.embed_dim"]),
                embed_seed=int(values["keywords.embed_seed"]),
            ),
            finetune_config=FineTuneConfig(
                steps=int(values["finetune.steps"]),
                batch_size=int(values["finetune.batch_size"]),
                learning_rate=float(values["finetune.learning_rate"]),
                log_every=int(values["finetune.log_every"]),
                checkpoint_every=int(values["finetune.checkpoint_every"]),
                seed=int(values["finetune.seed"]),
            ),
            generation_config=GenerationConfig(
                temperature=float(values["generation.temperature"]),
                top_k=int(values["generation.top_k"]),
                max_new_tokens=int(values["generation.max_new_tokens"]),
                n_samples=int(values["generation.n_samples"]),
                seed=int(values["generation.seed"]),
            ),
            backend_spec=BackendSpec(
                kind=values["backend.kind"],
                context_window=int(values["backend.context_window"]),
                embed_dim=int(values["backend.embed_dim"]),
                hidden_dim=int(values["backend.hidden_dim"]),
                seed=int(values["backend.seed"]),
            ),
        )
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: bad run manifest: {exc}") from exc


# ---------------------------------------------------------------------------
# Study pipeline


@dataclass(frozen=True)
class TableRow:
    domain_id: str
    display_name: str
    rank: int | None
    proximity: float | None
    stats: IdeaSetStats
    examples: tuple[str, ...]


@dataclass(frozen=True)
class StudyResult:
    manifests: tuple[RunManifest, ...]
    table: tuple[TableRow, ...]
    failures: tuple[tuple[str, str], ...]
    comparison: FieldComparison | None = None


def _slug(text: str) -> str:
    return "".join(c if c.isalnum() else "-" for c in text.lower()).strip("-") or "kw"


def run_id_for(domain_id: str, target_keyword: str, generation_seed: int) -> str:
    return f"{domain_id}--{_slug(target_keyword)}--s{generation_seed}"


def _make_backend(spec: BackendSpec) -> CharMLPBackend:
    if spec.kind != "char-mlp":
        raise DataError(f"unknown backend kind {spec.kind!r}")
    return CharMLPBackend(
        context_window=spec.context_window,
        embed_dim=spec.embed_dim,
        hidden_dim=spec.hidden_dim,
        seed=spec.seed,
    )


def _run_domain(
    domain: StudyDomain,
    target_keyword: str,
    runs_dir: Path,
    store: TermVectorStore,
    term_vectors_path: str,
    corpus_spec: CorpusSpec,
    keywords_spec: KeywordSpec,
    finetune_config: FineTuneConfig,
    generation_config: GenerationConfig,
    backend_spec: BackendSpec,
    dataset_shuffle_seed: int,
    rank: int | None = None,
    proximity: float | None = None,
) -> tuple[RunManifest, list[IdeaRecord], list[NoveltyReport | None]]:
    records = ingest_corpus(domain.corpus_path, domain.domain_id)
    kept = filter_titles(records, corpus_spec.min_title_words)
    latest = select_latest(kept, corpus_spec.latest_n)
    if not latest:
        raise DataError(f"domain {domain.domain_id}: no records left after filtering")

    stopwords = (
        load_stopwords(keywords_spec.stopwords_path)
        if keywords_spec.stopwords_path
        else frozenset()
    )
    embedder = HashEmbeddingBackend(keywords_spec.embed_dim, keywords_spec.embed_seed)
    cache_path = runs_dir / "cache" / f"{domain.domain_id}-keywords.tsv"
    cache_path.parent.mkdir(parents=True, exist_ok=True)
    keyword_map = extract_keywords_cached(
        ((r.patent_id, r.title) for r in latest),
        embedder,
        cache_path=cache_path,
        ngram_min=keywords_spec.ngram_min,
        ngram_max=keywords_spec.ngram_max,
        stopwords=stopwords,
    )
    by_title = {r.title: keyword_map[r.patent_id] for r in latest if r.patent_id in keyword_map}

    def keyword_fn(title: str) -> str:
        if title not in by_title:
            raise DataError("no candidates")
        return by_title[title]

    pairs, skipped = build_pairs(latest, keyword_fn)
    if skipped:
        logger.warning("domain %s: skipped %d titles without keywords", domain.domain_id, skipped)
    if not pairs:
        raise DataError(f"domain {domain.domain_id}: no keyword-title pairs")

    dataset_path = runs_dir / "datasets" / f"{domain.domain_id}.txt"
    corpus_hash = corpus_sha256(domain.corpus_path)
    serialize_dataset(
        pairs,
        dataset_path,
        shuffle_seed=dataset_shuffle_seed,
        domain_id=domain.domain_id,
        source_corpus_hash=corpus_hash,
    )

    model = _make_backend(backend_spec)
    checkpoint, trace = finetune(
        model, dataset_path, finetune_config, runs_dir / "checkpoints" / domain.domain_id
    )

    run_id = run_id_for(domain.domain_id, target_keyword, generation_config.seed)
    run_dir = runs_dir / run_id
    run_dir.mkdir(parents=True, exist_ok=True)
    loss_path = run_dir / "loss.csv"
    trace.save_csv(loss_path)

    checkpoint_rel = checkpoint.path.relative_to(runs_dir).as_posix()
    ideas = generate_ideas(
        model, target_keyword, domain.domain_id, checkpoint_rel, generation_config
    )
    unique, stats = dedup_stats(ideas)
    ideas_path = run_dir / "ideas.jsonl"
    write_ideas_jsonl(ideas_path, ideas)

    reports = [idea_novelty(idea, store) for idea in ideas]
    novelty_path = run_dir / "novelty.csv"
    write_novelty_csv(novelty_path, run_id, ideas, reports)

    manifest = RunManifest(
        run_id=run_id,
        target_keyword=target_keyword,
        domain_id=domain.domain_id,
        display_name=domain.display_name,
        corpus_path=str(domain.corpus_path),
        corpus_hash=corpus_hash,
        term_vectors=term_vectors_path,
        dataset_path=dataset_path.relative_to(runs_dir).as_posix(),
        dataset_shuffle_seed=dataset_shuffle_seed,
        checkpoint=checkpoint_rel,
        checkpoint_step=checkpoint.step,
        ideas_path=ideas_path.relative_to(runs_dir).as_posix(),
        novelty_path=novelty_path.relative_to(runs_dir).as_posix(),
        loss_path=loss_path.relative_to(runs_dir).as_posix(),
        stats=stats,
        created_at=datetime.now(timezone.utc).isoformat(),
        tool_version=__version__,
        corpus_spec=corpus_spec,
        keywords_spec=keywords_spec,
        finetune_config=finetune_config,
        generation_config=generation_config,
        backend_spec=backend_spec,
        rank=rank,
        proximity=proximity,
    )
    write_run_manifest(run_dir / "manifest.txt", manifest, runs_dir)
    return manifest, ideas, reports


def _resolve_ranks(config: StudyConfig) -> dict[str, tuple[int, float]]:
    """Rank each study domain against the target domain, when rankable.

    A loaded proximity table wins; otherwise proximity is computed from the
    study corpora (meaningful only if the target domain is among them).
    """
    if config.target_domain is None:
        return {}
    table: ProximityTable | None = None
    if config.proximity_table is not None:
        table = ProximityTable.load(config.proximity_table)
    else:
        try:
            all_records = []
            for domain in config.domains:
                all_records.extend(ingest_corpus(domain.corpus_path, domain.domain_id))
        except DataError:
            return {}
        derived = domains_from_records(all_records)
        if len(derived) >= 2 and config.target_domain in {d.domain_id for d in derived}:
            table = compute_proximity(all_records, derived)
    if table is None or config.target_domain not in table.domain_ids:
        return {}
    try:
        ranked = rank_domains(table, config.target_domain)
    except DataError:
        return {}
    return {r.domain_id: (r.rank, r.proximity) for r in ranked}


def run_case_study(config: StudyConfig) -> StudyResult:
    """Execute the full per-domain pipeline for every study domain.

    A failing domain is reported and skipped; the others continue.
    """
    store = load_term_vectors(config.term_vectors)
    runs_dir = config.runs_dir
    runs_dir.mkdir(parents=True, exist_ok=True)
    ranks = _resolve_ranks(config)

    manifests: list[RunManifest] = []
    rows: list[TableRow] = []
    failures: list[tuple[str, str]] = []
    scores_by_domain: dict[str, list[float]] = {}
    for domain in config.domains:
        rank, proximity = ranks.get(domain.domain_id, (None, None))
        try:
            manifest, ideas, reports = _run_domain(
                domain,
                config.target_keyword,
                runs_dir,
                store,
                str(config.term_vectors),
                config.corpus,
                config.keywords,
                config.finetune,
                config.generation,
                config.backend,
                dataset_shuffle_seed=config.seed,
                rank=rank,
                proximity=proximity,
            )
        except Exception as exc:
            logger.error("domain %s failed: %s", domain.domain_id, exc)
            failures.append((domain.domain_id, str(exc)))
            continue
        unique, _ = dedup_stats(ideas)
        examples = tuple(idea.text for idea in unique if idea.text)[:4]
        rows.append(
            TableRow(
                domain_id=domain.domain_id,
                display_name=domain.display_name,
                rank=rank,
                proximity=proximity,
                stats=manifest.stats,
                examples=examples,
            )
        )
        manifests.append(manifest)
        scores_by_domain[domain.domain_id] = [
            r.min_score for r in reports if r is not None
        ]

    comparison = _maybe_compare(config, scores_by_domain)
    return StudyResult(
        manifests=tuple(manifests),
        table=tuple(rows),
        failures=tuple(failures),
        comparison=comparison,
    )


def _maybe_compare(
    config: StudyConfig, scores_by_domain: Mapping[str, Sequence[float]]
) -> FieldComparison | None:
    near = config.near_domains
    far = config.far_domains
    if not near or not far:
        return None
    near_scores = [s for d in near for s in scores_by_domain.get(d, [])]
    far_scores = [s for d in far for s in scores_by_domain.get(d, [])]
    try:
        return compare_fields(near_scores, far_scores)
    except DataError as exc:
        logger.warning("near/far comparison skipped: %s", exc)
        return None


def replay_run(manifest: RunManifest, runs_dir: str | Path) -> RunManifest:
    """Re-execute a run from its manifest into the given runs directory.

    With the same source corpus and term vectors, the replay writes byte-
    identical dataset, ideas, loss and novelty artifacts.
    """
    domain = StudyDomain(
        domain_id=manifest.domain_id,
        display_name=manifest.display_name,
        corpus_path=Path(manifest.corpus_path),
    )
    store = load_term_vectors(manifest.term_vectors)
    new_manifest, _, _ = _run_domain(
        domain,
        manifest.target_keyword,
        Path(runs_dir),
        store,
        manifest.term_vectors,
        manifest.corpus_spec,
        manifest.keywords_spec,
        manifest.finetune_config,
        manifest.generation_config,
        manifest.backend_spec,
        dataset_shuffle_seed=manifest.dataset_shuffle_seed,
        rank=manifest.rank,
        proximity=manifest.proximity,
    )
    return new_manifest


# ---------------------------------------------------------------------------
# Report export


def _format_proximity(value: float | None) -> str:
    return "" if value is None else f"{value:.4f}"


def export_report(
    manifests: Sequence[RunManifest],
    comparisons: Sequence[FieldComparison],
    out_dir: str | Path,
    runs_dir: str | Path,
    histogram_bins: int = 10,
) -> list[Path]:
    """Write the domain table (CSV + text), per-domain novelty/loss copies,
    histogram data and any hypothesis comparisons. Returns written paths."""
    if not manifests:
        raise ValueError("export_report needs at least one manifest")
    out_dir = Path(out_dir)
    runs_dir = Path(runs_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    header = ["domain_id", "display_name", "rank", "proximity", "n_generated", "n_unique",
              "pct_unique", "example_ideas"]
    csv_rows: list[list[str]] = [header]
    stores = sorted({m.term_vectors for m in manifests})
    text_lines = [
        f"target keyword: {manifests[0].target_keyword}",
        # relevancy scores are only comparable across runs using the same store
        f"term-vector store: {'; '.join(stores)}",
        "",
        f"{'domain':<16} {'rank':>4} {'proximity':>9} {'unique':>14} example ideas",
        "-" * 96,
    ]
    for m in manifests:
        ideas = read_ideas_jsonl(runs_dir / m.ideas_path)
        unique, stats = dedup_stats(ideas)
        examples = [i.text for i in unique if i.text][:4]
        csv_rows.append(
            [
                m.domain_id,
                m.display_name,
                "" if m.rank is None else str(m.rank),
                _format_proximity(m.proximity),
                str(stats.n_generated),
                str(stats.n_unique),
                f"{stats.pct_unique:.1f}%",
                " | ".join(examples),
            ]
        )
        text_lines.append(
            f"{m.display_name:<16} {'' if m.rank is None else m.rank:>4} "
            f"{_format_proximity(m.proximity):>9} "
            f"{stats.pct_unique:>5.1f}% ({stats.n_unique}/{stats.n_generated}) "
            + "; ".join(examples)
        )

    table_csv = out_dir / "table.csv"
    with table_csv.open("w", encoding="utf-8", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(csv_rows)
    written.append(table_csv)
    table_txt = out_dir / "table.txt"
    table_txt.write_text("\n".join(text_lines) + "\n", encoding="utf-8")
    written.append(table_txt)

    for m in manifests:
        novelty_copy = out_dir / f"{m.domain_id}_novelty.csv"
        shutil.copyfile(runs_dir / m.novelty_path, novelty_copy)
        written.append(novelty_copy)
        loss_copy = out_dir / f"{m.domain_id}_loss.csv"
        shutil.copyfile(runs_dir / m.loss_path, loss_copy)
        written.append(loss_copy)

        rows = read_novelty_csv(runs_dir / m.novelty_path)
        min_scores = min_scores_from_rows(rows)
        if min_scores:
            written.append(
                _write_histogram(
                    out_dir / f"{m.domain_id}_min_score_hist.csv",
                    summarize(min_scores, histogram_bins),
                )
            )
        token_counts = [float(r["token_count"]) for r in rows]
        if token_counts:
            written.append(
                _write_histogram(
                    out_dir / f"{m.domain_id}_token_count_hist.csv",
                    summarize(token_counts, histogram_bins),
                )
            )

    if comparisons:
        lines = []
        for c in comparisons:
            lines.append(
                f"direction={c.direction.value} U={c.rank_sum_statistic!r} "
                f"p={c.p_value!r} alpha={c.alpha!r} "
                f"median_near={c.median_near!r} median_far={c.median_far!r} "
                f"n_near={len(c.near_scores)} n_far={len(c.far_scores)}"
            )
        comparison_path = out_dir / "comparisons.txt"
        comparison_path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(comparison_path)
    return written


def _write_histogram(path: Path, summary) -> Path:
    lines = ["bin_start,bin_end,count"]
    for i, count in enumerate(summary.bin_counts):
        lines.append(f"{summary.bin_edges[i]!r},{summary.bin_edges[i + 1]!r},{count}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path

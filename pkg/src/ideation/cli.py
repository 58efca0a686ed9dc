"""Command-line frontend for the ideation pipeline.

Batch commands drive the core package directly; ``serve`` starts the HTTP
service. Exit codes: 0 success, 1 usage error, 2 data error, 3 backend
error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import __version__
from .config import load_service_settings, load_study_config
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
from .errors import BackendError, DataError
from .experiment import export_report, read_run_manifest, run_case_study
from .ideas import dedup_stats, generate_ideas, read_ideas_jsonl, write_ideas_jsonl
from .keywords import HashEmbeddingBackend, extract_keyword, load_stopwords
from .lm.backends import CharMLPBackend, load_checkpoint
from .lm.config import FineTuneConfig, GenerationConfig
from .lm.training import finetune, latest_checkpoint
from .novelty import idea_novelty, load_term_vectors, write_novelty_csv

logger = logging.getLogger(__name__)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="ideation", description=__doc__)
    parser.add_argument("--version", action="version", version=f"ideation {__version__}")
    parser.add_argument("--config", type=Path, help="key-value config file")
    parser.add_argument("--seed", type=int, help="override the master seed")
    parser.add_argument("--runs-dir", type=Path, help="override the runs directory")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="parse and validate a domain corpus file")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--domain", required=True)

    p = sub.add_parser("proximity", help="compute a proximity table from corpora")
    p.add_argument("--corpus", action="append", required=True,
                   metavar="DOMAIN=PATH", help="repeatable domain corpus")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("rank", help="rank domains by proximity to a target")
    p.add_argument("--table", type=Path, required=True)
    p.add_argument("--target", required=True)

    p = sub.add_parser("prepare", help="extract keywords and build a dataset file")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--out", type=Path, required=True)
    p.add_argument("--min-words", type=int, default=4)
    p.add_argument("--latest", type=int, default=20000)
    p.add_argument("--stopwords", type=Path)
    p.add_argument("--embed-dim", type=int, default=16)
    p.add_argument("--shuffle-seed", type=int, default=0)

    p = sub.add_parser("finetune", help="fine-tune the toy backend on a dataset")
    p.add_argument("--dataset", type=Path, required=True)
    p.add_argument("--domain", required=True)
    p.add_argument("--steps", type=int, default=20000)
    p.add_argument("--batch-size", type=int, default=1)
    p.add_argument("--learning-rate", type=float, default=0.1)
    p.add_argument("--log-every", type=int, default=100)
    p.add_argument("--checkpoint-every", type=int, default=0)
    p.add_argument("--loss-out", type=Path)

    p = sub.add_parser("generate", help="generate ideas from a fine-tuned domain")
    p.add_argument("--domain", required=True)
    p.add_argument("--keyword", required=True)
    p.add_argument("--n-samples", type=int, default=500)
    p.add_argument("--temperature", type=float, default=0.9)
    p.add_argument("--top-k", type=int, default=50)
    p.add_argument("--max-new-tokens", type=int, default=80)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("score", help="novelty-score an ideas file")
    p.add_argument("--ideas", type=Path, required=True)
    p.add_argument("--term-vectors", type=Path, required=True)
    p.add_argument("--run-id", default="adhoc")
    p.add_argument("--out", type=Path, required=True)

    sub.add_parser("study", help="run the full case study from --config")

    p = sub.add_parser("report", help="regenerate report files from run manifests")
    p.add_argument("--manifest", action="append", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int)

    return parser


def _seed(args: argparse.Namespace, default: int = 0) -> int:
    return args.seed if args.seed is not None else default


def _runs_dir(args: argparse.Namespace) -> Path:
    return args.runs_dir if args.runs_dir is not None else Path("runs")


def _cmd_ingest(args: argparse.Namespace) -> int:
    records = ingest_corpus(args.corpus, args.domain)
    print(f"{len(records)} records ({args.domain}) sha256={corpus_sha256(args.corpus)}")
    return 0


def _parse_domain_corpus(specs: list[str]) -> list[tuple[str, Path]]:
    out = []
    for spec in specs:
        domain, sep, path = spec.partition("=")
        if not sep or not domain or not path:
            raise UsageError(f"--corpus expects DOMAIN=PATH, got {spec!r}")
        out.append((domain, Path(path)))
    return out


def _cmd_proximity(args: argparse.Namespace) -> int:
    records = []
    for domain_id, path in _parse_domain_corpus(args.corpus):
        records.extend(ingest_corpus(path, domain_id))
    domains = domains_from_records(records)
    table = compute_proximity(records, domains)
    table.save(args.out)
    print(f"wrote {len(table.entries)} pair scores for {len(domains)} domains to {args.out}")
    return 0


def _cmd_rank(args: argparse.Namespace) -> int:
    table = ProximityTable.load(args.table)
    for entry in rank_domains(table, args.target):
        print(f"{entry.rank:>4}  {entry.domain_id:<24} {entry.proximity:.6f}")
    return 0


def _cmd_prepare(args: argparse.Namespace) -> int:
    records = ingest_corpus(args.corpus, args.domain)
    kept = select_latest(filter_titles(records, args.min_words), args.latest)
    stopwords = load_stopwords(args.stopwords) if args.stopwords else frozenset()
    backend = HashEmbeddingBackend(args.embed_dim, _seed(args))

    def keyword_fn(title: str) -> str:
        return extract_keyword(title, backend, stopwords=stopwords)

    pairs, skipped = build_pairs(kept, keyword_fn)
    manifest = serialize_dataset(
        pairs,
        args.out,
        shuffle_seed=args.shuffle_seed,
        domain_id=args.domain,
        source_corpus_hash=corpus_sha256(args.corpus),
    )
    print(f"{manifest.n_pairs} pairs written to {args.out} ({skipped} titles skipped)")
    return 0


def _cmd_finetune(args: argparse.Namespace) -> int:
    config = FineTuneConfig(
        steps=args.steps,
        batch_size=args.batch_size,
        learning_rate=args.learning_rate,
        log_every=args.log_every,
        checkpoint_every=args.checkpoint_every,
        seed=_seed(args),
    )
    backend = CharMLPBackend(seed=_seed(args))
    checkpoint_dir = _runs_dir(args) / "checkpoints" / args.domain
    checkpoint, trace = finetune(backend, args.dataset, config, checkpoint_dir)
    loss_out = args.loss_out or _runs_dir(args) / "checkpoints" / args.domain / "loss.csv"
    trace.save_csv(loss_out)
    first = trace.points[0][1] if trace.points else float("nan")
    last = trace.points[-1][1] if trace.points else float("nan")
    print(f"checkpoint {checkpoint.path} (step {checkpoint.step}); loss {first:.4f} -> {last:.4f}")
    return 0


def _cmd_generate(args: argparse.Namespace) -> int:
    checkpoint = latest_checkpoint(_runs_dir(args) / "checkpoints" / args.domain)
    backend = load_checkpoint(checkpoint.path)
    config = GenerationConfig(
        temperature=args.temperature,
        top_k=args.top_k,
        max_new_tokens=args.max_new_tokens,
        n_samples=args.n_samples,
        seed=_seed(args),
    )
    checkpoint_ref = checkpoint.path.as_posix()
    ideas = generate_ideas(backend, args.keyword, args.domain, checkpoint_ref, config)
    write_ideas_jsonl(args.out, ideas)
    _, stats = dedup_stats(ideas)
    print(f"{stats.n_generated} ideas -> {args.out}; unique {stats.n_unique} ({stats.pct_label})")
    return 0


def _cmd_score(args: argparse.Namespace) -> int:
    ideas = read_ideas_jsonl(args.ideas)
    if not ideas:
        raise DataError(f"{args.ideas}: no ideas to score")
    store = load_term_vectors(args.term_vectors)
    reports = [idea_novelty(idea, store) for idea in ideas]
    write_novelty_csv(args.out, args.run_id, ideas, reports)
    scored = sum(1 for r in reports if r is not None)
    print(f"scored {scored}/{len(ideas)} ideas -> {args.out}")
    return 0


def _cmd_study(args: argparse.Namespace) -> int:
    if args.config is None:
        raise UsageError("study requires --config")
    config = load_study_config(args.config, seed_override=args.seed,
                               runs_dir_override=args.runs_dir)
    result = run_case_study(config)
    for domain_id, error in result.failures:
        print(f"FAILED {domain_id}: {error}", file=sys.stderr)
    if not result.manifests:
        raise DataError("all domains failed")
    report_dir = config.report_dir or config.runs_dir / "report"
    comparisons = [result.comparison] if result.comparison else []
    export_report(result.manifests, comparisons, report_dir, config.runs_dir)
    for row in result.table:
        rank = "-" if row.rank is None else str(row.rank)
        print(f"{row.display_name}: rank {rank}, unique {row.stats.pct_label} "
              f"({row.stats.n_unique}/{row.stats.n_generated})")
    print(f"report written to {report_dir}")
    return 0 if not result.failures else 2


def _cmd_report(args: argparse.Namespace) -> int:
    manifests = [read_run_manifest(p) for p in args.manifest]
    runs_dir = _runs_dir(args)
    written = export_report(manifests, [], args.out, runs_dir)
    print(f"wrote {len(written)} report files to {args.out}")
    return 0


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from .service.app import create_app

    settings = load_service_settings(args.config)
    if args.runs_dir is not None:
        from dataclasses import replace

        settings = replace(settings, runs_dir=args.runs_dir,
                           checkpoints_dir=args.runs_dir / "checkpoints")
    port = args.port if args.port is not None else settings.port
    uvicorn.run(create_app(settings), host=args.host, port=port)
    return 0


_COMMANDS = {
    "ingest": _cmd_ingest,
    "proximity": _cmd_proximity,
    "rank": _cmd_rank,
    "prepare": _cmd_prepare,
    "finetune": _cmd_finetune,
    "generate": _cmd_generate,
    "score": _cmd_score,
    "study": _cmd_study,
    "report": _cmd_report,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2
    except BackendError as exc:
        print(f"backend error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

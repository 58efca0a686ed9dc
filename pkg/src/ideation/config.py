"""Key-value configuration files (INI sections per module).

Every default is overridable; loading resolves all of them so run
manifests never depend on implicit values. Relative paths are resolved
against the config file's directory.
"""

from __future__ import annotations

import configparser
import os
from dataclasses import dataclass, field
from pathlib import Path

from .errors import DataError
from .lm.config import FineTuneConfig, GenerationConfig

DEFAULT_PORT = 8714
ENV_PORT = "IDEATION_PORT"
ENV_RUNS_DIR = "IDEATION_RUNS_DIR"


@dataclass(frozen=True)
class BackendSpec:
    kind: str = "char-mlp"
    context_window: int = 16
    embed_dim: int = 24
    hidden_dim: int = 96
    seed: int = 0


@dataclass(frozen=True)
class CorpusSpec:
    min_title_words: int = 4
    latest_n: int = 20000


@dataclass(frozen=True)
class KeywordSpec:
    ngram_min: int = 1
    ngram_max: int = 2
    stopwords_path: Path | None = None
    embed_dim: int = 16
    embed_seed: int = 0


@dataclass(frozen=True)
class StudyDomain:
    domain_id: str
    display_name: str
    corpus_path: Path


@dataclass(frozen=True)
class StudyConfig:
    target_keyword: str
    domains: tuple[StudyDomain, ...]
    term_vectors: Path
    runs_dir: Path
    seed: int
    target_domain: str | None = None
    proximity_table: Path | None = None
    report_dir: Path | None = None
    near_domains: tuple[str, ...] = ()
    far_domains: tuple[str, ...] = ()
    corpus: CorpusSpec = field(default_factory=CorpusSpec)
    keywords: KeywordSpec = field(default_factory=KeywordSpec)
    finetune: FineTuneConfig = field(default_factory=FineTuneConfig)
    generation: GenerationConfig = field(default_factory=GenerationConfig)
    backend: BackendSpec = field(default_factory=BackendSpec)

    def __post_init__(self) -> None:
        if not self.target_keyword.strip():
            raise ValueError("target_keyword must be non-empty")
        if not self.domains:
            raise ValueError("study needs at least one domain")


def _read_ini(path: str | Path) -> configparser.ConfigParser:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str  # keep domain ids case-sensitive
    path = Path(path)
    if not path.exists():
        raise DataError(f"config file not found: {path}")
    try:
        parser.read(path, encoding="utf-8")
    except configparser.Error as exc:
        raise DataError(f"{path}: bad config file: {exc}") from exc
    return parser


def _get(parser: configparser.ConfigParser, section: str, key: str, cast, default):
    if not parser.has_option(section, key):
        return default
    raw = parser.get(section, key)
    try:
        return cast(raw)
    except (TypeError, ValueError) as exc:
        raise DataError(f"[{section}] {key}: bad value {raw!r}") from exc


def _resolve(base: Path, value: str) -> Path:
    p = Path(value)
    return p if p.is_absolute() else (base / p)


def load_study_config(
    path: str | Path,
    seed_override: int | None = None,
    runs_dir_override: str | Path | None = None,
) -> StudyConfig:
    path = Path(path)
    parser = _read_ini(path)
    base = path.parent

    if not parser.has_section("study"):
        raise DataError(f"{path}: missing [study] section")
    target_keyword = _get(parser, "study", "target_keyword", str, None)
    if not target_keyword:
        raise DataError(f"{path}: [study] target_keyword is required")
    term_vectors = _get(parser, "study", "term_vectors", str, None)
    if not term_vectors:
        raise DataError(f"{path}: [study] term_vectors is required")

    seed = seed_override if seed_override is not None else _get(parser, "study", "seed", int, 0)
    runs_dir = (
        Path(runs_dir_override)
        if runs_dir_override is not None
        else _resolve(base, _get(parser, "study", "runs_dir", str, "runs"))
    )

    display_names = dict(parser.items("domains")) if parser.has_section("domains") else {}
    if not parser.has_section("corpora"):
        raise DataError(f"{path}: missing [corpora] section (domain_id = corpus path)")
    domains = tuple(
        StudyDomain(
            domain_id=domain_id,
            display_name=display_names.get(domain_id, domain_id),
            corpus_path=_resolve(base, corpus_path),
        )
        for domain_id, corpus_path in parser.items("corpora")
    )

    proximity = _get(parser, "study", "proximity_table", str, None)
    report_dir = _get(parser, "study", "report_dir", str, None)

    def _id_list(raw: str) -> tuple[str, ...]:
        return tuple(item.strip() for item in raw.split(",") if item.strip())

    near_domains = _get(parser, "study", "near_domains", _id_list, ())
    far_domains = _get(parser, "study", "far_domains", _id_list, ())

    corpus = CorpusSpec(
        min_title_words=_get(parser, "corpus", "min_title_words", int, 4),
        latest_n=_get(parser, "corpus", "latest_n", int, 20000),
    )
    stopwords = _get(parser, "keywords", "stopwords", str, None)
    keywords = KeywordSpec(
        ngram_min=_get(parser, "keywords", "ngram_min", int, 1),
        ngram_max=_get(parser, "keywords", "ngram_max", int, 2),
        stopwords_path=_resolve(base, stopwords) if stopwords else None,
        embed_dim=_get(parser, "keywords", "embed_dim", int, 16),
        embed_seed=_get(parser, "keywords", "embed_seed", int, seed),
    )
    finetune = FineTuneConfig(
        steps=_get(parser, "finetune", "steps", int, 20000),
        batch_size=_get(parser, "finetune", "batch_size", int, 1),
        learning_rate=_get(parser, "finetune", "learning_rate", float, 0.1),
        log_every=_get(parser, "finetune", "log_every", int, 100),
        checkpoint_every=_get(parser, "finetune", "checkpoint_every", int, 0),
        seed=_get(parser, "finetune", "seed", int, seed),
    )
    generation = GenerationConfig(
        temperature=_get(parser, "generation", "temperature", float, 0.9),
        top_k=_get(parser, "generation", "top_k", int, 50),
        max_new_tokens=_get(parser, "generation", "max_new_tokens", int, 80),
        n_samples=_get(parser, "generation", "n_samples", int, 500),
        seed=_get(parser, "generation", "seed", int, seed),
    )
    backend = BackendSpec(
        kind=_get(parser, "backend", "kind", str, "char-mlp"),
        context_window=_get(parser, "backend", "context_window", int, 16),
        embed_dim=_get(parser, "backend", "embed_dim", int, 24),
        hidden_dim=_get(parser, "backend", "hidden_dim", int, 96),
        seed=_get(parser, "backend", "seed", int, seed),
    )

    return StudyConfig(
        target_keyword=target_keyword,
        target_domain=_get(parser, "study", "target_domain", str, None),
        domains=domains,
        term_vectors=_resolve(base, term_vectors),
        proximity_table=_resolve(base, proximity) if proximity else None,
        runs_dir=runs_dir,
        report_dir=_resolve(base, report_dir) if report_dir else None,
        near_domains=near_domains,
        far_domains=far_domains,
        seed=seed,
        corpus=corpus,
        keywords=keywords,
        finetune=finetune,
        generation=generation,
        backend=backend,
    )


@dataclass(frozen=True)
class ServiceSettings:
    runs_dir: Path
    checkpoints_dir: Path
    port: int = DEFAULT_PORT
    proximity_table: Path | None = None
    term_vectors: Path | None = None
    display_names: dict[str, str] = field(default_factory=dict)
    max_new_tokens: int = 80


def load_service_settings(path: str | Path | None = None) -> ServiceSettings:
    """Service settings from an optional config file, then environment overrides."""
    runs_dir = Path("runs")
    checkpoints_dir: Path | None = None
    port = DEFAULT_PORT
    proximity: Path | None = None
    term_vectors: Path | None = None
    display_names: dict[str, str] = {}
    max_new_tokens = 80

    if path is not None:
        parser = _read_ini(path)
        base = Path(path).parent
        runs_dir = _resolve(base, _get(parser, "service", "runs_dir", str, "runs"))
        raw_ckpt = _get(parser, "service", "checkpoints_dir", str, None)
        checkpoints_dir = _resolve(base, raw_ckpt) if raw_ckpt else None
        port = _get(parser, "service", "port", int, DEFAULT_PORT)
        raw_prox = _get(parser, "service", "proximity_table", str, None)
        proximity = _resolve(base, raw_prox) if raw_prox else None
        raw_terms = _get(parser, "service", "term_vectors", str, None)
        term_vectors = _resolve(base, raw_terms) if raw_terms else None
        max_new_tokens = _get(parser, "service", "max_new_tokens", int, 80)
        if parser.has_section("domains"):
            display_names = dict(parser.items("domains"))

    env_runs = os.environ.get(ENV_RUNS_DIR)
    if env_runs:
        runs_dir = Path(env_runs)
    env_port = os.environ.get(ENV_PORT)
    if env_port:
        try:
            port = int(env_port)
        except ValueError:
            raise DataError(f"{ENV_PORT}: bad port {env_port!r}") from None

    return ServiceSettings(
        runs_dir=runs_dir,
        checkpoints_dir=checkpoints_dir or runs_dir / "checkpoints",
        port=port,
        proximity_table=proximity,
        term_vectors=term_vectors,
        display_names=display_names,
        max_new_tokens=max_new_tokens,
    )

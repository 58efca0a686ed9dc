from __future__ import annotations

import random
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pytest

from ideation.corpus import PatentRecord
from ideation.novelty import TermVectorStore

ADJECTIVES = ["rolling", "spinning", "bouncing", "magnetic", "folding", "glowing", "rapid", "compact"]
NOUNS = ["toy", "launcher", "target", "reel", "wheel", "cart", "drone", "box"]
FEATURES = [
    "with light sensor",
    "with sound module",
    "for children",
    "with safety lock",
    "with remote control",
    "for outdoor play",
    "with spring drive",
    "with dual motor",
]


def synthetic_titles(n: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    return [
        f"{rng.choice(ADJECTIVES).capitalize()} {rng.choice(NOUNS)} {rng.choice(FEATURES)}"
        for _ in range(n)
    ]


def make_record(
    patent_id: str,
    title: str = "Rolling toy air gun",
    domain_id: str = "toys",
    grant_date: date = date(2021, 6, 1),
    class_codes: tuple[str, ...] = ("A63H",),
) -> PatentRecord:
    return PatentRecord(
        patent_id=patent_id,
        title=title,
        domain_id=domain_id,
        grant_date=grant_date,
        class_codes=class_codes,
    )


def write_corpus(
    path: Path,
    domain_id: str,
    titles: list[str],
    codes: list[tuple[str, ...]] | None = None,
    start: date = date(2015, 1, 1),
) -> Path:
    lines = []
    for i, title in enumerate(titles):
        code_field = ";".join(codes[i] if codes else (f"{domain_id.upper()}01",))
        day = start + timedelta(days=i)
        lines.append(f"{domain_id}-{i:04d}\t{day.isoformat()}\t{domain_id}\t{code_field}\t{title}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def tiny_store() -> TermVectorStore:
    vectors = {
        "rolling toy": np.array([1.0, 1.0, 0.0]),
        "dart board": np.array([1.0, 0.0, 1.0]),
        "turn": np.array([0.0, 1.0, 1.0]),
        "gun": np.array([0.0, 0.0, 1.0]),
        "toy": np.array([1.0, 0.0, 0.0]),
    }
    return TermVectorStore(vectors=vectors, dimension=3)


def write_term_vectors_file(path: Path, seed: int = 0, dimension: int = 8) -> Path:
    """Vectors for the synthetic-corpus vocabulary, plus a few bigrams."""
    from ideation.novelty import TermVectorStore as Store, save_term_vectors

    rng = np.random.default_rng(seed)
    vocab = set(ADJECTIVES) | set(NOUNS) | {"rolling toy", "light sensor", "sound module",
                                            "safety lock", "remote control", "spring drive",
                                            "dual motor", "children", "outdoor", "play"}
    for feature in FEATURES:
        vocab.update(w for w in feature.split() if w not in {"with", "for"})
    store = Store(
        vectors={term: rng.standard_normal(dimension) for term in sorted(vocab)},
        dimension=dimension,
    )
    save_term_vectors(path, store)
    return path


def write_study_config(
    base: Path,
    domain_corpora: dict[str, Path],
    term_vectors: Path,
    proximity_table: Path | None = None,
    target_domain: str | None = None,
    n_titles_hint: int = 100,
    steps: int = 120,
    n_samples: int = 20,
    seed: int = 7,
    extra_study_lines: str = "",
) -> Path:
    corpora_lines = "\n".join(f"{d} = {p}" for d, p in domain_corpora.items())
    domains_lines = "\n".join(f"{d} = {d.title()}" for d in domain_corpora)
    proximity_line = f"proximity_table = {proximity_table}" if proximity_table else ""
    target_line = f"target_domain = {target_domain}" if target_domain else ""
    text = f"""
[study]
target_keyword = rolling toy
term_vectors = {term_vectors}
runs_dir = runs
seed = {seed}
{proximity_line}
{target_line}
{extra_study_lines}

[corpus]
min_title_words = 4
latest_n = {n_titles_hint}

[keywords]
embed_dim = 12
embed_seed = 3

[domains]
{domains_lines}

[corpora]
{corpora_lines}

[finetune]
steps = {steps}
batch_size = 1
learning_rate = 0.1
log_every = 20
seed = 11

[generation]
temperature = 0.9
top_k = 50
max_new_tokens = 60
n_samples = {n_samples}
seed = 23

[backend]
kind = char-mlp
context_window = 12
embed_dim = 16
hidden_dim = 48
seed = 5
"""
    path = base / "study.ini"
    path.write_text(text, encoding="utf-8")
    return path

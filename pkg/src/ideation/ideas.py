"""Bulk idea generation, normalization and uniqueness statistics.

Uniqueness is exact match on the normalized text; the percentage of unique
ideas is reported to one decimal place, Table-style ("35.8%").
"""

from __future__ import annotations

import json
import re
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Callable, Sequence

from .errors import BackendError
from .lm.backends import ModelBackend
from .lm.config import GenerationConfig
from .lm.generation import generate_text

_WHITESPACE = re.compile(r"\s+")
_TRAILING_PUNCT = ".!?"


def normalize_idea(text: str) -> str:
    """Lowercase, collapse whitespace, strip trailing sentence punctuation."""
    out = _WHITESPACE.sub(" ", text.lower()).strip()
    out = out.rstrip(_TRAILING_PUNCT).strip()
    return out


@dataclass(frozen=True)
class IdeaRecord:
    """One generated idea with its provenance."""

    text: str
    normalized: str
    target_keyword: str
    domain_id: str
    checkpoint: str
    sample_index: int
    truncated: bool

    def __post_init__(self) -> None:
        if self.normalized != normalize_idea(self.text):
            raise ValueError("normalized field does not match normalize_idea(text)")


@dataclass(frozen=True)
class IdeaSetStats:
    n_generated: int
    n_unique: int
    pct_unique: float

    @property
    def pct_label(self) -> str:
        return f"{self.pct_unique:.1f}%"


def generate_ideas(
    backend: ModelBackend,
    keyword: str,
    domain_id: str,
    checkpoint: str,
    config: GenerationConfig,
    progress: Callable[[int, int], None] | None = None,
) -> list[IdeaRecord]:
    """Exactly config.n_samples ideas, sample_index 0..n-1.

    Empty generations are kept (they count toward the denominator). A
    backend failure discards partial results and reports how many samples
    had completed.
    """
    records: list[IdeaRecord] = []
    for i in range(config.n_samples):
        try:
            result = generate_text(backend, keyword, config, sample_index=i)
        except Exception as exc:
            raise BackendError(
                f"generation failed after {len(records)} completed samples: {exc}"
            ) from exc
        records.append(
            IdeaRecord(
                text=result.text,
                normalized=normalize_idea(result.text),
                target_keyword=keyword,
                domain_id=domain_id,
                checkpoint=checkpoint,
                sample_index=i,
                truncated=result.truncated,
            )
        )
        if progress is not None:
            progress(i + 1, config.n_samples)
    return records


def dedup_stats(ideas: Sequence[IdeaRecord]) -> tuple[list[IdeaRecord], IdeaSetStats]:
    """First occurrence of each normalized form, plus the % unique statistic."""
    if not ideas:
        raise ValueError("dedup_stats needs at least one idea")
    seen: set[str] = set()
    unique: list[IdeaRecord] = []
    for idea in ideas:
        if idea.normalized in seen:
            continue
        seen.add(idea.normalized)
        unique.append(idea)
    stats = IdeaSetStats(
        n_generated=len(ideas),
        n_unique=len(unique),
        pct_unique=100.0 * len(unique) / len(ideas),
    )
    return unique, stats


def write_ideas_jsonl(path: str | Path, ideas: Sequence[IdeaRecord]) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for idea in ideas:
            fh.write(json.dumps(asdict(idea), sort_keys=True, ensure_ascii=False) + "\n")


def read_ideas_jsonl(path: str | Path) -> list[IdeaRecord]:
    ideas = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        ideas.append(IdeaRecord(**json.loads(line)))
    return ideas

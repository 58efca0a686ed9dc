"""Idea novelty as the minimum pairwise term relevancy.

Terms are matched against a loaded term-vector vocabulary (greedy longest
match, no stemming); relevancy between two terms is the cosine similarity
of their vectors. Lower minimum relevancy means the idea joins more
semantically distant concepts, i.e. is more novel. Ideas with fewer than
two matched terms are unscorable, which is an outcome, not an error.

Term-vector file format: first line ``N d``; then one line per term, the
term (spaces replaced by underscores) followed by d decimal components,
all space-separated.
"""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import DataError
from .ideas import IdeaRecord
from .vectors import cosine

# Reference mean term-relevancy of the external term network; a comparison
# constant for reports, meaningful only with that network's vectors.
REFERENCE_MEAN_RELEVANCY = 0.133

_PUNCT = re.compile(r"[^\w\s]")


@dataclass(frozen=True)
class TermVectorStore:
    """Immutable term -> vector lookup with a fixed dimension."""

    vectors: dict[str, np.ndarray]
    dimension: int

    @property
    def vocabulary(self) -> set[str]:
        return set(self.vectors)

    def __contains__(self, term: str) -> bool:
        return term in self.vectors

    def vector(self, term: str) -> np.ndarray:
        try:
            return self.vectors[term]
        except KeyError:
            raise DataError(f"unknown term: {term!r}") from None

    @property
    def max_phrase_words(self) -> int:
        return max((t.count(" ") + 1 for t in self.vectors), default=0)


def load_term_vectors(path: str | Path) -> TermVectorStore:
    path = Path(path)
    lines = path.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise DataError(f"{path}: empty term-vector file")
    header = lines[0].split()
    if len(header) != 2:
        raise DataError(f"{path}: header must be 'N d'")
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise DataError(f"{path}: header must be 'N d'") from None
    if dim < 1:
        raise DataError(f"{path}: dimension must be >= 1")
    vectors: dict[str, np.ndarray] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split()
        raw_term, components = parts[0], parts[1:]
        term = raw_term.replace("_", " ").lower()
        if len(components) != dim:
            raise DataError(
                f"{path}: term {term!r} has {len(components)} components, expected {dim}"
            )
        if term in vectors:
            raise DataError(f"{path}: duplicate term {term!r} (line {lineno})")
        try:
            vectors[term] = np.array([float(c) for c in components], dtype=np.float64)
        except ValueError:
            raise DataError(f"{path}: term {term!r}: bad vector component") from None
    if len(vectors) != count:
        raise DataError(f"{path}: header declares {count} terms, file has {len(vectors)}")
    return TermVectorStore(vectors=vectors, dimension=dim)


def save_term_vectors(path: str | Path, store: TermVectorStore) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{len(store.vectors)} {store.dimension}"]
    for term in sorted(store.vectors):
        components = " ".join(repr(float(x)) for x in store.vectors[term])
        lines.append(f"{term.replace(' ', '_')} {components}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def extract_terms(text: str, store: TermVectorStore) -> list[str]:
    """Greedy longest-match vocabulary terms, left to right, deduplicated.

    The text is lowercased and punctuation is replaced by spaces first;
    matched spans never overlap.
    """
    words = _PUNCT.sub(" ", text.lower()).split()
    max_len = store.max_phrase_words
    found: list[str] = []
    seen: set[str] = set()
    i = 0
    while i < len(words):
        matched = False
        for n in range(min(max_len, len(words) - i), 0, -1):
            candidate = " ".join(words[i : i + n])
            if candidate in store:
                if candidate not in seen:
                    seen.add(candidate)
                    found.append(candidate)
                i += n
                matched = True
                break
        if not matched:
            i += 1
    return found


def relevancy(term_a: str, term_b: str, store: TermVectorStore) -> float:
    """Cosine similarity of the two term vectors (symmetric)."""
    return cosine(store.vector(term_a), store.vector(term_b))


@dataclass(frozen=True)
class NoveltyReport:
    idea_index: int
    terms: tuple[str, ...]
    pair_scores: tuple[tuple[str, str, float], ...]
    min_score: float
    argmin_pair: tuple[str, str]
    token_count: int


def idea_novelty(idea: IdeaRecord, store: TermVectorStore) -> NoveltyReport | None:
    """Score one idea; returns None (unscorable) when fewer than 2 terms match."""
    terms = extract_terms(idea.text, store)
    if len(terms) < 2:
        return None
    pair_scores: list[tuple[str, str, float]] = []
    min_score = float("inf")
    argmin: tuple[str, str] | None = None
    for a, b in combinations(terms, 2):
        score = relevancy(a, b, store)
        pair_scores.append((a, b, score))
        canon = (a, b) if a <= b else (b, a)
        if score < min_score or (score == min_score and argmin is not None and canon < argmin):
            min_score = score
            argmin = canon
    assert argmin is not None
    return NoveltyReport(
        idea_index=idea.sample_index,
        terms=tuple(terms),
        pair_scores=tuple(pair_scores),
        min_score=min_score,
        argmin_pair=argmin,
        token_count=len(idea.text.split()),
    )


@dataclass(frozen=True)
class DistributionSummary:
    count: int
    mean: float
    median: float
    q1: float
    q3: float
    bin_edges: tuple[float, ...]
    bin_counts: tuple[int, ...]


def summarize(values: Sequence[float], bin_count: int = 10) -> DistributionSummary:
    """Quartiles plus an equal-width histogram over [min, max]."""
    if not values:
        raise ValueError("summarize needs at least one value")
    if bin_count < 1:
        raise ValueError("bin_count must be >= 1")
    arr = np.asarray(values, dtype=np.float64)
    lo, hi = float(arr.min()), float(arr.max())
    hist_range = (lo - 0.5, hi + 0.5) if lo == hi else (lo, hi)
    counts, edges = np.histogram(arr, bins=bin_count, range=hist_range)
    q1, median, q3 = (float(q) for q in np.percentile(arr, [25, 50, 75]))
    return DistributionSummary(
        count=len(values),
        mean=float(arr.mean()),
        median=median,
        q1=q1,
        q3=q3,
        bin_edges=tuple(float(e) for e in edges),
        bin_counts=tuple(int(c) for c in counts),
    )


NOVELTY_CSV_HEADER = ["run_id", "idea_index", "min_score", "argmin_a", "argmin_b", "n_terms", "token_count"]


def write_novelty_csv(
    path: str | Path,
    run_id: str,
    ideas: Sequence[IdeaRecord],
    reports: Sequence[NoveltyReport | None],
) -> None:
    """One row per idea; unscorable ideas keep their row with blank score fields."""
    if len(ideas) != len(reports):
        raise ValueError("ideas and reports must align")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(NOVELTY_CSV_HEADER)
        for idea, report in zip(ideas, reports):
            if report is None:
                writer.writerow(
                    [run_id, idea.sample_index, "", "", "", "", len(idea.text.split())]
                )
            else:
                writer.writerow(
                    [
                        run_id,
                        idea.sample_index,
                        repr(report.min_score),
                        report.argmin_pair[0],
                        report.argmin_pair[1],
                        len(report.terms),
                        report.token_count,
                    ]
                )


def read_novelty_csv(path: str | Path) -> list[dict[str, str]]:
    with Path(path).open(encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != NOVELTY_CSV_HEADER:
            raise DataError(f"{path}: unexpected novelty CSV header {reader.fieldnames}")
        return list(reader)


def min_scores_from_rows(rows: Iterable[dict[str, str]]) -> list[float]:
    """Scorable min_score values from novelty CSV rows (blanks skipped)."""
    return [float(row["min_score"]) for row in rows if row["min_score"]]

"""Per-title keyword extraction by embedding similarity.

Each title gets exactly one keyword: the candidate n-gram whose embedding
is most cosine-similar to the embedding of the full title. The embedding
backend is injected so tests run on a deterministic hash-based backend.
"""

from __future__ import annotations

import hashlib
import threading
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Protocol, Sequence

import numpy as np

from .errors import BackendError, DataError
from .vectors import cosine


class EmbeddingBackend(Protocol):
    """Deterministic text -> fixed-dimension vector."""

    dimension: int
    thread_safe: bool

    def embed(self, text: str) -> np.ndarray: ...


class HashEmbeddingBackend:
    """Seeded, deterministic unit-norm embeddings derived from a text hash.

    No semantics, but stable across runs and processes, which is all the
    test suite and toy studies need.
    """

    thread_safe = True

    def __init__(self, dimension: int = 16, seed: int = 0):
        if dimension < 1:
            raise ValueError("dimension must be >= 1")
        self.dimension = dimension
        self._seed = seed

    def embed(self, text: str) -> np.ndarray:
        digest = hashlib.sha256(f"{self._seed}:{text}".encode("utf-8")).digest()
        rng = np.random.default_rng(int.from_bytes(digest[:8], "big"))
        vec = rng.standard_normal(self.dimension)
        norm = np.linalg.norm(vec)
        if norm == 0.0:  # astronomically unlikely; keep the unit-norm contract
            vec[0] = 1.0
            norm = 1.0
        return vec / norm


class SerializedBackend:
    """Wraps a backend that is not safe for concurrent calls with a lock."""

    thread_safe = True

    def __init__(self, inner: EmbeddingBackend):
        self._inner = inner
        self._lock = threading.Lock()
        self.dimension = inner.dimension

    def embed(self, text: str) -> np.ndarray:
        with self._lock:
            return self._inner.embed(text)


def ensure_thread_safe(backend: EmbeddingBackend) -> EmbeddingBackend:
    if getattr(backend, "thread_safe", False):
        return backend
    return SerializedBackend(backend)


@dataclass(frozen=True)
class CandidatePhrase:
    """A lowercased word n-gram with its [start, end) word span in the title."""

    text: str
    span: tuple[int, int]

    @property
    def length(self) -> int:
        return self.span[1] - self.span[0]


def extract_candidates(
    title: str,
    ngram_min: int = 1,
    ngram_max: int = 2,
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> list[CandidatePhrase]:
    """All contiguous word n-grams in the length range, lowercased.

    Phrases starting or ending with a stopword are dropped, duplicates keep
    their first occurrence. Raises DataError("no candidates") when nothing
    survives.
    """
    if ngram_min < 1 or ngram_min > ngram_max:
        raise ValueError("need 1 <= ngram_min <= ngram_max")
    if not title.strip():
        raise ValueError("title must be non-empty")
    words = [w.lower() for w in title.split()]
    seen: set[str] = set()
    candidates: list[CandidatePhrase] = []
    for n in range(ngram_min, ngram_max + 1):
        for start in range(0, len(words) - n + 1):
            if words[start] in stopwords or words[start + n - 1] in stopwords:
                continue
            text = " ".join(words[start : start + n])
            if text in seen:
                continue
            seen.add(text)
            candidates.append(CandidatePhrase(text=text, span=(start, start + n)))
    if not candidates:
        raise DataError("no candidates")
    return candidates


def extract_keyword(
    title: str,
    backend: EmbeddingBackend,
    ngram_min: int = 1,
    ngram_max: int = 2,
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> str:
    """The candidate phrase most cosine-similar to the full title embedding.

    Ties break toward the earliest span, then the shorter phrase.
    """
    candidates = extract_candidates(title, ngram_min, ngram_max, stopwords)
    title_vec = backend.embed(title)
    best: CandidatePhrase | None = None
    best_key: tuple[float, int, int] | None = None
    for cand in candidates:
        sim = cosine(title_vec, backend.embed(cand.text))
        key = (-sim, cand.span[0], cand.length)
        if best_key is None or key < best_key:
            best_key = key
            best = cand
    assert best is not None
    return best.text


def embed_batch(texts: Sequence[str], backend: EmbeddingBackend) -> list[np.ndarray]:
    """Embed texts in order; a backend failure names the failing index."""
    out: list[np.ndarray] = []
    for i, text in enumerate(texts):
        try:
            out.append(np.asarray(backend.embed(text), dtype=np.float64))
        except Exception as exc:
            raise BackendError(f"embedding failed at index {i}: {exc}") from exc
    return out


def load_stopwords(path: str | Path) -> frozenset[str]:
    """Stopword file: UTF-8, one word per line; blank lines ignored."""
    words = set()
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        word = line.strip().lower()
        if word:
            words.add(word)
    return frozenset(words)


def load_keyword_cache(path: str | Path) -> dict[str, str]:
    """Keyword cache file: ``patent_id<TAB>keyword`` lines."""
    path = Path(path)
    cache: dict[str, str] = {}
    if not path.exists():
        return cache
    for lineno, line in enumerate(path.read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        parts = line.split("\t")
        if len(parts) != 2 or not parts[0] or not parts[1]:
            raise DataError(f"{path}: line {lineno}: expected patent_id<TAB>keyword")
        cache[parts[0]] = parts[1]
    return cache


def extract_keywords_cached(
    items: Iterable[tuple[str, str]],
    backend: EmbeddingBackend,
    cache_path: str | Path | None = None,
    ngram_min: int = 1,
    ngram_max: int = 2,
    stopwords: frozenset[str] | set[str] = frozenset(),
) -> Mapping[str, str]:
    """Keyword per (patent_id, title), resuming from and appending to a cache file.

    Titles whose extraction fails (no candidates) are left out of the result;
    callers decide whether that is fatal.
    """
    cache = load_keyword_cache(cache_path) if cache_path is not None else {}
    out: dict[str, str] = {}
    fh = Path(cache_path).open("a", encoding="utf-8") if cache_path is not None else None
    try:
        for patent_id, title in items:
            if patent_id in cache:
                out[patent_id] = cache[patent_id]
                continue
            try:
                keyword = extract_keyword(title, backend, ngram_min, ngram_max, stopwords)
            except DataError:
                continue
            out[patent_id] = keyword
            if fh is not None:
                fh.write(f"{patent_id}\t{keyword}\n")
                fh.flush()
    finally:
        if fh is not None:
            fh.close()
    return out

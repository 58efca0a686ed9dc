"""Keyword -> title training examples and their on-disk format.

One example per line, bit-exact:

    <|s|>KEYWORD => TITLE<|e|>

The start/end delimiters give the generator a parseable conditioning
structure and a stop symbol; neither field may contain them.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Sequence

from .corpus import PatentRecord
from .errors import DataError

START = "<|s|>"
END = "<|e|>"
SEPARATOR = " => "
_DELIMITERS = (START, END, SEPARATOR)


def _is_word_subsequence(needle: str, haystack: str) -> bool:
    small = needle.split()
    big = haystack.split()
    if not small or len(small) > len(big):
        return False
    return any(big[i : i + len(small)] == small for i in range(len(big) - len(small) + 1))


@dataclass(frozen=True)
class KeywordTitlePair:
    """One training example: a lowercase keyword paired with its source title."""

    keyword: str
    title: str

    def __post_init__(self) -> None:
        if not self.keyword or self.keyword != self.keyword.lower():
            raise ValueError(f"keyword must be non-empty lowercase: {self.keyword!r}")
        if not self.title.strip():
            raise ValueError("title must be non-empty")
        if not _is_word_subsequence(self.keyword, self.title.lower()):
            raise ValueError(
                f"keyword {self.keyword!r} is not a contiguous word sequence of the title"
            )


@dataclass(frozen=True)
class DatasetManifest:
    domain_id: str
    n_pairs: int
    source_corpus_hash: str
    created_at: str
    shuffle_seed: int


def build_pairs(
    records: Sequence[PatentRecord],
    keyword_fn: Callable[[str], str],
) -> tuple[list[KeywordTitlePair], int]:
    """One pair per record, in order, skipping titles whose extraction fails.

    Returns (pairs, skipped_count). More than 10% failures aborts: that
    signals a corpus or stopword misconfiguration rather than stray titles.
    """
    pairs: list[KeywordTitlePair] = []
    skipped = 0
    for record in records:
        try:
            keyword = keyword_fn(record.title)
        except DataError:
            skipped += 1
            continue
        pairs.append(KeywordTitlePair(keyword=keyword, title=record.title))
    if records and skipped > 0.10 * len(records):
        raise DataError(
            f"keyword extraction failed for {skipped} of {len(records)} records (>10%)"
        )
    return pairs, skipped


def format_example(pair: KeywordTitlePair) -> str:
    return f"{START}{pair.keyword}{SEPARATOR}{pair.title}{END}"


def serialize_dataset(
    pairs: Sequence[KeywordTitlePair],
    path: str | Path,
    shuffle_seed: int,
    domain_id: str = "",
    source_corpus_hash: str = "",
) -> DatasetManifest:
    """Write the seeded-shuffled examples, one per line, plus a manifest beside them."""
    if not pairs:
        raise ValueError("pairs must be non-empty")
    for pair in pairs:
        for delim in _DELIMITERS:
            if delim in pair.keyword or delim in pair.title:
                raise DataError(
                    f"pair ({pair.keyword!r}, {pair.title!r}) contains reserved delimiter {delim!r}"
                )
    shuffled = list(pairs)
    random.Random(shuffle_seed).shuffle(shuffled)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for pair in shuffled:
            fh.write(format_example(pair) + "\n")
    manifest = DatasetManifest(
        domain_id=domain_id,
        n_pairs=len(shuffled),
        source_corpus_hash=source_corpus_hash,
        created_at=datetime.now(timezone.utc).isoformat(),
        shuffle_seed=shuffle_seed,
    )
    write_dataset_manifest(manifest_path(path), manifest)
    return manifest


def manifest_path(dataset_path: str | Path) -> Path:
    dataset_path = Path(dataset_path)
    return dataset_path.with_name(dataset_path.name + ".manifest")


def write_dataset_manifest(path: str | Path, manifest: DatasetManifest) -> None:
    lines = [
        f"domain_id = {manifest.domain_id}",
        f"n_pairs = {manifest.n_pairs}",
        f"source_corpus_hash = {manifest.source_corpus_hash}",
        f"created_at = {manifest.created_at}",
        f"shuffle_seed = {manifest.shuffle_seed}",
    ]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_dataset_manifest(path: str | Path) -> DatasetManifest:
    values: dict[str, str] = {}
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        key, _, value = line.partition(" = ")
        values[key.strip()] = value
    try:
        return DatasetManifest(
            domain_id=values["domain_id"],
            n_pairs=int(values["n_pairs"]),
            source_corpus_hash=values["source_corpus_hash"],
            created_at=values["created_at"],
            shuffle_seed=int(values["shuffle_seed"]),
        )
    except (KeyError, ValueError) as exc:
        raise DataError(f"{path}: bad dataset manifest: {exc}") from exc


def parse_example(line: str) -> KeywordTitlePair:
    """Inverse of serialization; errors carry the offset of the missing piece."""
    line = line.rstrip("\n")
    if not line.startswith(START):
        raise DataError(f"missing start delimiter {START!r} at offset 0")
    if not line.endswith(END):
        raise DataError(f"missing end delimiter {END!r} at offset {max(len(line) - len(END), 0)}")
    inner = line[len(START) : -len(END)]
    sep_at = inner.find(SEPARATOR)
    if sep_at < 0:
        raise DataError(f"missing separator {SEPARATOR!r} at offset {len(START)}")
    keyword = inner[:sep_at]
    title = inner[sep_at + len(SEPARATOR) :]
    if not keyword.strip():
        raise DataError(f"empty keyword at offset {len(START)}")
    if not title.strip():
        raise DataError(f"whitespace-only title at offset {len(START) + sep_at + len(SEPARATOR)}")
    return KeywordTitlePair(keyword=keyword, title=title)


def corpus_hash_for_records(records: Sequence[PatentRecord]) -> str:
    """Stable digest over record identity, for manifests built off in-memory data."""
    h = hashlib.sha256()
    for r in records:
        h.update(f"{r.patent_id}\t{r.grant_date.isoformat()}\t{r.title}\n".encode("utf-8"))
    return h.hexdigest()

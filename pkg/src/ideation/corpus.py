"""Domain patent-title corpora: ingestion, filtering and knowledge proximity.

Corpus files are UTF-8, one record per line:

    patent_id<TAB>grant_date(YYYY-MM-DD)<TAB>domain_id<TAB>class_codes<TAB>title

where class_codes is semicolon-separated and may be empty. Proximity tables
are stored as a ``#proximity v1`` header followed by
``domain_a<TAB>domain_b<TAB>score`` lines.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from datetime import date
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DataError
from .vectors import cosine

logger = logging.getLogger(__name__)

PROXIMITY_HEADER = "#proximity v1"


@dataclass(frozen=True)
class PatentRecord:
    """One patent title with its grant date, domain and classification codes."""

    patent_id: str
    title: str
    domain_id: str
    grant_date: date
    class_codes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if not self.title.strip():
            raise ValueError(f"patent {self.patent_id!r}: empty title")


@dataclass(frozen=True)
class Domain:
    """A knowledge domain defined by a set of classification codes."""

    domain_id: str
    display_name: str
    class_codes: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.class_codes:
            raise ValueError(f"domain {self.domain_id!r}: needs at least one class code")


class Provenance(str, Enum):
    LOADED = "loaded"
    COMPUTED = "computed"


def _pair_key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class ProximityTable:
    """Symmetric domain-to-domain proximity scores (higher = closer).

    Keys are unordered domain pairs; symmetry holds by construction.
    """

    entries: Mapping[tuple[str, str], float]
    provenance: Provenance
    domain_ids: tuple[str, ...] = field(default=())

    def lookup(self, a: str, b: str) -> float:
        key = _pair_key(a, b)
        if key not in self.entries:
            raise DataError(f"no proximity entry for domain pair {a!r}, {b!r}")
        return self.entries[key]

    def save(self, path: str | Path) -> None:
        lines = [PROXIMITY_HEADER]
        for (a, b), score in sorted(self.entries.items()):
            lines.append(f"{a}\t{b}\t{score!r}")
        Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> "ProximityTable":
        path = Path(path)
        raw = path.read_text(encoding="utf-8").splitlines()
        if not raw or raw[0].strip() != PROXIMITY_HEADER:
            raise DataError(f"{path}: missing '{PROXIMITY_HEADER}' header")
        entries: dict[tuple[str, str], float] = {}
        ids: set[str] = set()
        for lineno, line in enumerate(raw[1:], start=2):
            if not line.strip():
                continue
            parts = line.split("\t")
            if len(parts) != 3:
                raise DataError(f"{path}: line {lineno}: expected 3 tab-separated fields")
            a, b, score_text = parts
            try:
                score = float(score_text)
            except ValueError:
                raise DataError(f"{path}: line {lineno}: bad score {score_text!r}") from None
            if not math.isfinite(score):
                raise DataError(f"{path}: line {lineno}: non-finite score")
            key = _pair_key(a.strip(), b.strip())
            if key in entries and entries[key] != score:
                raise DataError(
                    f"{path}: line {lineno}: conflicting scores for pair {key[0]!r}, {key[1]!r}"
                )
            entries[key] = score
            ids.update(key)
        table = cls(entries=entries, provenance=Provenance.LOADED, domain_ids=tuple(sorted(ids)))
        table._check_self_proximity()
        return table

    def _check_self_proximity(self) -> None:
        # Where a self pair is recorded it must dominate its row.
        for d in self.domain_ids:
            self_key = _pair_key(d, d)
            if self_key not in self.entries:
                continue
            own = self.entries[self_key]
            for other in self.domain_ids:
                if other != d and _pair_key(d, other) in self.entries:
                    if self.entries[_pair_key(d, other)] > own:
                        raise DataError(
                            f"self-proximity of {d!r} is not the maximum of its row"
                        )


@dataclass(frozen=True)
class DomainRank:
    domain_id: str
    display_name: str
    rank: int
    proximity: float


def ingest_corpus(path: str | Path, domain_id: str) -> list[PatentRecord]:
    """Parse one domain's corpus file into records, preserving line order.

    Every line must carry the given domain_id; blank lines are skipped.
    """
    path = Path(path)
    records: list[PatentRecord] = []
    seen_ids: set[str] = set()
    with path.open(encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip():
                continue
            parts = line.split("\t", 4)
            if len(parts) < 5:
                raise DataError(f"line {lineno}: expected 5 tab-separated fields, got {len(parts)}")
            pid, date_text, dom, codes_text, title = parts
            if not title.strip():
                raise DataError(f"line {lineno}: missing title")
            if not pid.strip():
                raise DataError(f"line {lineno}: missing patent_id")
            if dom != domain_id:
                raise DataError(
                    f"line {lineno}: domain_id {dom!r} does not match expected {domain_id!r}"
                )
            try:
                grant = date.fromisoformat(date_text)
            except ValueError:
                raise DataError(f"line {lineno}: invalid grant_date {date_text!r}") from None
            if pid in seen_ids:
                raise DataError(f"duplicate patent_id {pid!r} (line {lineno})")
            seen_ids.add(pid)
            codes = tuple(c.strip() for c in codes_text.split(";") if c.strip())
            records.append(
                PatentRecord(
                    patent_id=pid,
                    title=title,
                    domain_id=dom,
                    grant_date=grant,
                    class_codes=codes,
                )
            )
    logger.info("ingested %d records from %s (domain %s)", len(records), path, domain_id)
    return records


def filter_titles(records: Sequence[PatentRecord], min_words: int = 4) -> list[PatentRecord]:
    """Keep records whose title has at least min_words whitespace-separated words."""
    if min_words < 1:
        raise ValueError("min_words must be >= 1")
    return [r for r in records if len(r.title.split()) >= min_words]


def select_latest(records: Sequence[PatentRecord], n: int = 20000) -> list[PatentRecord]:
    """The n most recent records by grant date, ties broken by descending patent_id.

    An undersized corpus is returned whole, with a warning.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    ordered = sorted(records, key=lambda r: (r.grant_date, r.patent_id), reverse=True)
    if len(ordered) < n:
        logger.warning("corpus smaller than requested: %d < %d, keeping all", len(ordered), n)
        return ordered
    return ordered[:n]


def compute_proximity(
    records: Sequence[PatentRecord], domains: Sequence[Domain]
) -> ProximityTable:
    """Proximity as cosine similarity between domains' class-code count vectors.

    Component c of a domain's vector counts the domain's patents carrying
    class code c. A domain with no classified patents gets proximity 0 to
    every other domain (with a warning); self-proximity is fixed at 1.0.
    """
    if len(domains) < 2:
        raise ValueError("need at least 2 domains")
    domain_ids = [d.domain_id for d in domains]
    if len(set(domain_ids)) != len(domain_ids):
        raise ValueError("duplicate domain_id in domains")

    counts: dict[str, dict[str, int]] = {d: {} for d in domain_ids}
    for record in records:
        row = counts.get(record.domain_id)
        if row is None:
            continue
        for code in set(record.class_codes):
            row[code] = row.get(code, 0) + 1

    all_codes = sorted({code for row in counts.values() for code in row})
    vectors: dict[str, np.ndarray] = {}
    for d in domain_ids:
        vec = np.array([counts[d].get(code, 0) for code in all_codes], dtype=np.float64)
        if not vec.any():
            logger.warning("domain %s has no classified patents; proximity 0 to all others", d)
        vectors[d] = vec

    entries: dict[tuple[str, str], float] = {}
    for i, a in enumerate(domain_ids):
        entries[_pair_key(a, a)] = 1.0
        for b in domain_ids[i + 1 :]:
            score = cosine(vectors[a], vectors[b])
            entries[_pair_key(a, b)] = min(max(score, 0.0), 1.0)
    return ProximityTable(
        entries=entries,
        provenance=Provenance.COMPUTED,
        domain_ids=tuple(sorted(domain_ids)),
    )


def rank_domains(
    table: ProximityTable,
    target: str,
    domains: Mapping[str, Domain] | None = None,
) -> list[DomainRank]:
    """All non-target domains ordered by descending proximity to the target.

    Ranks start at 1; equal proximities fall back to domain_id order. The
    optional domains mapping supplies display names (defaults to the id).
    """
    if target not in table.domain_ids:
        raise DataError(f"unknown target domain {target!r}")
    others = [d for d in table.domain_ids if d != target]
    scored = [(d, table.lookup(target, d)) for d in others]
    scored.sort(key=lambda item: (-item[1], item[0]))
    ranks = []
    for position, (domain_id, proximity) in enumerate(scored, start=1):
        name = domains[domain_id].display_name if domains and domain_id in domains else domain_id
        ranks.append(
            DomainRank(domain_id=domain_id, display_name=name, rank=position, proximity=proximity)
        )
    return ranks


def corpus_sha256(path: str | Path) -> str:
    """Hex digest of a corpus file's bytes, recorded in manifests."""
    import hashlib

    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def domains_from_records(
    records: Iterable[PatentRecord], display_names: Mapping[str, str] | None = None
) -> list[Domain]:
    """Derive Domain objects from records, one per observed domain_id."""
    codes: dict[str, set[str]] = {}
    order: list[str] = []
    for r in records:
        if r.domain_id not in codes:
            codes[r.domain_id] = set()
            order.append(r.domain_id)
        codes[r.domain_id].update(r.class_codes)
    domains = []
    for d in order:
        name = display_names.get(d, d) if display_names else d
        domain_codes = tuple(sorted(codes[d])) or (d,)
        domains.append(Domain(domain_id=d, display_name=name, class_codes=domain_codes))
    return domains

"""Publication corpus: record parsing, validation, citation graph and a
seeded synthetic generator.

Corpus files hold one JSON object per line::

    {"id": "p1", "title": "...", "year": 2001,
     "venue": {"kind": "journal", "venue_id": "j3"},
     "authors": [{"author_id": "a7", "institution_id": "mit", "has_email": false}],
     "references": ["p0"]}

Any validation failure discards the whole record; nothing is repaired.
"""
from __future__ import annotations

import csv
import io
import json
import logging
import math
import random
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

log = logging.getLogger(__name__)

VENUE_KINDS = ("journal", "conference", "unknown")
YEAR_MIN, YEAR_MAX = 1000, 3000

_RECORD_FIELDS = frozenset({"id", "title", "year", "venue", "authors", "references"})
_VENUE_FIELDS = frozenset({"kind", "venue_id"})
_AUTHOR_FIELDS = frozenset({"author_id", "institution_id", "has_email"})


class ParseError(ValueError):
    """A corpus line that cannot become a valid :class:`PaperRecord`."""

    def __init__(self, reason: str, line_number: Optional[int] = None):
        self.reason = reason
        self.line_number = line_number
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(where + reason)


@dataclass(frozen=True)
class Venue:
    kind: str = "unknown"
    venue_id: Optional[str] = None


@dataclass(frozen=True)
class AuthorSlot:
    author_id: str
    position: int
    institution_id: Optional[str] = None
    has_email: bool = False


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    title: str
    year: int
    venue: Venue
    authors: Tuple[AuthorSlot, ...]
    references: Tuple[str, ...] = ()

    @property
    def n_authors(self) -> int:
        return len(self.authors)

    def author_ids(self) -> Tuple[str, ...]:
        return tuple(slot.author_id for slot in self.authors)

    def slot_of(self, author_id: str) -> Optional[AuthorSlot]:
        for slot in self.authors:
            if slot.author_id == author_id:
                return slot
        return None


@dataclass(frozen=True)
class ImpactFactorTable:
    """Journal impact factors keyed by ``(venue_id, year)``."""

    entries: Mapping[Tuple[str, int], float] = field(default_factory=dict)

    def __post_init__(self):
        for key, value in self.entries.items():
            if not math.isfinite(value) or value < 0:
                raise ValueError(f"impact factor for {key} must be finite and >= 0, got {value}")
        object.__setattr__(self, "entries", MappingProxyType(dict(self.entries)))

    def get(self, venue_id: Optional[str], year: int) -> Optional[float]:
        if venue_id is None:
            return None
        return self.entries.get((venue_id, year))

    def __len__(self) -> int:
        return len(self.entries)


def load_impact_factors(lines: Iterable[str]) -> ImpactFactorTable:
    """Read ``venue_id,year,impact_factor`` CSV text (header row required)."""
    reader = csv.DictReader(lines)
    expected = {"venue_id", "year", "impact_factor"}
    if reader.fieldnames is None or set(reader.fieldnames) != expected:
        raise ValueError(f"impact-factor header must be {sorted(expected)}, got {reader.fieldnames}")
    entries: Dict[Tuple[str, int], float] = {}
    for row in reader:
        key = (row["venue_id"], int(row["year"]))
        if key in entries:
            raise ValueError(f"duplicate impact factor for {key}")
        entries[key] = float(row["impact_factor"])
    return ImpactFactorTable(entries)


def dump_impact_factors(table: ImpactFactorTable) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["venue_id", "year", "impact_factor"])
    for (venue_id, year), value in sorted(table.entries.items()):
        writer.writerow([venue_id, year, repr(value)])
    return buf.getvalue()


# -- record parsing -----------------------------------------------------------

def _check_fields(obj: dict, allowed: FrozenSet[str], what: str, strict: bool) -> None:
    extra = set(obj) - allowed
    if not extra:
        return
    if strict:
        raise ParseError(f"unknown field(s) in {what}: {', '.join(sorted(extra))}")
    log.warning("ignoring unknown field(s) in %s: %s", what, ", ".join(sorted(extra)))


def _require(obj: dict, key: str, what: str):
    if key not in obj:
        raise ParseError(f"missing required field '{key}' in {what}")
    return obj[key]


def _nonempty_str(value, name: str) -> str:
    if not isinstance(value, str) or not value:
        raise ParseError(f"'{name}' must be a nonempty string")
    return value


def _optional_str(value, name: str) -> Optional[str]:
    if value is None:
        return None
    return _nonempty_str(value, name)


def parse_paper_record(line: str, *, strict: bool = True, line_number: Optional[int] = None) -> PaperRecord:
    """Parse and validate one corpus line.

    Raises :class:`ParseError` (carrying ``line_number``) on malformed JSON,
    missing or mistyped fields, an empty or duplicated author list, or bad
    references. Unknown fields are errors when ``strict`` and logged
    warnings otherwise.
    """
    try:
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"malformed syntax: {exc.msg} at column {exc.colno}") from None
        if not isinstance(obj, dict):
            raise ParseError("record must be a JSON object")
        return _record_from_obj(obj, strict)
    except ParseError as exc:
        if exc.line_number is None and line_number is not None:
            raise ParseError(exc.reason, line_number) from None
        raise


def _record_from_obj(obj: dict, strict: bool) -> PaperRecord:
    _check_fields(obj, _RECORD_FIELDS, "record", strict)
    paper_id = _nonempty_str(_require(obj, "id", "record"), "id")
    title = _require(obj, "title", "record")
    if not isinstance(title, str):
        raise ParseError("'title' must be a string")
    year = _require(obj, "year", "record")
    if isinstance(year, bool) or not isinstance(year, int):
        raise ParseError("'year' must be an integer")
    if not YEAR_MIN <= year <= YEAR_MAX:
        raise ParseError(f"'year' {year} outside [{YEAR_MIN}, {YEAR_MAX}]")

    venue_obj = _require(obj, "venue", "record")
    if not isinstance(venue_obj, dict):
        raise ParseError("'venue' must be an object")
    _check_fields(venue_obj, _VENUE_FIELDS, "venue", strict)
    kind = _require(venue_obj, "kind", "venue")
    if kind not in VENUE_KINDS:
        raise ParseError(f"venue kind must be one of {VENUE_KINDS}, got {kind!r}")
    venue = Venue(kind, _optional_str(venue_obj.get("venue_id"), "venue_id"))

    raw_authors = _require(obj, "authors", "record")
    if not isinstance(raw_authors, list):
        raise ParseError("'authors' must be a list")
    if not raw_authors:
        raise ParseError("empty author list")
    slots = []
    seen = set()
    for position, a in enumerate(raw_authors, start=1):
        if not isinstance(a, dict):
            raise ParseError(f"author {position} must be an object")
        _check_fields(a, _AUTHOR_FIELDS, f"author {position}", strict)
        author_id = _nonempty_str(_require(a, "author_id", f"author {position}"), "author_id")
        if author_id in seen:
            raise ParseError(f"duplicate author '{author_id}'")
        seen.add(author_id)
        has_email = a.get("has_email", False)
        if not isinstance(has_email, bool):
            raise ParseError("'has_email' must be a boolean")
        slots.append(AuthorSlot(author_id, position,
                                _optional_str(a.get("institution_id"), "institution_id"), has_email))

    refs = _require(obj, "references", "record")
    if not isinstance(refs, list) or not all(isinstance(r, str) and r for r in refs):
        raise ParseError("'references' must be a list of nonempty strings")
    if len(set(refs)) != len(refs):
        raise ParseError("duplicate reference")
    if paper_id in refs:
        raise ParseError("paper references itself")

    return PaperRecord(paper_id, title, year, venue, tuple(slots), tuple(refs))


def serialize_paper_record(paper: PaperRecord) -> str:
    obj = {
        "id": paper.paper_id,
        "title": paper.title,
        "year": paper.year,
        "venue": {"kind": paper.venue.kind, "venue_id": paper.venue.venue_id},
        "authors": [
            {"author_id": s.author_id, "institution_id": s.institution_id, "has_email": s.has_email}
            for s in paper.authors
        ],
        "references": list(paper.references),
    }
    return json.dumps(obj, ensure_ascii=False, sort_keys=True)


# -- corpus -------------------------------------------------------------------

@dataclass
class IngestReport:
    accepted: int = 0
    dropped: List[Tuple[int, str]] = field(default_factory=list)
    dangling_references: int = 0

    @property
    def total(self) -> int:
        return self.accepted + len(self.dropped)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "dropped": [{"line": n, "reason": r} for n, r in self.dropped],
            "dangling_references": self.dangling_references,
        }


@dataclass(frozen=True)
class Corpus:
    """Immutable snapshot of accepted papers and their resolved citations.

    ``citations[p]`` lists the in-corpus papers citing ``p`` in input order.
    """

    papers: Mapping[str, PaperRecord]
    citations: Mapping[str, Tuple[str, ...]]
    institutions: Mapping[str, FrozenSet[str]]
    impact_factors: ImpactFactorTable = field(default_factory=ImpactFactorTable)

    @cached_property
    def papers_by_institution(self) -> Mapping[str, Tuple[str, ...]]:
        index: Dict[str, List[str]] = {}
        for pid, paper in self.papers.items():
            for inst in dict.fromkeys(s.institution_id for s in paper.authors if s.institution_id):
                index.setdefault(inst, []).append(pid)
        return MappingProxyType({k: tuple(v) for k, v in index.items()})

    @property
    def n_edges(self) -> int:
        return sum(len(c) for c in self.citations.values())


def build_corpus(papers: Sequence[PaperRecord], jif: Optional[ImpactFactorTable] = None) -> Tuple[Corpus, int]:
    """Index already-validated papers; returns the corpus and the dangling count.

    Paper ids must be unique.
    """
    by_id: Dict[str, PaperRecord] = {}
    for p in papers:
        if p.paper_id in by_id:
            raise ValueError(f"duplicate paper id {p.paper_id!r}")
        by_id[p.paper_id] = p
    citations: Dict[str, List[str]] = {pid: [] for pid in by_id}
    dangling = 0
    for p in by_id.values():
        for ref in p.references:
            if ref in citations:
                citations[ref].append(p.paper_id)
            else:
                dangling += 1
    members: Dict[str, set] = {}
    for p in by_id.values():
        for s in p.authors:
            if s.institution_id is not None:
                members.setdefault(s.institution_id, set()).add(s.author_id)
    corpus = Corpus(
        papers=MappingProxyType(by_id),
        citations=MappingProxyType({k: tuple(v) for k, v in citations.items()}),
        institutions=MappingProxyType({k: frozenset(v) for k, v in members.items()}),
        impact_factors=jif if jif is not None else ImpactFactorTable(),
    )
    return corpus, dangling


def load_corpus(paper_stream: Iterable[str], jif: Optional[ImpactFactorTable] = None,
                *, strict: bool = True) -> Tuple[Corpus, IngestReport]:
    """Parse a line stream, dropping invalid records, and resolve citations.

    Whitespace-only lines are skipped and not counted as records. A record
    whose id was already accepted is dropped as ``duplicate id``.
    References to ids outside the accepted set are counted as dangling.
    """
    report = IngestReport()
    accepted: List[PaperRecord] = []
    seen = set()
    for line_number, line in enumerate(paper_stream, start=1):
        if not line.strip():
            continue
        try:
            paper = parse_paper_record(line, strict=strict, line_number=line_number)
        except ParseError as exc:
            report.dropped.append((line_number, exc.reason))
            continue
        if paper.paper_id in seen:
            report.dropped.append((line_number, "duplicate id"))
            continue
        seen.add(paper.paper_id)
        accepted.append(paper)
    corpus, report.dangling_references = build_corpus(accepted, jif)
    report.accepted = len(accepted)
    return corpus, report


def institution_authors(corpus: Corpus, inst: str) -> FrozenSet[str]:
    return corpus.institutions.get(inst, frozenset())


# -- synthetic corpora --------------------------------------------------------

@dataclass(frozen=True)
class SynthParams:
    n_papers: int = 200
    n_authors: int = 100
    n_institutions: int = 10
    mean_team_size: float = 3.0
    self_cite_rate: float = 0.2
    reference_count_range: Tuple[int, int] = (0, 8)
    journal_fraction: float = 0.4
    conference_fraction: float = 0.35
    n_venues: int = 20
    year_range: Tuple[int, int] = (1970, 2012)

    def validate(self) -> None:
        if self.n_papers < 0:
            raise ValueError("n_papers must be >= 0")
        if self.n_authors < 1 or self.n_institutions < 1 or self.n_venues < 1:
            raise ValueError("n_authors, n_institutions and n_venues must be >= 1")
        if not 1 <= self.mean_team_size <= self.n_authors:
            raise ValueError(f"mean_team_size {self.mean_team_size} infeasible for {self.n_authors} authors")
        for name in ("self_cite_rate", "journal_fraction", "conference_fraction"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if self.journal_fraction + self.conference_fraction > 1.0:
            raise ValueError("journal_fraction + conference_fraction must be <= 1")
        lo, hi = self.reference_count_range
        if not 0 <= lo <= hi:
            raise ValueError("reference_count_range must satisfy 0 <= lo <= hi")
        y0, y1 = self.year_range
        if not YEAR_MIN <= y0 <= y1 <= YEAR_MAX:
            raise ValueError("year_range outside the valid year window")


def _team_size(rng: random.Random, params: SynthParams) -> int:
    # 1 + Poisson(mean - 1), capped at the author pool
    lam = params.mean_team_size - 1.0
    extra, p, limit = 0, rng.random(), math.exp(-lam)
    while p > limit:
        extra += 1
        p *= rng.random()
    return min(1 + extra, params.n_authors)


def _synth_papers(params: SynthParams, seed: int) -> List[PaperRecord]:
    params.validate()
    rng = random.Random(seed)
    authors = [f"a{i:05d}" for i in range(params.n_authors)]
    insts = [f"inst{i:03d}" for i in range(params.n_institutions)]
    home = {a: insts[i % len(insts)] if i < len(insts) else rng.choice(insts)
            for i, a in enumerate(authors)}
    # a few authors hold a second affiliation used on some of their papers
    second = {a: rng.choice(insts) for a in authors if rng.random() < 0.05}
    y0, y1 = params.year_range

    papers: List[PaperRecord] = []
    member_sets: List[FrozenSet[str]] = []
    by_author: Dict[str, List[int]] = {}
    for idx in range(params.n_papers):
        team = rng.sample(authors, _team_size(rng, params))
        slots = []
        for pos, a in enumerate(team, start=1):
            inst = second[a] if a in second and rng.random() < 0.5 else home[a]
            email = rng.random() < (0.5 if pos == len(team) else 0.1)
            slots.append(AuthorSlot(a, pos, inst, email))
        u = rng.random()
        if u < params.journal_fraction:
            venue = Venue("journal", f"j{rng.randrange(params.n_venues):02d}")
        elif u < params.journal_fraction + params.conference_fraction:
            venue = Venue("conference", f"c{rng.randrange(params.n_venues):02d}")
        else:
            venue = Venue("unknown", None)
        year = y0 + (y1 - y0) * idx // max(params.n_papers - 1, 1)

        team_set = frozenset(team)
        refs: List[int] = []
        lo, hi = params.reference_count_range
        want = min(rng.randint(lo, hi), idx)
        for _ in range(want):
            if rng.random() < params.self_cite_rate:
                pool = by_author.get(rng.choice(team), [])
                choice = rng.choice(pool) if pool else None
                if choice is not None and choice in refs:
                    choice = None
            else:
                choice = None
                for _attempt in range(20):
                    cand = rng.randrange(idx)
                    if cand not in refs and not (member_sets[cand] & team_set):
                        choice = cand
                        break
            if choice is not None:
                refs.append(choice)
        refs.sort()
        papers.append(PaperRecord(f"p{idx:06d}", f"Synthetic paper {idx}", year, venue,
                                  tuple(slots), tuple(papers[r].paper_id for r in refs)))
        member_sets.append(team_set)
        for a in team:
            by_author.setdefault(a, []).append(idx)
    return papers


def gen_synthetic_corpus(params: SynthParams, seed: int) -> List[str]:
    """Deterministic corpus lines for ``(params, seed)``.

    References only point at earlier papers, so the citation graph is acyclic.
    With probability ``self_cite_rate`` a reference goes to an earlier paper of
    one of the citing team's authors; otherwise it goes to a paper sharing no
    author with the citing team (skipped if none is found quickly).
    """
    return [serialize_paper_record(p) for p in _synth_papers(params, seed)]


def gen_synthetic_impact_factors(params: SynthParams, seed: int) -> ImpactFactorTable:
    """Impact factors for every synthetic journal and year, log-normal around 1.5."""
    params.validate()
    rng = random.Random(f"jif-{seed}")
    y0, y1 = params.year_range
    entries = {}
    for v in range(params.n_venues):
        base = rng.lognormvariate(math.log(1.5), 0.6)
        for year in range(y0, y1 + 1):
            entries[(f"j{v:02d}", year)] = round(base * rng.uniform(0.8, 1.2), 3)
    return ImpactFactorTable(entries)

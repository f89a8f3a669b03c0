"""Institutional ac, aac, ah and aj indices with self-citation exclusion.

When paper B cites paper A, author ``a`` of A is credited with
``credit(a, A) * credit(b, B)`` for every author ``b != a`` of B. Summed over
``b`` this is ``credit(a, A) * (1 - credit(a, B))``, which is the form used
here; ``credit(a, B)`` is 0 when ``a`` did not write B.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, Mapping, Tuple

from .corpus import Corpus, PaperRecord, institution_authors
from .credit import credit_vector

log = logging.getLogger(__name__)

AJ_YEAR_MIN = 1975


@dataclass(frozen=True)
class AhResult:
    h_int: int
    h_real: float


@dataclass(frozen=True)
class WeightedCitationList:
    """Strictly positive weighted citation totals, keyed by paper id."""

    per_paper: Mapping[str, float] = field(default_factory=dict)

    def values(self) -> list:
        return list(self.per_paper.values())

    def __len__(self) -> int:
        return len(self.per_paper)


@dataclass(frozen=True)
class InstitutionIndices:
    institution_id: str
    ac: float
    aac: float
    ah: AhResult
    aj: float
    n_authors: int
    n_papers: int


def _credits(paper: PaperRecord) -> Dict[str, float]:
    return dict(zip(paper.author_ids(), credit_vector(paper).shares))


def _credit_on_paper(paper: PaperRecord, author: str) -> float:
    slot = paper.slot_of(author)
    if slot is None:
        raise ValueError(f"author {author!r} is not on paper {paper.paper_id!r}")
    return credit_vector(paper).shares[slot.position - 1]


def citation_weight(corpus: Corpus, cited: str, citing: str, author: str) -> float:
    """Self-citation-excluded weight of the ``citing -> cited`` edge for ``author``."""
    own = _credit_on_paper(corpus.papers[cited], author)
    citing_paper = corpus.papers[citing]
    overlap = _credit_on_paper(citing_paper, author) if citing_paper.slot_of(author) else 0.0
    return own * (1.0 - overlap)


def author_paper_citations(corpus: Corpus, author: str, paper: str) -> float:
    """The author's self-citation-excluded share of all citations to ``paper``."""
    own = _credit_on_paper(corpus.papers[paper], author)
    total = 0.0
    for citing in corpus.citations[paper]:
        total += own * (1.0 - _credits(corpus.papers[citing]).get(author, 0.0))
    return total


def institution_paper_citations(corpus: Corpus, inst: str, paper: str) -> float:
    record = corpus.papers[paper]
    return sum(author_paper_citations(corpus, s.author_id, paper)
               for s in record.authors if s.institution_id == inst)


def ac_index(corpus: Corpus, inst: str) -> Tuple[float, WeightedCitationList]:
    """Total pure citation share of ``inst`` plus its positive per-paper values."""
    values = {}
    for pid in corpus.papers_by_institution.get(inst, ()):
        v = institution_paper_citations(corpus, inst, pid)
        if v > 0:
            values[pid] = v
    return math.fsum(values.values()), WeightedCitationList(values)


def aac_index(ac: float, n_authors: int) -> float:
    if n_authors < 0:
        raise ValueError("n_authors must be >= 0")
    return ac / n_authors if n_authors else 0.0


def ah_from_values(values: Iterable[float]) -> AhResult:
    """Real-valued h statistic of weighted citation values.

    ``h_int`` is the largest h with at least h values >= h. ``h_real`` is the
    largest x with at least ``max(1, floor(x))`` values >= x. When that
    supremum is the open end ``h_int + 1`` it is reported as the largest
    float below it, so ``floor(h_real) == h_int`` always holds. Empty input
    gives ``(0, 0.0)``.
    """
    vs = sorted((float(v) for v in values), reverse=True)
    for v in vs:
        if not math.isfinite(v) or v < 0:
            raise ValueError(f"weighted citation values must be finite and >= 0, got {v}")
    if not vs:
        return AhResult(0, 0.0)
    h = 0
    while h < len(vs) and vs[h] >= h + 1:
        h += 1
    if h == 0:
        return AhResult(0, vs[0])
    top = vs[h - 1]
    if top >= h + 1:
        top = math.nextafter(h + 1, 0.0)
    return AhResult(h, top)


def ah_index(corpus: Corpus, inst: str) -> AhResult:
    return ah_from_values(ac_index(corpus, inst)[1].values())


def _aj_papers(corpus: Corpus, inst: str, year_min: int) -> Tuple[float, int]:
    total, missing = 0.0, 0
    for pid in corpus.papers_by_institution.get(inst, ()):
        paper = corpus.papers[pid]
        if paper.venue.kind != "journal" or paper.year < year_min:
            continue
        jif = corpus.impact_factors.get(paper.venue.venue_id, paper.year)
        if jif is None:
            missing += 1
            continue
        shares = credit_vector(paper).shares
        total += jif * math.fsum(shares[s.position - 1] for s in paper.authors if s.institution_id == inst)
    return total, missing


def aj_index(corpus: Corpus, inst: str, year_min: int = AJ_YEAR_MIN) -> float:
    """Impact-factor-weighted credit over the institution's journal papers from ``year_min`` on."""
    total, missing = _aj_papers(corpus, inst, year_min)
    if missing:
        log.warning("aj-index for %s: %d journal paper(s) without an impact factor", inst, missing)
    return total


def compute_all(corpus: Corpus, year_min_aj: int = AJ_YEAR_MIN) -> Dict[str, InstitutionIndices]:
    """All indices for every institution, in one pass over the citation edges."""
    credits = {pid: _credits(p) for pid, p in corpus.papers.items()}
    per_paper: Dict[str, Dict[str, float]] = {inst: {} for inst in corpus.institutions}
    for pid, citers in corpus.citations.items():
        if not citers:
            continue
        own = credits[pid]
        slots = [(s.author_id, s.institution_id) for s in corpus.papers[pid].authors if s.institution_id]
        for citing in citers:
            other = credits[citing]
            for author, inst in slots:
                w = own[author] * (1.0 - other.get(author, 0.0))
                bucket = per_paper[inst]
                bucket[pid] = bucket.get(pid, 0.0) + w

    result: Dict[str, InstitutionIndices] = {}
    missing_jif = 0
    for inst in sorted(corpus.institutions):
        values = [v for v in per_paper[inst].values() if v > 0]
        ac = math.fsum(values)
        n_authors = len(institution_authors(corpus, inst))
        aj, missing = _aj_papers(corpus, inst, year_min_aj)
        missing_jif += missing
        result[inst] = InstitutionIndices(
            institution_id=inst,
            ac=ac,
            aac=aac_index(ac, n_authors),
            ah=ah_from_values(values),
            aj=aj,
            n_authors=n_authors,
            n_papers=len(corpus.papers_by_institution.get(inst, ())),
        )
    if missing_jif:
        log.warning("%d institution journal paper slot(s) lacked an impact factor; counted as 0", missing_jif)
    return result

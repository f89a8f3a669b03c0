import json
from fractions import Fraction
from functools import lru_cache
from pathlib import Path

import pytest

from axirank.corpus import load_corpus

DATA = Path(__file__).parent / "data"


def paper_line(pid, authors, refs=(), year=2000, kind="journal", venue_id="j1", emails=()):
    """One corpus line; ``authors`` holds "author@inst" strings (inst optional)."""
    slots = []
    for pos, spec in enumerate(authors, start=1):
        aid, _, inst = spec.partition("@")
        slots.append({"author_id": aid, "institution_id": inst or None, "has_email": pos in emails})
    return json.dumps({"id": pid, "title": f"Paper {pid}", "year": year,
                       "venue": {"kind": kind, "venue_id": venue_id},
                       "authors": slots, "references": list(refs)})


def corpus_of(*lines, jif=None):
    corpus, report = load_corpus(lines, jif)
    assert not report.dropped, report.dropped
    return corpus


# -- independent oracles ---------------------------------------------------------

@lru_cache(maxsize=None)
def oracle_plain(k, n):
    return Fraction(1, n) * sum(Fraction(1, j) for j in range(k, n + 1))


@lru_cache(maxsize=None)
def oracle_corresponding(k, n):
    if k in (1, n):
        return Fraction(1, n - 1) * sum(Fraction(1, j + 1) for j in range(1, n))
    return Fraction(1, n - 1) * sum(Fraction(1, j + 1) for j in range(k, n))


def oracle_credit(paper, author):
    """Credit of ``author`` on a PaperRecord, straight from the closed forms."""
    n = len(paper.authors)
    for slot in paper.authors:
        if slot.author_id == author:
            if n >= 2 and paper.authors[-1].has_email:
                return float(oracle_corresponding(slot.position, n))
            return float(oracle_plain(slot.position, n))
    return 0.0


def oracle_ah(values):
    """Max x with >= max(1, floor(x)) values >= x, scanning every candidate endpoint."""
    import math
    vs = [float(v) for v in values]
    if not vs:
        return 0, 0.0
    cands = set(vs)
    for k in range(1, len(vs) + 2):
        cands.add(float(k))
        cands.add(math.nextafter(float(k), 0.0))
    best = None
    for x in cands:
        need = max(1, math.floor(x))
        if sum(1 for v in vs if v >= x) >= need and (best is None or x > best):
            best = x
    if best is None:
        return 0, 0.0
    return math.floor(best), best


def oracle_institution_values(corpus):
    """Literal pair loop: for every (paper, citer, author at inst, other citer author) triple."""
    out = {}
    for pid, paper in corpus.papers.items():
        for citing in corpus.citations[pid]:
            cp = corpus.papers[citing]
            for slot in paper.authors:
                if slot.institution_id is None:
                    continue
                for other in cp.authors:
                    if other.author_id == slot.author_id:
                        continue
                    w = oracle_credit(paper, slot.author_id) * oracle_credit(cp, other.author_id)
                    bucket = out.setdefault(slot.institution_id, {})
                    bucket[pid] = bucket.get(pid, 0.0) + w
    return out


def oracle_kendall(a, b):
    import math
    n = len(a)
    c = d = ta = tb = 0
    for i in range(n):
        for j in range(i + 1, n):
            x, y = a[i] - a[j], b[i] - b[j]
            if x == 0:
                ta += 1
            if y == 0:
                tb += 1
            if x * y > 0:
                c += 1
            elif x * y < 0:
                d += 1
    n0 = n * (n - 1) // 2
    return (c - d) / math.sqrt((n0 - ta) * (n0 - tb))


def oracle_pearson(a, b):
    import math
    n = len(a)
    ma, mb = sum(a) / n, sum(b) / n
    sab = sum((x - ma) * (y - mb) for x, y in zip(a, b))
    saa = sum((x - ma) ** 2 for x in a)
    sbb = sum((y - mb) ** 2 for y in b)
    return sab / math.sqrt(saa * sbb)


def oracle_avg_ranks(values):
    """Ascending tie-averaged ranks by counting, O(n^2)."""
    out = []
    for v in values:
        less = sum(1 for w in values if w < v)
        eq = sum(1 for w in values if w == v)
        out.append(less + (eq + 1) / 2)
    return out


@pytest.fixture
def hand_corpus():
    """A=[a@I, b@J] cited by disjoint C; D=[e@I] uncited; F=[g@K] cited by A."""
    return corpus_of(
        paper_line("A", ["a@I", "b@J"], refs=["F"]),
        paper_line("C", ["c@K"], refs=["A"]),
        paper_line("D", ["e@I"]),
        paper_line("F", ["g@K"]),
    )

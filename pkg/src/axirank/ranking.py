"""Ranking tables and rank correlation between ranking systems."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import groupby
from typing import Dict, Iterable, List, Mapping, NamedTuple, Sequence, Tuple

import numpy as np


class RankingError(ValueError):
    pass


@dataclass(frozen=True)
class RankEntry:
    institution_id: str
    value: float
    rank: int
    avg_rank: float


@dataclass(frozen=True)
class RankingTable:
    index_name: str
    entries: Tuple[RankEntry, ...]

    def ranks(self) -> Dict[str, int]:
        return {e.institution_id: e.rank for e in self.entries}

    def __len__(self) -> int:
        return len(self.entries)


@dataclass(frozen=True)
class ExternalRanking:
    source_name: str
    ranks: Mapping[str, int]


def load_external_ranking(lines: Iterable[str], source_name: str) -> ExternalRanking:
    """Read ``institution_id,rank`` CSV text; unranked institutions are simply absent."""
    reader = csv.DictReader(lines)
    if reader.fieldnames is None or list(reader.fieldnames) != ["institution_id", "rank"]:
        raise ValueError(f"ranking header must be institution_id,rank; got {reader.fieldnames}")
    ranks: Dict[str, int] = {}
    for row in reader:
        inst = row["institution_id"]
        if inst in ranks:
            raise ValueError(f"{source_name}: duplicate institution {inst!r}")
        rank = int(row["rank"])
        if rank < 1:
            raise ValueError(f"{source_name}: rank for {inst!r} must be >= 1")
        ranks[inst] = rank
    return ExternalRanking(source_name, ranks)


def _average_ranks(keys: Sequence[float]) -> List[float]:
    """1-based ranks of ``keys`` in ascending order, ties sharing the mean position."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    out = [0.0] * len(keys)
    pos = 0
    for _, grp in groupby(order, key=lambda i: keys[i]):
        members = list(grp)
        mean = pos + (len(members) + 1) / 2
        for i in members:
            out[i] = mean
        pos += len(members)
    return out


def rank_by(values: Mapping[str, float], index_name: str = "") -> RankingTable:
    """Rank institutions by descending value.

    Exact ties share the competition rank (1, 2, 2, 4) and the averaged rank
    (2.5, 2.5); within a tie institutions are listed by id.
    """
    for inst, v in values.items():
        if not math.isfinite(v):
            raise RankingError(f"non-finite value for {inst!r}: {v}")
    items = sorted(values.items(), key=lambda kv: (-kv[1], kv[0]))
    entries = []
    pos = 0
    for value, grp in groupby(items, key=lambda kv: kv[1]):
        members = [inst for inst, _ in grp]
        avg = pos + (len(members) + 1) / 2
        entries.extend(RankEntry(inst, value, pos + 1, avg) for inst in members)
        pos += len(members)
    return RankingTable(index_name, tuple(entries))


class AlignedRanks(NamedTuple):
    institutions: List[str]
    ranks_a: List[float]
    ranks_b: List[float]


def align(ranks_a: Mapping[str, float], ranks_b: Mapping[str, float]) -> AlignedRanks:
    """Restrict two rank maps (1 = best) to their common institutions and re-rank each."""
    common = sorted(set(ranks_a) & set(ranks_b))
    if len(common) < 2:
        raise RankingError(f"only {len(common)} institution(s) ranked in both lists; need >= 2")
    return AlignedRanks(common,
                        _average_ranks([ranks_a[i] for i in common]),
                        _average_ranks([ranks_b[i] for i in common]))


def _check_pair(a: Sequence[float], b: Sequence[float]) -> None:
    if len(a) != len(b):
        raise RankingError(f"rank vectors differ in length: {len(a)} vs {len(b)}")
    if len(a) < 2:
        raise RankingError("need at least 2 ranked items")


def spearman(ranks_a: Sequence[float], ranks_b: Sequence[float]) -> float:
    """Pearson correlation of two rank vectors (Spearman's rho when ties are averaged).

    Sums are exact, so perfectly (anti-)aligned vectors give exactly +-1.
    """
    _check_pair(ranks_a, ranks_b)
    xa = [Fraction(v) for v in ranks_a]
    xb = [Fraction(v) for v in ranks_b]
    n = len(xa)
    ma, mb = sum(xa) / n, sum(xb) / n
    sab = sum((x - ma) * (y - mb) for x, y in zip(xa, xb))
    saa = sum((x - ma) ** 2 for x in xa)
    sbb = sum((y - mb) ** 2 for y in xb)
    if saa == 0 or sbb == 0:
        raise RankingError("zero variance in a rank vector")
    return math.copysign(math.sqrt(sab * sab / (saa * sbb)), sab)


def kendall_tau_b(ranks_a: Sequence[float], ranks_b: Sequence[float]) -> float:
    """Kendall's tau-b with per-side tie corrections."""
    _check_pair(ranks_a, ranks_b)
    a = np.asarray(ranks_a, dtype=float)
    b = np.asarray(ranks_b, dtype=float)
    iu = np.triu_indices(len(a), k=1)
    sa = np.sign(a[:, None] - a[None, :])[iu].astype(np.int64)
    sb = np.sign(b[:, None] - b[None, :])[iu].astype(np.int64)
    s = int(np.dot(sa, sb))  # concordant minus discordant
    n0 = len(sa)
    untied_a = n0 - int(np.count_nonzero(sa == 0))
    untied_b = n0 - int(np.count_nonzero(sb == 0))
    if untied_a == 0 or untied_b == 0:
        raise RankingError("all pairs tied in a rank vector")
    return math.copysign(math.sqrt(Fraction(s * s, untied_a * untied_b)), s)


@dataclass(frozen=True)
class CorrelationReport:
    labels: Tuple[str, ...]
    spearman: Tuple[Tuple[float, ...], ...]
    kendall: Tuple[Tuple[float, ...], ...]
    n_common: Tuple[Tuple[int, ...], ...]

    def to_dict(self) -> dict:
        return {
            "labels": list(self.labels),
            "spearman": [list(r) for r in self.spearman],
            "kendall": [list(r) for r in self.kendall],
            "n_common": [list(r) for r in self.n_common],
        }


def correlation_report(tables: Sequence[Tuple[str, Mapping[str, float]]]) -> CorrelationReport:
    """Pairwise Spearman and Kendall tau-b over labelled rank maps."""
    if len(tables) < 2:
        raise RankingError("need at least 2 rankings to compare")
    labels = [label for label, _ in tables]
    if len(set(labels)) != len(labels):
        raise RankingError(f"duplicate ranking labels: {labels}")
    k = len(tables)
    rho = [[1.0] * k for _ in range(k)]
    tau = [[1.0] * k for _ in range(k)]
    common = [[len(t)] * k for _, t in tables]
    for i in range(k):
        for j in range(i + 1, k):
            try:
                aligned = align(tables[i][1], tables[j][1])
                rho[i][j] = rho[j][i] = spearman(aligned.ranks_a, aligned.ranks_b)
                tau[i][j] = tau[j][i] = kendall_tau_b(aligned.ranks_a, aligned.ranks_b)
            except RankingError as exc:
                raise RankingError(f"{labels[i]} vs {labels[j]}: {exc}") from None
            common[i][j] = common[j][i] = len(aligned.institutions)
    return CorrelationReport(tuple(labels),
                             tuple(map(tuple, rho)), tuple(map(tuple, tau)), tuple(map(tuple, common)))

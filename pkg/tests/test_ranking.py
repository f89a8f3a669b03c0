import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from axirank.ranking import (RankingError, align, correlation_report, kendall_tau_b,
                             load_external_ranking, rank_by, spearman)
from conftest import oracle_avg_ranks, oracle_kendall, oracle_pearson


def _ranks(table):
    return {e.institution_id: (e.rank, e.avg_rank) for e in table.entries}


def test_rank_by_strict():
    t = rank_by({"A": 3, "B": 1, "C": 2})
    assert [e.institution_id for e in t.entries] == ["A", "C", "B"]
    assert _ranks(t) == {"A": (1, 1.0), "C": (2, 2.0), "B": (3, 3.0)}


def test_rank_by_ties():
    t = rank_by({"B": 5, "A": 5, "C": 1})
    assert [e.institution_id for e in t.entries] == ["A", "B", "C"]
    assert _ranks(t) == {"A": (1, 1.5), "B": (1, 1.5), "C": (3, 3.0)}
    t = rank_by({"w": 9, "x": 4, "y": 4, "z": 1})
    assert [e.rank for e in t.entries] == [1, 2, 2, 4]
    assert [e.avg_rank for e in t.entries] == [1.0, 2.5, 2.5, 4.0]


def test_rank_by_single_and_nonfinite():
    assert rank_by({"only": 0.0}).entries[0].rank == 1
    with pytest.raises(RankingError):
        rank_by({"A": float("nan")})


@given(st.dictionaries(st.text("abcdefgh", min_size=1, max_size=3),
                       st.integers(0, 5).map(float), min_size=1, max_size=30), st.randoms())
def test_rank_by_invariants(values, rnd):
    t = rank_by(values)
    n = len(values)
    assert sum(e.avg_rank for e in t.entries) == n * (n + 1) / 2
    vals = [e.value for e in t.entries]
    assert vals == sorted(vals, reverse=True)
    for e in t.entries:
        assert e.rank == 1 + sum(1 for v in values.values() if v > e.value)
    items = list(values.items())
    rnd.shuffle(items)
    assert rank_by(dict(items)) == t


def test_align_identical_and_partial():
    a = {f"i{k}": k for k in range(1, 6)}
    res = align(a, dict(a))
    assert res.ranks_a == res.ranks_b == [1.0, 2.0, 3.0, 4.0, 5.0]
    a = {f"i{k:02d}": k for k in range(1, 11)}
    b = {k: v for k, v in a.items() if k not in ("i03", "i07")}
    res = align(a, b)
    assert len(res.institutions) == 8
    assert sorted(res.ranks_a) == sorted(res.ranks_b) == [float(k) for k in range(1, 9)]


def test_align_reranks_ties():
    # USNWR-style repeated ranks survive as averaged ties
    a = {"p": 1, "q": 1, "r": 1, "s": 4, "t": 5}
    b = {"p": 2, "q": 1, "r": 5, "s": 3, "t": 4}
    res = align(a, b)
    assert res.institutions == ["p", "q", "r", "s", "t"]
    assert res.ranks_a == [2.0, 2.0, 2.0, 4.0, 5.0]
    assert res.ranks_b == [2.0, 1.0, 5.0, 3.0, 4.0]


def test_align_disjoint():
    with pytest.raises(RankingError):
        align({"a": 1, "b": 2}, {"c": 1, "d": 2})
    with pytest.raises(RankingError):
        align({"a": 1, "b": 2}, {"a": 1})


def test_spearman_examples():
    assert spearman([1, 2, 3, 4], [1, 2, 3, 4]) == 1.0
    assert spearman([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0
    assert spearman([1, 2, 3], [1, 3, 2]) == pytest.approx(1 - 6 * 2 / (3 * 8), abs=1e-15)
    with pytest.raises(RankingError):
        spearman([1, 1, 1], [1, 2, 3])
    with pytest.raises(RankingError):
        spearman([1, 2], [1, 2, 3])


def test_kendall_examples():
    assert kendall_tau_b([1, 2, 3], [1, 2, 3]) == 1.0
    assert kendall_tau_b([1, 2, 3], [1, 3, 2]) == pytest.approx(1 / 3, abs=1e-15)
    assert kendall_tau_b([1, 2, 3, 4], [4, 3, 2, 1]) == -1.0
    with pytest.raises(RankingError):
        kendall_tau_b([2, 2, 2], [1, 2, 3])


tied_pairs = st.integers(2, 40).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 6), min_size=n, max_size=n),
    st.lists(st.integers(0, 6), min_size=n, max_size=n)))


@given(tied_pairs)
@settings(max_examples=200)
def test_coefficients_match_bruteforce(pair):
    a, b = (oracle_avg_ranks(x) for x in pair)
    if len(set(a)) < 2 or len(set(b)) < 2:
        return
    rho, tau = spearman(a, b), kendall_tau_b(a, b)
    assert rho == pytest.approx(oracle_pearson(a, b), abs=1e-12)
    assert rho == pytest.approx(np.corrcoef(a, b)[0, 1], abs=1e-12)
    assert tau == pytest.approx(oracle_kendall(a, b), abs=1e-12)
    assert spearman(b, a) == rho and kendall_tau_b(b, a) == tau
    assert -1.0 <= rho <= 1.0 and -1.0 <= tau <= 1.0


@given(st.permutations(list(range(1, 15))))
def test_untied_spearman_closed_form(perm):
    a = list(range(1, 15))
    n = len(a)
    d2 = sum((x - y) ** 2 for x, y in zip(a, perm))
    assert spearman(a, perm) == pytest.approx(1 - 6 * d2 / (n * (n * n - 1)), abs=1e-12)


@given(st.lists(st.integers(-1000, 1000), min_size=3, max_size=25, unique=True),
       st.lists(st.integers(0, 8), min_size=25, max_size=25))
def test_rank_basis_invariance(xs, ys):
    ys = ys[:len(xs)]
    ids = [f"i{k}" for k in range(len(xs))]
    base_a = rank_by(dict(zip(ids, xs))).ranks()
    base_b = rank_by(dict(zip(ids, ys))).ranks()
    warped_a = rank_by({i: x ** 3 + 7 * x for i, x in zip(ids, xs)}).ranks()
    if len(set(ys)) < 2:
        return
    r1 = align(base_a, base_b)
    r2 = align(warped_a, base_b)
    assert spearman(r1.ranks_a, r1.ranks_b) == spearman(r2.ranks_a, r2.ranks_b)
    assert kendall_tau_b(r1.ranks_a, r1.ranks_b) == kendall_tau_b(r2.ranks_a, r2.ranks_b)


def test_correlation_report_identical():
    t = {"a": 1, "b": 2, "c": 3}
    rep = correlation_report([("x", t), ("y", dict(t))])
    assert rep.spearman == ((1.0, 1.0), (1.0, 1.0))
    assert rep.kendall == ((1.0, 1.0), (1.0, 1.0))
    assert rep.n_common == ((3, 3), (3, 3))


def test_correlation_report_three_tables_vs_oracle():
    rng = random.Random(10)
    insts = [f"u{k}" for k in range(10)]
    tables = []
    for label in ("p", "q", "r"):
        scores = {i: rng.choice([1.0, 2.0, 3.0, 4.0, 5.0, 6.0]) for i in insts}
        tables.append((label, rank_by(scores).ranks()))
    rep = correlation_report(tables)
    for i in range(3):
        assert rep.spearman[i][i] == rep.kendall[i][i] == 1.0
        for j in range(3):
            a = oracle_avg_ranks([tables[i][1][k] for k in insts])
            b = oracle_avg_ranks([tables[j][1][k] for k in insts])
            assert rep.spearman[i][j] == pytest.approx(oracle_pearson(a, b), abs=1e-12)
            assert rep.kendall[i][j] == pytest.approx(oracle_kendall(a, b), abs=1e-12)
            assert rep.spearman[i][j] == rep.spearman[j][i]


def test_correlation_report_partial_overlap():
    a = {f"i{k}": k for k in range(1, 11)}
    b = {f"i{k}": k for k in range(4, 15)}
    c = {f"i{k}": k for k in (1, 2, 5, 9)}
    rep = correlation_report([("a", a), ("b", b), ("c", c)])
    assert rep.n_common == ((10, 7, 4), (7, 11, 2), (4, 2, 4))


def test_correlation_report_errors():
    with pytest.raises(RankingError):
        correlation_report([("a", {"x": 1, "y": 2})])
    with pytest.raises(RankingError, match="a vs b"):
        correlation_report([("a", {"x": 1, "y": 2}), ("b", {"z": 1, "w": 2})])


def test_load_external_ranking():
    text = "institution_id,rank\nmit,1\nstanford,1\ncmu,3\n"
    ext = load_external_ranking(text.splitlines(keepends=True), "usnwr")
    assert dict(ext.ranks) == {"mit": 1, "stanford": 1, "cmu": 3}
    with pytest.raises(ValueError):
        load_external_ranking(["institution_id,rank\n", "x,0\n"], "bad")
    with pytest.raises(ValueError):
        load_external_ranking(["inst,rank\n", "x,1\n"], "bad")

import itertools
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymbasis.gadic import enumerate_members
from asymbasis.partition import Thm2Params, residue_partition, thm2_partition
from asymbasis.sumset import (
    BoundedBitset,
    add,
    basis_bitset,
    hfold,
    minimality_probe,
    removability,
    rep_count,
    rep_counts,
    rep_table_csv,
    restrict,
    sumset_report,
)


def brute_hfold(xs, h, N):
    return {sum(c) for c in itertools.product(xs, repeat=h) if sum(c) <= N}


def brute_reps(xs, h, n):
    return sum(1 for c in itertools.product(xs, repeat=h) if sum(c) == n)


small_sets = st.frozensets(st.integers(min_value=0, max_value=40), max_size=10)


# -- bitset basics ------------------------------------------------------------


def test_out_of_range_queries_raise():
    X = BoundedBitset.from_elements(10, [1, 2])
    assert 2 in X and 3 not in X
    with pytest.raises(IndexError):
        11 in X
    with pytest.raises(IndexError):
        -1 in X
    with pytest.raises(IndexError):
        X.without(12)


def test_bitset_ops():
    X = BoundedBitset.from_elements(8, [0, 2, 4, 9])
    Y = BoundedBitset.from_elements(8, [2, 3])
    assert X.elements() == [0, 2, 4]
    assert (X | Y).elements() == [0, 2, 3, 4]
    assert (X & Y).elements() == [2]
    assert (X - Y).elements() == [0, 4]
    assert X.covers(3, 2) and not X.covers(0, 2)
    assert X.missing(0, 4) == [1, 3]
    with pytest.raises(ValueError):
        X | BoundedBitset(9)


def test_restrict_examples():
    evens_a2 = restrict(lambda n: n in set(enumerate_members(lambda f: f % 2 == 0, 2, 20)), 20)
    assert evens_a2.elements() == [1, 4, 5, 16, 17, 20]
    assert restrict(set(), 7).elements() == []
    assert restrict(lambda n: True, 5).elements() == [0, 1, 2, 3, 4, 5]
    assert restrict([3, 99], 5).elements() == [3]


def test_basis_bitset_matches_enumeration():
    X = basis_bitset([lambda f: f % 2 == 0], 2, 20)
    assert X.elements() == [1, 4, 5, 16, 17, 20]


# -- sumsets ------------------------------------------------------------------


def test_hfold_examples():
    assert hfold(BoundedBitset.from_elements(10, [1]), 3, 10).elements() == [3]
    assert hfold(BoundedBitset.from_elements(4, [0, 1]), 2, 4).elements() == [0, 1, 2]
    with pytest.raises(ValueError):
        hfold(BoundedBitset(4), 0)


@settings(max_examples=150, deadline=None)
@given(small_sets, st.integers(min_value=1, max_value=4), st.integers(min_value=0, max_value=90))
def test_hfold_matches_brute_force(xs, h, N):
    X = BoundedBitset.from_elements(N, xs)
    expected = brute_hfold([x for x in xs if x <= N], h, N)
    assert set(hfold(X, h, N).elements()) == expected


@settings(max_examples=60, deadline=None)
@given(small_sets, st.integers(min_value=1, max_value=3), st.integers(min_value=1, max_value=3))
def test_hfold_associativity(xs, h1, h2):
    N = 100
    X = BoundedBitset.from_elements(N, xs)
    assert hfold(X, h1 + h2, N) == add(hfold(X, h1, N), hfold(X, h2, N), N)


def test_hfold_agrees_with_rep_counts_exhaustively():
    N = 2**12
    X = basis_bitset([lambda f: f % 3 != 1], 2, N)
    for h in (2, 3):
        S = hfold(X, h, N)
        counts = rep_counts(X, h, N)
        assert all((n in S) == (counts[n] >= 1) for n in range(N + 1))


def test_rep_count_examples():
    assert rep_count(BoundedBitset.from_elements(3, [1, 2]), 2, 3) == 2
    assert rep_count(BoundedBitset.from_elements(4, [1]), 4, 4) == 1
    assert rep_count(restrict(lambda n: n >= 1, 5), 2, 5) == 4
    with pytest.raises(IndexError):
        rep_count(BoundedBitset(3), 2, 4)


@settings(max_examples=100, deadline=None)
@given(small_sets, st.integers(min_value=1, max_value=4))
def test_rep_counts_match_brute_force(xs, h):
    N = 60
    X = BoundedBitset.from_elements(N, xs)
    got = rep_counts(X, h, N)
    kept = [x for x in xs if x <= N]
    assert got == [brute_reps(kept, h, n) for n in range(N + 1)]


def test_rep_counts_do_not_saturate():
    # ordered 12-tuples of naturals summing to 300: stars and bars, beyond 2^64
    N, h = 300, 12
    counts = rep_counts(restrict(lambda n: True, N), h, N)
    assert counts[N] == math.comb(N + h - 1, h - 1)
    assert counts[N] > 2**64


def test_rep_table_csv():
    text = rep_table_csv(restrict(lambda n: n >= 1, 64), 2, 64)
    lines = text.strip().split("\n")
    assert lines[0] == "n,r_2"
    assert len(lines) == 65
    assert lines[5] == "5,4"


# -- removability -------------------------------------------------------------


def test_removability_examples():
    assert removability([0, 1], 1, 2, 4) == [1, 2]
    # only the boundary sums 0 and 1 need the element 0
    assert removability(lambda n: True, 0, 2, 10) == [0, 1]
    with pytest.raises(ValueError):
        removability([0, 1], 3, 2, 4)


def test_removing_g_squared_in_thm2_setting():
    p = Thm2Params(2, 5, 2, 7)
    spec = thm2_partition(p)
    N = 2**17
    A = basis_bitset([spec.predicate(i) for i in range(p.h)], 2, N)
    assert 4 in A
    E = removability(A, 4, p.h, N)
    assert [n for n in E if n >= 9] == []


def test_probe_flags_g_squared_in_thm2_setting():
    p = Thm2Params(2, 5, 2, 7)
    spec = thm2_partition(p)
    N = 2**12
    A = basis_bitset([spec.predicate(i) for i in range(p.h)], 2, N)
    rep = minimality_probe(A, p.h, N, 4)
    assert 4 in rep.non_minimal_candidates
    assert rep.note == "evidence, not proof"


def test_probe_on_naturals():
    rep = minimality_probe(lambda n: True, 2, 50, 5, skip_below=2)
    assert rep.non_minimal_candidates == [0, 1, 2, 3, 4, 5]
    with pytest.raises(ValueError):
        minimality_probe(lambda n: True, 2, 5, 6)


def test_probe_serialization():
    rep = minimality_probe([1, 2, 3], 2, 12, 3)
    doc = rep.to_json()
    assert doc["note"] == "evidence, not proof"
    assert [e["a"] for e in doc["entries"]] == [1, 2, 3]
    assert rep.to_csv().splitlines()[0] == "a,nonempty,size,smallest,largest"


def test_lemma1c_residue_bases():
    N = 2**20
    for h in (2, 3):
        spec = residue_partition(h)
        A = basis_bitset([spec.predicate(i) for i in range(h)], 2, N)
        rep = sumset_report(A, h, N)
        assert rep.basis_threshold is not None and rep.basis_threshold <= 100
        assert all(g < rep.basis_threshold for g in rep.gaps)


def test_sumset_report_no_threshold():
    rep = sumset_report([2], 2, 10)
    assert rep.basis_threshold is None
    assert 10 in rep.gaps
    assert rep.to_json()["basis_threshold"] is None


def test_sumset_report_removability():
    rep = sumset_report([0, 1], 2, 4, probe=[1])
    assert rep.removability == {1: [1, 2]}
    assert rep.to_json()["removability"] == {"1": [1, 2]}

import random
import re

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymbasis.partition import (
    PartitionError,
    PartitionSpec,
    Thm1Params,
    Thm2Params,
    check_hypotheses,
    classify_regime,
    interval_partition,
    residue_partition,
    thm1_partition,
    thm2_partition,
)

P1 = Thm1Params(2, 4, 2, 65, 65)
P2 = Thm2Params(2, 5, 2, 7)


def thm1_cell_by_definition(w, p):
    # W_0 = [0, m_1] ∪ [m_i+t+1, m_{i+1}];  W_j = [m_i+1, m_i+t] for i ≡ j (mod h-1)
    if w <= p.m_start:
        return 0
    i = (w - p.m_start - 1) // p.m_gap + 1
    if w <= p.m(i) + p.t:
        r = i % (p.h - 1)
        return r if r else p.h - 1
    return 0


def thm2_cell_by_definition(w, p):
    k, r = divmod(w, p.m)
    if r <= p.m - p.t - 1:
        return 0
    c = k % (p.h - 1)
    return c if c else p.h - 1


def all_specs():
    return [
        residue_partition(2),
        residue_partition(5),
        thm1_partition(P1),
        thm1_partition(Thm1Params(3, 9, 2, 3**11 + 1, 3**11 + 5)),
        thm2_partition(P2),
        thm2_partition(Thm2Params(3, 7, 1, 6)),
        interval_partition(4, [(0, 1, 0), (2, 3, 1), (4, 5, 2), (6, 7, 3)]),
    ]


# -- parameter validation -------------------------------------------------------


def test_thm1_params_valid():
    assert P1.m2 == 130
    assert P1.forbidden == 4
    assert P1.m(3) == 195


@pytest.mark.parametrize(
    "args,needle",
    [
        ((2, 4, 1, 65, 65), "t >= 2"),
        ((2, 3, 2, 65, 65), "g^t <= h"),
        ((2, 4, 2, 64, 65), "m_1 > g^(h+2)"),
        ((2, 4, 2, 65, 64), "g^(h+2)"),
    ],
)
def test_thm1_params_name_the_inequality(args, needle):
    with pytest.raises(PartitionError, match=re.escape(needle)):
        Thm1Params(*args)


def test_thm2_params():
    Thm2Params(3, 7, 1, 6)
    with pytest.raises(PartitionError, match=r"h > g\^t\(g-1\) violated"):
        Thm2Params(2, 4, 2, 7)
    with pytest.raises(PartitionError, match=r"g\^m > g\^\(t\+2\)h"):
        Thm2Params(2, 5, 2, 6)
    with pytest.raises(PartitionError):
        Thm2Params(2, 5, 0, 7)


# -- constructors -----------------------------------------------------------------


def test_residue_examples():
    assert residue_partition(2).cell(7) == 1
    assert residue_partition(4).cell(8) == 0
    assert residue_partition(3).cells(0, 5) == [0, 1, 2, 0, 1, 2]
    with pytest.raises(PartitionError):
        residue_partition(1)


def test_thm1_examples():
    spec = thm1_partition(P1)
    assert spec.cell(66) == 1
    assert spec.cell(70) == 0
    assert spec.cell(131) == 2
    assert spec.cell(196) == 3
    # the next block wraps back to cell 1
    assert spec.cell(261) == 1


def test_thm2_examples():
    spec = thm2_partition(P2)
    assert spec.cell(4) == 0
    # k = 0 is the zero residue mod h-1, named h-1
    assert spec.cell(5) == 4
    assert spec.cell(12) == 1


@pytest.mark.parametrize("p", [P1, Thm1Params(2, 5, 2, 129, 200), Thm1Params(3, 9, 2, 3**11 + 1, 3**11 + 1)])
def test_thm1_matches_definition(p):
    spec = thm1_partition(p)
    end = spec.preperiod_end + 2 * spec.period
    step = max(1, end // 20000)
    for w in range(0, end, step):
        assert spec.cell(w) == thm1_cell_by_definition(w, p), w
    for i in range(1, 2 * p.h):
        for w in (p.m(i), p.m(i) + 1, p.m(i) + p.t, p.m(i) + p.t + 1):
            assert spec.cell(w) == thm1_cell_by_definition(w, p), w


@pytest.mark.parametrize("p", [P2, Thm2Params(3, 7, 1, 6), Thm2Params(2, 9, 3, 9)])
def test_thm2_matches_definition(p):
    spec = thm2_partition(p)
    for w in range(3 * spec.period):
        assert spec.cell(w) == thm2_cell_by_definition(w, p)


def test_bignum_positions():
    spec = thm1_partition(P1)
    rng = random.Random(7)
    for _ in range(10**4):
        w = rng.getrandbits(300) + spec.preperiod_end + 1
        assert spec.cell(w) == spec.cell(w + spec.period)
        assert spec.cell(w) == thm1_cell_by_definition(w, P1)


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: f"h{s.h}-P{s.period}")
def test_totality_and_range(spec):
    for w in range(spec.preperiod_end + 2 * spec.period + 1):
        assert 0 <= spec.cell(w) < spec.h
    assert sorted(set(spec.cells(0, spec.preperiod_end + spec.period))) == list(range(spec.h))


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: f"h{s.h}-P{s.period}")
def test_periodicity(spec):
    rng = random.Random(spec.period)
    for _ in range(2000):
        w = spec.preperiod_end + rng.getrandbits(80)
        assert spec.cell(w) == spec.cell(w + spec.period)


def test_thm1_nonzero_cells_have_runs_of_exactly_t():
    for p in (P1, Thm1Params(2, 7, 2, 520, 600)):
        spec = thm1_partition(p)
        for a, b, c in spec.window_runs(2):
            if c:
                assert b - a + 1 == p.t


def test_thm2_zero_cell_runs():
    for p in (P2, Thm2Params(3, 7, 1, 6)):
        spec = thm2_partition(p)
        runs = spec.periodic_runs()
        assert runs[0] and all(x == p.m - p.t for x in runs[0])
        assert p.m - p.t >= p.t
        for c in range(1, p.h):
            assert runs[c] == [p.t]


# -- interval partitions ----------------------------------------------------------


def test_interval_residue_equivalence():
    spec = interval_partition(3, [(0, 0, 0), (1, 1, 1), (2, 2, 2)])
    assert spec == residue_partition(3)
    assert hash(spec) == hash(residue_partition(3))


def test_interval_alternating_blocks():
    spec = interval_partition(2, [(0, 1, 0), (2, 3, 1)])
    assert spec.cell(3) == 1
    assert spec.cell(4) == 0


def test_interval_with_preperiod():
    spec = interval_partition(2, [(0, 0, 0), (1, 1, 1)], preperiod=[(0, 4, 1)])
    assert spec.cells(0, 8) == [1, 1, 1, 1, 1, 0, 1, 0, 1]


@pytest.mark.parametrize(
    "ivs,needle",
    [
        ([(0, 2, 0), (2, 3, 1)], "overlap at position 2"),
        ([(0, 1, 0), (3, 4, 1)], "gap at position 2"),
        ([(0, 1, 0), (2, 3, 5)], "cell 5 out of range at position 2"),
        ([(0, 1, 0), (2, 3, 0)], r"cells \[1\] are empty"),
    ],
)
def test_interval_errors(ivs, needle):
    with pytest.raises(PartitionError, match=needle):
        interval_partition(2, ivs)


def test_equality_with_doubled_period():
    a = residue_partition(2)
    b = PartitionSpec.from_pattern(2, [], [0, 1, 0, 1])
    assert a == b and hash(a) == hash(b)
    assert a != residue_partition(3)
    assert a != PartitionSpec.from_pattern(2, [], [1, 0])


@pytest.mark.parametrize("spec", all_specs(), ids=lambda s: f"h{s.h}-P{s.period}")
def test_json_round_trip(spec):
    doc = spec.to_json()
    assert set(doc) == {"h", "preperiod", "period", "pattern"}
    assert len(doc["pattern"]) == doc["period"]
    assert PartitionSpec.from_json(doc) == spec


def test_from_json_rejects_malformed():
    with pytest.raises(PartitionError):
        PartitionSpec.from_json({"h": 2})
    with pytest.raises(PartitionError):
        PartitionSpec.from_json({"h": 2, "preperiod": [], "period": 3, "pattern": [0, 1]})


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=3), min_size=4, max_size=40))
def test_pattern_round_trip(pattern):
    h = 4
    if set(pattern) != set(range(h)):
        with pytest.raises(PartitionError):
            PartitionSpec.from_pattern(h, [], pattern)
        return
    spec = PartitionSpec.from_pattern(h, [], pattern)
    assert spec.pattern == pattern
    assert [spec.cell(w) for w in range(2 * len(pattern))] == pattern * 2


# -- hypothesis checks --------------------------------------------------------------


def test_residue_fails_run_check():
    rep = check_hypotheses(residue_partition(2), 2, 2, 2)
    assert rep.all_infinite
    assert not rep.all_have_t_run
    assert not rep.passes


def test_thm2_runs_of_t():
    rep = check_hypotheses(thm2_partition(P2), 2, 5, 2)
    assert rep.passes
    for c in range(1, 5):
        assert rep.periodic_run_lengths[c] == [2]


def test_thm1_zero_cell_runs():
    rep = check_hypotheses(thm1_partition(P1), 2, 4, 2)
    assert rep.passes
    assert rep.periodic_run_lengths[0] == [63] * 3
    assert rep.regime == "non-minimal-blocks"
    assert rep.to_json()["passes"] is True


def test_regimes():
    assert classify_regime(3, 4, 2) == "minimal"
    assert classify_regime(2, 4, 2) == "non-minimal-blocks"
    assert classify_regime(2, 5, 1) == "neither"


def test_check_hypotheses_cell_count_mismatch():
    with pytest.raises(PartitionError):
        check_hypotheses(residue_partition(2), 2, 3, 1)

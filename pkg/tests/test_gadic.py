import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from asymbasis.gadic import (
    GadicExpansion,
    as_predicate,
    count_members,
    enumerate_members,
    evaluate,
    expand,
    from_decimal,
    from_terms,
    ilog,
    is_member,
    power,
    to_decimal,
)
from asymbasis.gadic import _digits_dc, _digits_small


def evens(f):
    return f % 2 == 0


def brute_support(n, g):
    out, f = set(), 0
    while n:
        if n % g:
            out.add(f)
        n //= g
        f += 1
    return out


# -- expand / evaluate --------------------------------------------------------


def test_expand_examples():
    assert expand(0, 2).terms == ()
    assert expand(200, 2).terms == ((7, 1), (6, 1), (3, 1))
    assert expand(4 + 2**70, 2).terms == ((70, 1), (2, 1))


def test_evaluate_examples():
    assert evaluate(GadicExpansion(2, ())) == 0
    assert evaluate(GadicExpansion(2, ((7, 1), (6, 1), (3, 1)))) == 200
    assert evaluate(GadicExpansion(3, ((2, 2),))) == 18


def test_expand_rejects_bad_input():
    with pytest.raises(ValueError):
        expand(5, 1)
    with pytest.raises(ValueError):
        expand(-1, 2)


@pytest.mark.parametrize(
    "terms",
    [((1, 0),), ((1, 2),), ((1, 1), (1, 1)), ((1, 1), (2, 1)), ((-1, 1),)],
)
def test_expansion_validates_terms(terms):
    with pytest.raises(ValueError):
        GadicExpansion(2, terms)


@pytest.mark.parametrize("g", [2, 3, 5, 10])
def test_round_trip_exhaustive(g):
    for n in range(10**5 + 1):
        e = expand(n, g)
        assert evaluate(e) == n


@pytest.mark.parametrize("g", [2, 3, 5, 10])
def test_round_trip_bignums(g):
    rng = random.Random(g)
    for _ in range(50):
        n = rng.randrange(g**1000)
        e = expand(n, g)
        assert evaluate(e) == n
        fs = e.support
        assert all(a >= 1 and a <= g - 1 for _, a in e.terms)
        assert all(x > y for x, y in zip(fs, fs[1:]))


@settings(max_examples=300, deadline=None)
@given(st.integers(min_value=0, max_value=10**60), st.integers(min_value=2, max_value=40))
def test_expand_canonical(n, g):
    e = expand(n, g)
    fs = e.support
    assert all(1 <= a <= g - 1 for _, a in e.terms)
    assert all(x > y for x, y in zip(fs, fs[1:]))
    assert set(fs) == brute_support(n, g)
    assert evaluate(e) == n


@pytest.mark.parametrize("g", [3, 7, 63, 100])
def test_large_input_paths_agree(g):
    # the gmpy2 and divide-and-conquer branches must match plain division
    rng = random.Random(g)
    n = rng.getrandbits(9000) | 1
    ref = sorted(_digits_small(n, g), reverse=True)
    assert list(expand(n, g).terms) == ref
    out = []
    _digits_dc(n, g, 0, out)
    assert sorted(out, reverse=True) == ref


def test_json_round_trip():
    e = expand(12345, 7)
    again = GadicExpansion.from_json(7, e.to_json())
    assert again == e
    assert e.to_json()[0][0] == max(e.support)


def test_digit_lookup():
    e = expand(200, 2)
    assert e.digit(7) == 1 and e.digit(5) == 0 and e.digit(0) == 0


# -- arithmetic helpers -------------------------------------------------------


@settings(max_examples=200, deadline=None)
@given(st.integers(min_value=1, max_value=10**80), st.integers(min_value=2, max_value=20))
def test_ilog_brackets(x, g):
    e = ilog(x, g)
    assert g**e <= x < g ** (e + 1)


@pytest.mark.parametrize("g,f", [(2, 5000), (3, 5000), (3, 17), (10, 4097)])
def test_power_and_from_terms(g, f):
    assert power(g, f) == g**f
    terms = [(f, 1), (3, g - 1), (f, 1)]
    assert from_terms(terms, g) == 2 * g**f + (g - 1) * g**3


def test_decimal_helpers():
    n = 3**20000 + 17
    s = to_decimal(n)
    assert s.endswith(str(n % 10**6).zfill(6))
    assert from_decimal(s) == n
    assert from_decimal("42") == 42
    with pytest.raises(ValueError):
        from_decimal("4e5")


# -- membership ---------------------------------------------------------------


def test_is_member_examples():
    assert is_member(5, evens, 2)
    assert not is_member(2, evens, 2)
    assert not is_member(0, lambda f: True, 3)


def test_as_predicate_accepts_containers():
    assert as_predicate({0, 2})(2)
    assert not as_predicate(range(3))(5)
    assert as_predicate([1, 4])(4)


@settings(max_examples=300, deadline=None)
@given(
    st.integers(min_value=0, max_value=10**9),
    st.integers(min_value=2, max_value=12),
    st.frozensets(st.integers(min_value=0, max_value=30)),
)
def test_is_member_matches_support(n, g, W):
    assert is_member(n, W, g) == (n >= 1 and brute_support(n, g) <= W)


def test_enumerate_examples():
    assert enumerate_members({0}, 5, 100) == [1, 2, 3, 4]
    assert enumerate_members(lambda f: True, 2, 10) == list(range(1, 11))
    assert enumerate_members(evens, 2, 20) == [1, 4, 5, 16, 17, 20]
    assert enumerate_members(evens, 2, 0) == []


@settings(max_examples=150, deadline=None)
@given(
    st.integers(min_value=1, max_value=3000),
    st.integers(min_value=2, max_value=6),
    st.frozensets(st.integers(min_value=0, max_value=12)),
)
def test_enumerate_matches_filter(N, g, W):
    expected = [n for n in range(1, N + 1) if brute_support(n, g) <= W]
    assert enumerate_members(W, g, N) == expected


def test_count_examples():
    assert count_members(lambda f: True, 2, 100) == 100
    assert count_members({0}, 3, 10) == 2
    assert count_members(evens, 2, 2**16) == len(enumerate_members(evens, 2, 2**16))
    assert count_members(evens, 2, 0) == 0


@settings(max_examples=200, deadline=None)
@given(
    st.integers(min_value=1, max_value=5000),
    st.integers(min_value=2, max_value=6),
    st.frozensets(st.integers(min_value=0, max_value=14)),
)
def test_count_matches_enumeration(x, g, W):
    assert count_members(W, g, x) == len(enumerate_members(W, g, x))


def test_disjoint_position_sets_give_disjoint_members():
    N = 10**6
    a = set(enumerate_members(evens, 2, N))
    b = set(enumerate_members(lambda f: f % 2 == 1, 2, N))
    assert a and b and not (a & b)


def test_growth_exponent_near_half():
    xs = [2**j for j in range(8, 21)]
    ys = [count_members(evens, 2, x) for x in xs]
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx, my = sum(lx) / len(lx), sum(ly) / len(ly)
    slope = sum((a - mx) * (b - my) for a, b in zip(lx, ly)) / sum((a - mx) ** 2 for a in lx)
    assert 0.4 <= slope <= 0.6

"""Canonical base-g expansions and the digit-position sets A_g(W).

A_g(W) is the set of positive integers whose nonzero base-g digits all sit
at positions in W. Membership of n is therefore a pure support test on the
canonical expansion of n.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Union

try:
    import gmpy2
except ImportError:  # pragma: no cover - gmpy2 is a declared dependency
    gmpy2 = None

PositionSet = Union[Callable[[int], bool], Iterable[int]]

# below this many bits, plain divmod is faster than a string round-trip
_SMALL_BITS = 2048
_NONZERO = re.compile(r"[^0]")


def as_predicate(W: PositionSet) -> Callable[[int], bool]:
    """Normalize a position set (callable, set, range, ...) to a predicate."""
    if callable(W):
        return W
    if isinstance(W, (set, frozenset, range, dict)):
        return W.__contains__
    return frozenset(W).__contains__


def _check_base(g: int) -> None:
    if not isinstance(g, int) or g < 2:
        raise ValueError(f"base must be an integer >= 2, got {g!r}")


@dataclass(frozen=True)
class GadicExpansion:
    """n = sum(a_f * g**f) over terms (f, a_f), highest exponent first."""

    base: int
    terms: tuple[tuple[int, int], ...]

    def __post_init__(self):
        _check_base(self.base)
        prev = None
        for f, a in self.terms:
            if f < 0:
                raise ValueError(f"negative exponent {f}")
            if not 1 <= a <= self.base - 1:
                raise ValueError(f"digit {a} at exponent {f} outside [1, {self.base - 1}]")
            if prev is not None and f >= prev:
                raise ValueError("exponents must be strictly decreasing")
            prev = f

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(f for f, _ in self.terms)

    def digit(self, f: int) -> int:
        for e, a in self.terms:
            if e == f:
                return a
            if e < f:
                break
        return 0

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[tuple[int, int]]:
        return iter(self.terms)

    @property
    def value(self) -> int:
        return evaluate(self)

    def to_json(self) -> list[list[int]]:
        return [[f, a] for f, a in self.terms]

    @classmethod
    def from_json(cls, base: int, data: list) -> "GadicExpansion":
        return cls(base, tuple((int(f), int(a)) for f, a in data))


def _digits_small(n: int, g: int) -> list[tuple[int, int]]:
    out = []
    f = 0
    while n:
        n, a = divmod(n, g)
        if a:
            out.append((f, a))
        f += 1
    return out


def _digits_dc(n: int, g: int, offset: int, out: list) -> None:
    # divide and conquer on g**(2**j) so huge sparse inputs stay subquadratic
    if n.bit_length() <= _SMALL_BITS:
        out.extend((f + offset, a) for f, a in _digits_small(n, g))
        return
    half = 1
    while g ** (2 * half) <= n:
        half *= 2
    hi, lo = divmod(n, g**half)
    if lo:
        _digits_dc(lo, g, offset, out)
    if hi:
        _digits_dc(hi, g, offset + half, out)


def expand(n: int, g: int) -> GadicExpansion:
    """Canonical base-g expansion of a nonnegative integer."""
    _check_base(g)
    if n < 0:
        raise ValueError("expand is defined for nonnegative integers only")
    n = int(n)
    if g == 2:
        s = bin(n)[:1:-1]
        terms = [(m.start(), 1) for m in _NONZERO.finditer(s)]
    elif n.bit_length() <= _SMALL_BITS:
        terms = _digits_small(n, g)
    elif gmpy2 is not None and g <= 62:
        s = gmpy2.mpz(n).digits(g)[::-1]
        terms = [(m.start(), int(m.group(), g)) for m in _NONZERO.finditer(s)]
    else:
        terms = []
        _digits_dc(n, g, 0, terms)
    terms.reverse()
    # the invariants hold by construction; skip re-validation on hot paths
    e = object.__new__(GadicExpansion)
    object.__setattr__(e, "base", g)
    object.__setattr__(e, "terms", tuple(terms))
    return e


# above this exponent gmpy2's power and accumulation beat Python ints
_BIG_EXP = 4096


def power(g: int, f: int) -> int:
    """g**f, via gmpy2 for large exponents."""
    if gmpy2 is None or f < _BIG_EXP or g == 2:
        return 1 << f if g == 2 else g**f
    return int(gmpy2.mpz(g) ** f)


def from_terms(terms: Iterable[tuple[int, int]], g: int) -> int:
    """sum(a * g**f) over (f, a) pairs; exponents need not be distinct or sorted."""
    terms = list(terms)
    if gmpy2 is None or g == 2 or not terms or max(f for f, _ in terms) < _BIG_EXP:
        if g == 2:
            return sum(a << f for f, a in terms)
        return sum(a * g**f for f, a in terms)
    G = gmpy2.mpz(g)
    return int(sum((a * G**f for f, a in terms), gmpy2.mpz(0)))


def ilog(x: int, g: int) -> int:
    """Largest e with g**e <= x, for x >= 1. Exact: binary descent over g**(2**j)."""
    _check_base(g)
    if x < 1:
        raise ValueError("ilog needs x >= 1")
    if g == 2:
        return x.bit_length() - 1
    squares = [g]
    while squares[-1] * squares[-1] <= x:
        squares.append(squares[-1] * squares[-1])
    e, acc = 0, 1
    for j in range(len(squares) - 1, -1, -1):
        nxt = acc * squares[j]
        if nxt <= x:
            acc = nxt
            e += 1 << j
    return e


def to_decimal(n: int) -> str:
    """Exact decimal string; avoids the int/str digit cap of newer Pythons."""
    if gmpy2 is not None and n.bit_length() > 8192:
        return gmpy2.mpz(n).digits(10)
    return str(n)


def from_decimal(s: str) -> int:
    s = s.strip()
    if not s or not (s.isdigit() or (s[0] == "-" and s[1:].isdigit())):
        raise ValueError(f"not a decimal integer: {s[:40]!r}")
    if gmpy2 is not None and len(s) > 2000:
        return int(gmpy2.mpz(s, 10))
    return int(s)


def evaluate(e: GadicExpansion) -> int:
    return from_terms(e.terms, e.base)


def is_member(n: int, W: PositionSet, g: int) -> bool:
    """True iff n >= 1 and every nonzero base-g digit of n lies at a position in W."""
    _check_base(g)
    if n < 1:
        return False
    pred = as_predicate(W)
    return all(pred(f) for f in expand(n, g).support)


def _positions_upto(N: int, g: int) -> int:
    """Largest L with g**L <= N (N >= 1)."""
    L = 0
    p = g
    while p <= N:
        p *= g
        L += 1
    return L


def enumerate_members(W: PositionSet, g: int, N: int) -> list[int]:
    """A_g(W) intersected with [1, N], ascending.

    Depth-first over digit choices at the admissible positions, highest
    first, cutting a branch once its partial value exceeds N.
    """
    _check_base(g)
    if N < 1:
        return []
    pred = as_predicate(W)
    L = _positions_upto(N, g)
    positions = [f for f in range(L, -1, -1) if pred(f)]
    powers = [g**f for f in positions]
    out: list[int] = []
    depth = len(positions)

    def walk(idx: int, partial: int) -> None:
        if idx == depth:
            if partial:
                out.append(partial)
            return
        step = powers[idx]
        for a in range(g):
            v = partial + a * step
            if v > N:
                break
            walk(idx + 1, v)

    walk(0, 0)
    out.sort()
    return out


def count_members(W: PositionSet, g: int, x: int) -> int:
    """|A_g(W) ∩ [1, x]|, counted digit by digit without materializing members.

    Walks the expansion of x from the top; whenever a prefix drops strictly
    below x, every completion over the admissible lower positions counts.
    """
    _check_base(g)
    if x < 1:
        return 0
    pred = as_predicate(W)
    L = _positions_upto(x, g)
    xd = dict(expand(x, g).terms)
    # free[f] = number of admissible positions strictly below f
    free = [0] * (L + 2)
    for f in range(L + 1):
        free[f + 1] = free[f] + (1 if pred(f) else 0)
    total = 0
    for f in range(L, -1, -1):
        d = xd.get(f, 0)
        if pred(f):
            total += d * g ** free[f]
        elif d:
            total += g ** free[f]
            return total - 1  # drop zero
    # x itself is a member; zero was counted and is not
    return total

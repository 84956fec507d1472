"""Bounded sumset oracle on [0, N].

Sets are Python ints used as bitsets, so an h-fold sumset is a sequence of
shifted ORs over the elements of the sparser operand. Representation counts
use Kronecker substitution: pack the indicator polynomial into one integer
with slots wide enough for the largest count and let bignum multiplication
do the convolution exactly.

Truncation is exact: every representation of n uses parts <= n, so hA ∩ [0, N]
depends only on A ∩ [0, N].
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from asymbasis.gadic import enumerate_members

_ONE = re.compile("1")


class BoundedBitset:
    """Membership of each n in [0, N]; queries outside the range raise."""

    __slots__ = ("bound", "bits")

    def __init__(self, bound: int, bits: int = 0):
        if bound < 0:
            raise ValueError("bound must be nonnegative")
        self.bound = bound
        self.bits = bits & ((1 << (bound + 1)) - 1)

    @classmethod
    def from_elements(cls, bound: int, elements: Iterable[int]) -> "BoundedBitset":
        bits = 0
        for x in elements:
            if 0 <= x <= bound:
                bits |= 1 << x
        return cls(bound, bits)

    def _check(self, n: int) -> None:
        if not 0 <= n <= self.bound:
            raise IndexError(f"{n} outside [0, {self.bound}]")

    def __contains__(self, n: int) -> bool:
        self._check(n)
        return bool(self.bits >> n & 1)

    def __len__(self) -> int:
        return bin(self.bits).count("1")

    def __iter__(self):
        return iter(self.elements())

    def elements(self) -> list[int]:
        s = bin(self.bits)[:1:-1]
        return [m.start() for m in _ONE.finditer(s)]

    def __eq__(self, other):
        if not isinstance(other, BoundedBitset):
            return NotImplemented
        return self.bound == other.bound and self.bits == other.bits

    def __repr__(self):
        return f"BoundedBitset(bound={self.bound}, size={len(self)})"

    def _same(self, other: "BoundedBitset") -> None:
        if other.bound != self.bound:
            raise ValueError(f"bound mismatch: {self.bound} vs {other.bound}")

    def __or__(self, other):
        self._same(other)
        return BoundedBitset(self.bound, self.bits | other.bits)

    def __and__(self, other):
        self._same(other)
        return BoundedBitset(self.bound, self.bits & other.bits)

    def __sub__(self, other):
        self._same(other)
        return BoundedBitset(self.bound, self.bits & ~other.bits)

    def truncate(self, N: int) -> "BoundedBitset":
        if N > self.bound:
            raise ValueError(f"cannot extend bound {self.bound} to {N}")
        return BoundedBitset(N, self.bits)

    def without(self, a: int) -> "BoundedBitset":
        self._check(a)
        return BoundedBitset(self.bound, self.bits & ~(1 << a))

    def covers(self, lo: int, hi: int) -> bool:
        """True iff every n in [lo, hi] is a member."""
        self._check(lo)
        self._check(hi)
        if lo > hi:
            return True
        width = hi - lo + 1
        return (self.bits >> lo) & ((1 << width) - 1) == (1 << width) - 1

    def missing(self, lo: int = 0, hi: int | None = None) -> list[int]:
        hi = self.bound if hi is None else hi
        if lo > hi:
            return []
        width = hi - lo + 1
        holes = ~(self.bits >> lo) & ((1 << width) - 1)
        s = bin(holes)[:1:-1]
        return [lo + m.start() for m in _ONE.finditer(s)]


IntSet = Union[BoundedBitset, Callable[[int], bool], Iterable[int]]


def restrict(A: IntSet, N: int) -> BoundedBitset:
    """A ∩ [0, N] as a bitset. A may be a bitset, an iterable, or a predicate."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    if isinstance(A, BoundedBitset):
        return A.truncate(N)
    if callable(A) and not isinstance(A, (set, frozenset, range, list, tuple)):
        return BoundedBitset.from_elements(N, (n for n in range(N + 1) if A(n)))
    return BoundedBitset.from_elements(N, A)


def basis_bitset(cells, g: int, N: int) -> BoundedBitset:
    """⋃ A_g(W) ∩ [0, N] over the given position sets (e.g. partition cells)."""
    out = BoundedBitset(N)
    for W in cells:
        out = out | BoundedBitset.from_elements(N, enumerate_members(W, g, N))
    return out


def add(X: BoundedBitset, Y: BoundedBitset, N: int | None = None) -> BoundedBitset:
    """(X + Y) ∩ [0, N]."""
    N = min(X.bound, Y.bound) if N is None else N
    if N > X.bound or N > Y.bound:
        raise ValueError("operand bound smaller than N")
    mask = (1 << (N + 1)) - 1
    xs, ys = X.bits & mask, Y.bits & mask
    if bin(xs).count("1") > bin(ys).count("1"):
        xs, ys = ys, xs
    acc = 0
    s = bin(xs)[:1:-1]
    for m in _ONE.finditer(s):
        acc |= ys << m.start()
    return BoundedBitset(N, acc & mask)


def hfold(X: BoundedBitset, h: int, N: int | None = None) -> BoundedBitset:
    """hX ∩ [0, N], exact."""
    if h < 1:
        raise ValueError("h must be >= 1")
    N = X.bound if N is None else N
    if X.bound < N:
        raise ValueError(f"bitset bound {X.bound} < N = {N}")
    base = X.truncate(N)
    out = base
    for _ in range(h - 1):
        out = add(out, base, N)
    return out


def rep_counts(X: BoundedBitset, h: int, N: int | None = None) -> list[int]:
    """r_h(X, n) for n = 0..N: ordered h-tuples from X summing to n."""
    if h < 1:
        raise ValueError("h must be >= 1")
    N = X.bound if N is None else N
    if N > X.bound:
        raise IndexError(f"{N} outside [0, {X.bound}]")
    elems = X.truncate(N).elements()
    if not elems:
        return [0] * (N + 1)
    # every count is at most |X|^(h-1); pad slots to whole bytes
    width = ((h * len(elems).bit_length() + 1) + 7) // 8
    shift = 8 * width
    poly = 0
    for x in elems:
        poly |= 1 << (shift * x)
    cap = (1 << (shift * (N + 1))) - 1
    acc = poly
    for _ in range(h - 1):
        acc = (acc * poly) & cap
    raw = acc.to_bytes(width * (N + 1), "little")
    return [int.from_bytes(raw[i * width : (i + 1) * width], "little") for i in range(N + 1)]


def rep_count(X: BoundedBitset, h: int, n: int) -> int:
    if not 0 <= n <= X.bound:
        raise IndexError(f"{n} outside [0, {X.bound}]")
    return rep_counts(X, h, n)[n]


def _as_bitset(A: IntSet, N: int) -> BoundedBitset:
    return A.truncate(N) if isinstance(A, BoundedBitset) else restrict(A, N)


def removability(A: IntSet, a: int, h: int, N: int) -> list[int]:
    """E_a ∩ [0, N] where E_a = hA \\ h(A \\ {a})."""
    X = _as_bitset(A, N)
    if not 0 <= a <= N or a not in X:
        raise ValueError(f"{a} is not an element of A within [0, {N}]")
    full = hfold(X, h, N)
    return (full - hfold(X.without(a), h, N)).elements()


@dataclass
class ProbeEntry:
    a: int
    nonempty: bool
    size: int
    smallest: int | None
    largest: int | None


@dataclass
class ProbeReport:
    """E_a on a finite window. Evidence only: no finite N shows E_a infinite."""

    h: int
    N: int
    B: int
    entries: list[ProbeEntry] = field(default_factory=list)
    note: str = "evidence, not proof"

    @property
    def all_nonempty(self) -> bool:
        return all(e.nonempty for e in self.entries)

    @property
    def non_minimal_candidates(self) -> list[int]:
        return [e.a for e in self.entries if not e.nonempty]

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "N": self.N,
            "B": self.B,
            "note": self.note,
            "all_nonempty": self.all_nonempty,
            "non_minimal_candidates": self.non_minimal_candidates,
            "entries": [vars(e) for e in self.entries],
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["a", "nonempty", "size", "smallest", "largest"])
        for e in self.entries:
            w.writerow([e.a, int(e.nonempty), e.size, e.smallest, e.largest])
        return buf.getvalue()


def minimality_probe(A: IntSet, h: int, N: int, B: int, skip_below: int = 0) -> ProbeReport:
    """For each a in A ∩ [0, B], report whether E_a ∩ [skip_below, N] is nonempty.

    ``skip_below`` discards small boundary elements of E_a (e.g. sums that
    are forced only because few elements of A exist near zero).
    """
    if B > N:
        raise ValueError("B must not exceed N")
    X = _as_bitset(A, N)
    full = hfold(X, h, N)
    report = ProbeReport(h=h, N=N, B=B)
    for a in X.truncate(B).elements():
        E = [n for n in (full - hfold(X.without(a), h, N)).elements() if n >= skip_below]
        report.entries.append(
            ProbeEntry(a, bool(E), len(E), E[0] if E else None, E[-1] if E else None)
        )
    return report


@dataclass
class SumsetReport:
    h: int
    N: int
    basis_threshold: int | None
    gaps: list[int]
    removability: dict[int, list[int]]

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "N": self.N,
            "basis_threshold": self.basis_threshold,
            "gaps": self.gaps,
            "removability": {str(a): E for a, E in self.removability.items()},
        }


def sumset_report(A: IntSet, h: int, N: int, probe: Iterable[int] = ()) -> SumsetReport:
    """Threshold n0 with [n0, N] ⊆ hA (None if N ∉ hA), the gaps below it, and E_a for probes."""
    X = _as_bitset(A, N)
    full = hfold(X, h, N)
    holes = ~full.bits & ((1 << (N + 1)) - 1)
    threshold = holes.bit_length()
    if threshold > N:
        threshold = None
    gaps = BoundedBitset(N, holes).elements()
    rem = {a: removability(X, a, h, N) for a in probe}
    return SumsetReport(h=h, N=N, basis_threshold=threshold, gaps=gaps, removability=rem)


def rep_table_csv(X: BoundedBitset, h: int, N: int, start: int = 1) -> str:
    """CSV rows (n, r_h) for n in [start, N]."""
    counts = rep_counts(X, h, N)
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", f"r_{h}"])
    for n in range(start, N + 1):
        w.writerow([n, counts[n]])
    return buf.getvalue()

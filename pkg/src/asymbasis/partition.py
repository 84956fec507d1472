"""Eventually periodic partitions of the naturals into cells W_0..W_{h-1}.

A partition is stored as a finite preperiod (closed intervals tiling
[0, preperiod_end)) followed by a period of length P, itself stored as runs.
Cell lookup at any position, however large, is one bisect after a modular
reduction.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence


class PartitionError(ValueError):
    """Raised for invalid parameters or malformed partition data."""


def _cyclic_cell(index: int, modulus: int) -> int:
    # classes i = 1..modulus; the zero residue is named by `modulus`
    r = index % modulus
    return r if r else modulus


@dataclass(frozen=True)
class Thm1Params:
    """Block construction with m_i = m_start + (i-1) * m_gap."""

    g: int
    h: int
    t: int
    m_start: int
    m_gap: int

    def __post_init__(self):
        g, h, t = self.g, self.h, self.t
        if g < 2:
            raise PartitionError(f"g >= 2 violated (g={g})")
        if h < 2:
            raise PartitionError(f"h >= 2 violated (h={h})")
        if t < 2:
            raise PartitionError(f"t >= 2 violated (t={t})")
        if g**t > h:
            raise PartitionError(f"g^t <= h violated ({g}^{t} = {g**t} > {h})")
        bound = g ** (h + 2)
        if self.m_start <= bound:
            raise PartitionError(f"m_1 > g^(h+2) violated ({self.m_start} <= {bound})")
        if self.m_gap <= bound:
            raise PartitionError(f"m_(i+1) - m_i > g^(h+2) violated ({self.m_gap} <= {bound})")

    def m(self, i: int) -> int:
        """The i-th block anchor m_i, i >= 1."""
        return self.m_start + (i - 1) * self.m_gap

    @property
    def m2(self) -> int:
        return self.m(2)

    @property
    def forbidden(self) -> int:
        return self.g**2


@dataclass(frozen=True)
class Thm2Params:
    g: int
    h: int
    t: int
    m: int

    def __post_init__(self):
        g, h, t, m = self.g, self.h, self.t, self.m
        if g < 2:
            raise PartitionError(f"g >= 2 violated (g={g})")
        if t < 1:
            raise PartitionError(f"t >= 1 violated (t={t})")
        if h < 2:
            raise PartitionError(f"h >= 2 violated (h={h})")
        if not h > g**t * (g - 1):
            raise PartitionError(f"h > g^t(g-1) violated ({h} <= {g**t * (g - 1)})")
        if m < 1 or not g**m > g ** (t + 2) * h:
            raise PartitionError(
                f"g^m > g^(t+2)h violated ({g}^{m} <= {g ** (t + 2) * h})"
            )


@dataclass(frozen=True, eq=False)
class PartitionSpec:
    """h cells; preperiod intervals (a, b, cell) tile [0, preperiod_end);
    afterwards cell(w) = pattern[(w - preperiod_end) % period].

    The periodic pattern is kept as runs: ``run_starts[j]`` is the first
    offset of run j and ``run_cells[j]`` its cell.
    """

    h: int
    preperiod: tuple[tuple[int, int, int], ...]
    period: int
    run_starts: tuple[int, ...]
    run_cells: tuple[int, ...]
    _pre_starts: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_pre_starts", tuple(a for a, _, _ in self.preperiod))
        self._validate()

    # -- construction helpers -------------------------------------------------

    @classmethod
    def from_runs(
        cls,
        h: int,
        preperiod: Iterable[tuple[int, int, int]],
        period: int,
        runs: Iterable[tuple[int, int]],
    ) -> "PartitionSpec":
        """Build from (start_offset, cell) runs, merging adjacent equal cells."""
        pre = _merge_intervals(preperiod)
        starts, cells = [], []
        for s, c in runs:
            if cells and cells[-1] == c:
                continue
            starts.append(s)
            cells.append(c)
        return cls(h, tuple(pre), period, tuple(starts), tuple(cells))

    @classmethod
    def from_pattern(
        cls, h: int, preperiod: Iterable[tuple[int, int, int]], pattern: Sequence[int]
    ) -> "PartitionSpec":
        return cls.from_runs(h, preperiod, len(pattern), enumerate(pattern))

    def _validate(self) -> None:
        h = self.h
        if h < 2:
            raise PartitionError(f"h >= 2 violated (h={h})")
        if self.period < 1:
            raise PartitionError("period must be positive")
        expect = 0
        for a, b, c in self.preperiod:
            if a != expect:
                raise PartitionError(f"preperiod does not tile: position {expect}")
            if b < a:
                raise PartitionError(f"empty interval [{a}, {b}]")
            if not 0 <= c < h:
                raise PartitionError(f"cell {c} out of range at position {a}")
            expect = b + 1
        if not self.run_starts or self.run_starts[0] != 0:
            raise PartitionError("periodic runs must start at offset 0")
        for s0, s1 in zip(self.run_starts, self.run_starts[1:]):
            if s1 <= s0:
                raise PartitionError("periodic runs must be strictly increasing")
        if self.run_starts[-1] >= self.period:
            raise PartitionError("periodic run starts beyond the period")
        for s, c in zip(self.run_starts, self.run_cells):
            if not 0 <= c < h:
                raise PartitionError(f"cell {c} out of range at period offset {s}")
        seen = set(self.run_cells) | {c for _, _, c in self.preperiod}
        missing = sorted(set(range(h)) - seen)
        if missing:
            raise PartitionError(f"cells {missing} are empty")

    # -- queries ----------------------------------------------------------------

    @property
    def preperiod_end(self) -> int:
        return self.preperiod[-1][1] + 1 if self.preperiod else 0

    @property
    def pattern(self) -> list[int]:
        out = []
        bounds = list(self.run_starts) + [self.period]
        for j, c in enumerate(self.run_cells):
            out.extend([c] * (bounds[j + 1] - bounds[j]))
        return out

    def cell(self, w: int) -> int:
        if w < 0:
            raise ValueError(f"negative position {w}")
        end = self.preperiod_end
        if w < end:
            j = bisect.bisect_right(self._pre_starts, w) - 1
            return self.preperiod[j][2]
        off = (w - end) % self.period
        return self.run_cells[bisect.bisect_right(self.run_starts, off) - 1]

    __call__ = cell

    def predicate(self, i: int):
        """Membership predicate for the cell W_i."""
        if not 0 <= i < self.h:
            raise ValueError(f"cell {i} out of range")
        return lambda w: self.cell(w) == i

    def cells(self, lo: int, hi: int) -> list[int]:
        return [self.cell(w) for w in range(lo, hi + 1)]

    def window_runs(self, periods: int = 2) -> list[tuple[int, int, int]]:
        """Maximal runs (a, b, cell) covering [0, preperiod_end + periods*P)."""
        raw = list(self.preperiod)
        base = self.preperiod_end
        bounds = list(self.run_starts) + [self.period]
        for k in range(periods):
            for j, c in enumerate(self.run_cells):
                a = base + k * self.period + bounds[j]
                raw.append((a, base + k * self.period + bounds[j + 1] - 1, c))
        return _merge_intervals(raw)

    def periodic_runs(self) -> dict[int, list[int]]:
        """Lengths of maximal runs per cell in the infinitely repeated pattern.

        A cell filling the whole pattern gets length math.inf.
        """
        bounds = list(self.run_starts) + [self.period]
        lengths = [bounds[j + 1] - bounds[j] for j in range(len(self.run_cells))]
        cells = list(self.run_cells)
        out: dict[int, list[int]] = {c: [] for c in range(self.h)}
        if len(cells) == 1:
            out[cells[0]].append(math.inf)
            return out
        if cells[0] == cells[-1]:
            lengths[0] += lengths.pop()
            cells.pop()
        for c, n in zip(cells, lengths):
            out[c].append(n)
        return out

    # -- equality / serialization -----------------------------------------------

    def _canonical(self):
        return (self.h, self.preperiod, self.period, self.run_starts, self.run_cells)

    def __eq__(self, other):
        if not isinstance(other, PartitionSpec):
            return NotImplemented
        if self._canonical() == other._canonical():
            return True
        if self.h != other.h:
            return False
        span = max(self.preperiod_end, other.preperiod_end) + 2 * math.lcm(
            self.period, other.period
        )
        if span > 1_000_000:
            return False
        return all(self.cell(w) == other.cell(w) for w in range(span))

    def __hash__(self):
        # equal specs may differ in representation (e.g. a doubled period)
        return hash(self.h)

    def to_json(self) -> dict:
        return {
            "h": self.h,
            "preperiod": [list(iv) for iv in self.preperiod],
            "period": self.period,
            "pattern": self.pattern,
        }

    @classmethod
    def from_json(cls, data: dict) -> "PartitionSpec":
        try:
            h = int(data["h"])
            pre = [tuple(int(x) for x in iv) for iv in data["preperiod"]]
            pattern = [int(c) for c in data["pattern"]]
            period = int(data.get("period", len(pattern)))
        except (KeyError, TypeError, ValueError) as exc:
            raise PartitionError(f"malformed partition document: {exc}") from exc
        if period != len(pattern):
            raise PartitionError(f"period {period} != pattern length {len(pattern)}")
        return cls.from_pattern(h, pre, pattern)


def _merge_intervals(intervals: Iterable[tuple[int, int, int]]) -> list[tuple[int, int, int]]:
    out: list[tuple[int, int, int]] = []
    for a, b, c in intervals:
        if out and out[-1][2] == c and out[-1][1] + 1 == a:
            out[-1] = (out[-1][0], b, c)
        else:
            out.append((a, b, c))
    return out


# -- constructors ----------------------------------------------------------------


def residue_partition(h: int) -> PartitionSpec:
    """W_i = {w : w ≡ i (mod h)}."""
    if h < 2:
        raise PartitionError(f"h >= 2 violated (h={h})")
    return PartitionSpec.from_runs(h, [], h, [(i, i) for i in range(h)])


def thm1_partition(p: Thm1Params) -> PartitionSpec:
    """W_0 = [0, m_1] ∪ ⋃ [m_i+t+1, m_(i+1)];  W_j = ⋃_{i ≡ j} [m_i+1, m_i+t].

    With arithmetic anchors the layout repeats every (h-1) blocks.
    """
    h, t, d = p.h, p.t, p.m_gap
    runs = []
    for b in range(h - 1):
        runs.append((b * d, _cyclic_cell(b + 1, h - 1)))
        runs.append((b * d + t, 0))
    return PartitionSpec.from_runs(h, [(0, p.m_start, 0)], d * (h - 1), runs)


def thm2_partition(p: Thm2Params) -> PartitionSpec:
    """W_0 = {mk, ..., mk+m-t-1};  W_i = {mk+m-t, ..., mk+m-1 : k ≡ i (mod h-1)}."""
    h, t, m = p.h, p.t, p.m
    runs = []
    for k in range(h - 1):
        runs.append((k * m, 0))
        runs.append((k * m + m - t, _cyclic_cell(k, h - 1)))
    return PartitionSpec.from_runs(h, [], m * (h - 1), runs)


def interval_partition(
    h: int,
    periodic: Sequence[tuple[int, int, int]],
    preperiod: Sequence[tuple[int, int, int]] = (),
) -> PartitionSpec:
    """Partition from explicit intervals (a, b, cell).

    ``preperiod`` must tile [0, E) and ``periodic`` must tile the offsets
    [0, P) of the repeating pattern, P being one past its largest endpoint.
    Overlaps, gaps and bad cell indices are reported at the first offending
    position.
    """
    pre = _tile(h, preperiod, "preperiod")
    per = _tile(h, periodic, "period")
    if not per:
        raise PartitionError("periodic part is empty")
    period = per[-1][1] + 1
    return PartitionSpec.from_runs(h, pre, period, [(a, c) for a, _, c in per])


def _tile(h: int, intervals, where: str) -> list[tuple[int, int, int]]:
    ivs = sorted((int(a), int(b), int(c)) for a, b, c in intervals)
    expect = 0
    for a, b, c in ivs:
        if b < a:
            raise PartitionError(f"{where}: empty interval [{a}, {b}]")
        if not 0 <= c < h:
            raise PartitionError(f"{where}: cell {c} out of range at position {a}")
        if a < expect:
            raise PartitionError(f"{where}: overlap at position {a}")
        if a > expect:
            raise PartitionError(f"{where}: gap at position {expect}")
        expect = b + 1
    return ivs


# -- hypothesis checks -----------------------------------------------------------


@dataclass(frozen=True)
class HypothesisReport:
    g: int
    h: int
    t: int
    cells_infinite: tuple[bool, ...]
    has_t_run: tuple[bool, ...]
    infinitely_many_t_runs: tuple[bool, ...]
    periodic_run_lengths: dict
    regime: str

    @property
    def all_infinite(self) -> bool:
        return all(self.cells_infinite)

    @property
    def all_have_t_run(self) -> bool:
        return all(self.has_t_run)

    @property
    def passes(self) -> bool:
        """Every cell infinite and containing t consecutive integers."""
        return self.all_infinite and self.all_have_t_run

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "h": self.h,
            "t": self.t,
            "cells_infinite": list(self.cells_infinite),
            "has_t_run": list(self.has_t_run),
            "infinitely_many_t_runs": list(self.infinitely_many_t_runs),
            "periodic_run_lengths": {
                str(c): [None if x == math.inf else x for x in v]
                for c, v in self.periodic_run_lengths.items()
            },
            "regime": self.regime,
            "passes": self.passes,
        }


def classify_regime(g: int, h: int, t: int) -> str:
    """Which result governs (g, h, t).

    "minimal" when t exceeds max(1, log h / log g); "non-minimal-blocks" when
    2 <= t <= log h / log g; "neither" otherwise. Integer comparisons only.
    """
    if t > 1 and g**t > h:
        return "minimal"
    if t >= 2 and g**t <= h:
        return "non-minimal-blocks"
    return "neither"


def check_hypotheses(spec: PartitionSpec, g: int, h: int, t: int) -> HypothesisReport:
    if spec.h != h:
        raise PartitionError(f"spec has {spec.h} cells, expected {h}")
    per = spec.periodic_runs()
    infinite = tuple(bool(per[c]) for c in range(h))
    periodic_t = tuple(any(x >= t for x in per[c]) for c in range(h))
    window = spec.window_runs(periods=2)
    any_t = tuple(
        periodic_t[c] or any(b - a + 1 >= t for a, b, cc in window if cc == c)
        for c in range(h)
    )
    return HypothesisReport(
        g=g,
        h=h,
        t=t,
        cells_infinite=infinite,
        has_t_run=any_t,
        infinitely_many_t_runs=periodic_t,
        periodic_run_lengths={c: sorted(per[c]) for c in range(h)},
        regime=classify_regime(g, h, t),
    )

"""Decompositions avoiding g^2 for the block partition.

For every n > m_2 the construction writes n as h elements of
A = A_g(W_0) ∪ ... ∪ A_g(W_{h-1}) none of which equals g^2, so g^2 is
removable from A except on a finite set. The case split follows the
support F_n of n against W_0:

    1.x   F_n misses W_0
    2.x   F_n meets W_0 in something other than {2}
    3.x   F_n ∩ W_0 = {2}

Most branches peel the top digit a*g^f0 into several single-digit parts
(``top_split``) so the part count comes out at exactly h.
"""

from __future__ import annotations

import functools
import random

from asymbasis.decompose.certificate import (
    DecompositionCertificate,
    DecompositionTrace,
    InvariantViolation,
    OutOfRangeError,
    require,
)
from asymbasis.decompose.grouping import GroupingError, split_groups
from asymbasis.gadic import expand, from_terms, power
from asymbasis.partition import PartitionSpec, Thm1Params, thm1_partition

LABELS = (
    "1.1",
    "1.2",
    "2.1",
    "2.2",
    "2.3-k3",
    "2.3-k2",
    "2.3-k2-f2",
    "2.3-k1",
    "3.1",
    "3.2",
    "3.3",
    "3.4",
)


class UnreachableCase(ValueError):
    """The requested case cannot occur for these parameters."""


@functools.lru_cache(maxsize=16)
def spec_for(p: Thm1Params) -> PartitionSpec:
    return thm1_partition(p)


def _split_support(n: int, p: Thm1Params, spec: PartitionSpec):
    terms = expand(n, p.g).terms
    w0 = [(f, a) for f, a in terms if spec.cell(f) == 0]
    rest = [(f, a) for f, a in terms if spec.cell(f) != 0]
    return terms, w0, rest


def _label(terms, w0, rest, h: int) -> str:
    if not w0:
        return "1.1" if len(rest) >= h else "1.2"
    if [f for f, _ in w0] != [2]:
        if rest:
            return "2.1" if len(rest) >= h - 1 else "2.2"
        k = len(w0)
        if k >= 3:
            return "2.3-k3"
        if k == 2:
            return "2.3-k2-f2" if w0[1] == (2, 1) else "2.3-k2"
        return "2.3-k1"
    a2 = w0[0][1]
    l = len(rest)
    if a2 > 1:
        return "3.1" if l >= h - 1 else "3.2"
    return "3.3" if l >= h - 2 else "3.4"


def classify_case(n: int, p: Thm1Params) -> str:
    """The case label decompose_thm1 takes for n."""
    if n <= p.m2:
        raise OutOfRangeError(f"n = {n} <= m_2 = {p.m2}")
    spec = spec_for(p)
    return _label(*_split_support(n, p, spec), p.h)


class _Builder:
    """Accumulates (value, cell) parts and checks for one decomposition."""

    def __init__(self, n: int, p: Thm1Params, spec: PartitionSpec):
        self.n, self.p, self.spec, self.g = n, p, spec, p.g
        self.parts: list[int] = []
        self.cells: list[int] = []
        self.checks: list = []
        self.repair: str | None = None

    def add(self, value: int, cell: int) -> None:
        self.parts.append(value)
        self.cells.append(cell)

    def single(self, f: int, a: int) -> None:
        self.add(a * power(self.g, f), self.spec.cell(f))

    def group(self, exps, digits: dict) -> None:
        g = self.g
        cell = self.spec.cell(exps[0])
        self.add(from_terms(((f, digits[f]) for f in exps), g), cell)

    def top_split(self, f0: int, a: int, count: int) -> int:
        """Add ``count`` parts summing to a*g^f0; return the lowest exponent used.

        a = 1:  (g-1)g^(f0-1), ..., (g-1)g^(f0-count+1), g^(f0-count+1)
        a > 1:  (a-1)g^f0, (g-1)g^(f0-1), ..., (g-1)g^(f0-count+2), g^(f0-count+2)
        """
        g, cell = self.g, self.spec.cell
        if count < 1:
            raise InvariantViolation(f"top split asked for {count} parts", n=self.n)
        if count == 1:
            self.add(a * power(g, f0), cell(f0))
            return f0
        singles = count - 1 if a == 1 else count - 2
        if a > 1:
            self.add((a - 1) * power(g, f0), cell(f0))
        pw = power(g, f0 - 1)
        for j in range(1, singles + 1):
            self.add((g - 1) * pw, cell(f0 - j))
            if j < singles:
                pw //= g
        low = f0 - singles
        self.add(power(g, low), cell(low))
        require(self.checks, "lowest split exponent >= 3", low, ">=", 3, n=self.n)
        return low


def decompose_thm1(n: int, p: Thm1Params, spec: PartitionSpec | None = None) -> DecompositionCertificate:
    """h parts of A \\ {g^2} summing to n, for n > m_2."""
    if n <= p.m2:
        raise OutOfRangeError(f"n = {n} <= m_2 = {p.m2}: outside the proven range")
    spec = spec or spec_for(p)
    g, h = p.g, p.h
    terms, w0, rest = _split_support(n, p, spec)
    label = _label(terms, w0, rest, h)
    digits = dict(terms)
    b = _Builder(n, p, spec)
    chk = b.checks
    scalars: dict = {}
    groups: tuple = ()
    exponents: tuple = ()

    try:
        if label in ("1.1", "2.1", "3.1"):
            need = h if label == "1.1" else h - 1
            grs = split_groups([f for f, _ in rest], spec.cell, need)
            groups = tuple(grs)
            if label == "2.1":
                b.add(from_terms(w0, g), 0)
                require(chk, "W_0 part != g^2", b.parts[0], "!=", g**2)
            elif label == "3.1":
                b.add(w0[0][1] * g**2, 0)
            for gr in grs:
                b.group(gr, digits)

        elif label in ("1.2", "2.2", "3.2", "3.4"):
            l = len(rest)
            f0, a0 = rest[0]
            exponents = tuple(f for f, _ in rest)
            scalars.update(l=l, a_f0=a0)
            require(chk, "f0 >= m_1 + 1", f0, ">=", p.m_start + 1)
            require(chk, "f0 > h + 2", f0, ">", h + 2)
            fixed = l - 1
            if label == "2.2":
                b.add(from_terms(w0, g), 0)
                fixed += 1
            elif label == "3.2":
                b.add(w0[0][1] * g**2, 0)
                fixed += 1
            elif label == "3.4":
                b.add((g - 1) * g, 0)
                b.add(g, 0)
                fixed += 2
            for f, a in rest[1:]:
                b.single(f, a)
            low = b.top_split(f0, a0, h - fixed)
            # floor on the lowest split exponent claimed for each case
            slack = {"1.2": 2, "2.2": 3, "3.2": 3, "3.4": 4}[label] + (0 if a0 == 1 else 1)
            require(chk, "lowest split exponent > l + floor", low, ">", l + slack)

        elif label.startswith("2.3"):
            k = len(terms)
            f0, a0 = terms[0]
            exponents = tuple(f for f, _ in terms)
            scalars.update(k=k, a_f0=a0)
            require(chk, "n > (g-1)(1+g+...+g^(h+1))", n, ">", g ** (h + 2) - 1)
            require(chk, "f0 >= h + 2", f0, ">=", h + 2)
            low_terms = terms[1:]
            if label == "2.3-k1":
                b.top_split(f0, a0, h)
            elif label == "2.3-k2":
                b.single(*low_terms[0])
                b.top_split(f0, a0, h - 1)
            elif label == "2.3-k2-f2":
                b.add((g - 1) * g, 0)
                b.add(g, 0)
                b.top_split(f0, a0, h - 2)
            elif k - 1 > h - 1:
                # more low digits than slots: keep h-2 singles, pool the rest;
                # a digit g^2 always goes into the pool
                b.repair = "group-excess"
                keep = [t for t in low_terms if t != (2, 1)][: h - 2]
                pooled = [t for t in low_terms if t not in keep]
                for f, a in keep:
                    b.single(f, a)
                b.add(from_terms(pooled, g), 0)
                b.add(a0 * power(g, f0), 0)
                groups = (tuple(f for f, _ in pooled),)
            elif (2, 1) in low_terms:
                # a lone g^2 part is forbidden: pair it with a neighbouring digit
                b.repair = "merge-forbidden"
                idx = low_terms.index((2, 1))
                mate = idx - 1 if idx > 0 else idx + 1
                pair = sorted((idx, mate))
                for j, (f, a) in enumerate(low_terms):
                    if j == pair[0]:
                        (f1, a1), (f2, a2) = low_terms[pair[0]], low_terms[pair[1]]
                        b.add(from_terms([(f1, a1), (f2, a2)], g), 0)
                        groups = ((f1, f2),)
                    elif j != pair[1]:
                        b.single(f, a)
                b.top_split(f0, a0, h - (k - 2))
            else:
                for f, a in low_terms:
                    b.single(f, a)
                if a0 > 1 and k == h:
                    b.repair = "single-top"
                b.top_split(f0, a0, h - (k - 1))

        else:  # 3.3
            l = len(rest)
            scalars.update(l=l)
            exponents = tuple(f for f, _ in rest)
            try:
                grs = split_groups([f for f, _ in rest], spec.cell, h - 2)
            except GroupingError:
                grs = None
            if grs is not None:
                groups = tuple(grs)
                b.add((g - 1) * g, 0)
                b.add(g, 0)
                for gr in grs:
                    b.group(gr, digits)
            else:
                b.repair = "w0-carry"
                scalars.update(_w0_carry(b, terms))

        if label.startswith("3"):
            require(chk, "min(F_n \\ {2}) > m_1", min(f for f, _ in rest), ">", p.m_start)

        require(chk, "part count == h", len(b.parts), "==", h)
        require(chk, "sum of parts == n", sum(b.parts), "==", n)
        forbidden = g**2
        for x in b.parts:
            require(chk, "part >= 1", x, ">=", 1)
            require(chk, "part != g^2", x, "!=", forbidden)
    except (InvariantViolation, GroupingError) as exc:
        trace = DecompositionTrace(label, n, scalars, exponents, groups, checks=tuple(chk), repair=b.repair)
        raise InvariantViolation(f"case {label}: {exc}", trace=trace, n=n) from exc

    trace = DecompositionTrace(
        case=label,
        n=n,
        scalars=scalars,
        exponents=exponents,
        groups=groups,
        checks=tuple(chk),
        repair=b.repair,
    )
    return DecompositionCertificate(
        n=n,
        g=g,
        h=h,
        parts=tuple(b.parts),
        part_cells=tuple(b.cells),
        forbidden=g**2,
        trace=trace,
    )


def _w0_carry(b: _Builder, terms) -> dict:
    """All h parts inside W_0: the digits of each cell block are produced as a
    carry out of the W_0 stretch directly below it.

    The block of m_j holds digits worth D_j * g^(m_j+1) with D_j < g^t <= h,
    so the segment [stretch ∪ block] value, split evenly over h parts, fits
    below g^(m_j+1) in each part.
    """
    p, g, h = b.p, b.g, b.p.h
    seg: dict[int, list] = {}
    for f, a in terms:
        j = 1 if f <= p.m_start + p.t else (f - p.m_start - 1) // p.m_gap + 1
        seg.setdefault(j, []).append((f, a))
    parts = [0] * h
    for j in sorted(seg):
        lo = 0 if j == 1 else p.m(j - 1) + p.t + 1
        top = p.m(j)
        content = from_terms([(f - top - 1, a) for f, a in seg[j] if f > top], g)
        require(b.checks, f"block {j} content <= h - 1", content, "<=", h - 1)
        scaled = from_terms([(f - lo, a) for f, a in seg[j]], g)
        q, r = divmod(scaled, h)
        share_max = q + (1 if r else 0)
        require(b.checks, f"segment {j} share < g^(m_j-lo+1)", share_max, "<", power(g, top - lo + 1))
        base = power(g, lo)
        for i in range(h):
            parts[i] += (q + (1 if i < r else 0)) * base
    for x in parts:
        b.add(x, 0)
    return {"segments": len(seg)}


# -- sampling ---------------------------------------------------------------------


def _cell_positions(p: Thm1Params, max_exp: int) -> list[int]:
    out = []
    i = 1
    while p.m(i) + 1 <= max_exp:
        out.extend(f for f in range(p.m(i) + 1, p.m(i) + p.t + 1) if f <= max_exp)
        i += 1
    return out


def _w0_position(rng: random.Random, spec: PartitionSpec, lo: int, hi: int) -> int:
    while True:
        f = rng.randint(lo, hi)
        if spec.cell(f) == 0:
            return f


def sample_for_case(
    label: str, p: Thm1Params, seed=0, max_exp: int | None = None
) -> int:
    """Random n > m_2 with every exponent <= max_exp and classify_case(n) == label."""
    if label not in LABELS:
        raise ValueError(f"unknown case label {label!r}")
    g, h = p.g, p.h
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    if max_exp is None:
        max_exp = p.m(h + 2) + p.t
    spec = spec_for(p)
    if label in ("3.1", "3.2") and g == 2:
        raise UnreachableCase(f"{label} needs a digit a_2 > 1, impossible for g = 2")
    if label == "3.4" and h - 3 < 1:
        raise UnreachableCase("3.4 needs h >= 4")
    cellpos = _cell_positions(p, max_exp)
    digit = lambda: rng.randint(1, g - 1)  # noqa: E731

    def pick_cells(lo: int, hi: int, spread: bool = False) -> list[int]:
        hi = min(hi, len(cellpos))
        if lo > hi:
            raise ValueError(f"max_exp = {max_exp} leaves too few cell positions for {label}")
        if spread:
            # one position from each nonzero cell, then fill up
            by_cell: dict[int, list[int]] = {}
            for f in cellpos:
                by_cell.setdefault(spec.cell(f), []).append(f)
            if len(by_cell) == h - 1:
                chosen = {rng.choice(v) for v in by_cell.values()}
                pool = [f for f in cellpos if f not in chosen]
                extra = rng.randint(max(0, lo - len(chosen)), max(0, hi - len(chosen)))
                return sorted(chosen | set(rng.sample(pool, min(extra, len(pool)))))
        return rng.sample(cellpos, rng.randint(lo, hi))

    # W_0 exponents large enough that n exceeds m_2 by themselves
    big = 0
    while g**big <= p.m2:
        big += 1
    terms: dict[int, int] = {}
    if label == "1.1":
        for f in pick_cells(h, h + 4):
            terms[f] = digit()
    elif label == "1.2":
        for f in pick_cells(1, h - 1):
            terms[f] = digit()
    elif label in ("2.1", "2.2"):
        for _ in range(rng.randint(1, 4)):
            terms[_w0_position(rng, spec, 0, max_exp)] = digit()
        if list(terms) == [2]:
            terms[_w0_position(rng, spec, 3, max_exp)] = digit()
        rng_cells = pick_cells(h - 1, h + 3) if label == "2.1" else pick_cells(1, h - 2)
        for f in rng_cells:
            terms[f] = digit()
    elif label.startswith("2.3"):
        top = _w0_position(rng, spec, big, max_exp)
        terms[top] = digit()
        if label == "2.3-k2-f2":
            terms[2] = 1
        elif label == "2.3-k2":
            while len(terms) < 2:
                f = _w0_position(rng, spec, 0, top - 1)
                a = digit()
                if (f, a) != (2, 1):
                    terms[f] = a
        elif label == "2.3-k3":
            below = [f for f in range(top) if spec.cell(f) == 0]
            k = rng.randint(3, h) if rng.random() < 0.7 else rng.randint(h + 1, 2 * h + 2)
            k = min(k, 1 + len(below))
            if rng.random() < 0.25:
                terms[2] = 1
                below.remove(2)
            for f in rng.sample(below, k - len(terms)):
                terms[f] = digit()
    else:
        a2 = rng.randint(2, g - 1) if label in ("3.1", "3.2") else 1
        terms[2] = a2
        if label == "3.1":
            fs = pick_cells(h - 1, h + 3)
        elif label == "3.2":
            fs = pick_cells(1, h - 2)
        elif label == "3.3":
            fs = pick_cells(h - 2, h + 3, spread=rng.random() < 0.5)
        else:
            fs = pick_cells(1, h - 3)
        for f in fs:
            terms[f] = digit()
    n = from_terms(terms.items(), g)
    got = classify_case(n, p)
    if got != label:
        raise InvariantViolation(f"sampler produced case {got}, wanted {label}", n=n)
    return n

"""Certificates: n, its h parts, the cell of each part, and a step trace."""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from asymbasis.gadic import is_member, to_decimal
from asymbasis.partition import PartitionSpec


class OutOfRangeError(ValueError):
    """n lies outside the range where the construction applies."""


class InvariantViolation(RuntimeError):
    """A step of a construction failed one of its own inequalities. Always a bug."""

    def __init__(self, message: str, trace: "DecompositionTrace | None" = None, **context):
        super().__init__(message)
        self.trace = trace
        self.context = context


_OPS = {
    "<": operator.lt,
    "<=": operator.le,
    ">": operator.gt,
    ">=": operator.ge,
    "==": operator.eq,
    "!=": operator.ne,
}


class Check(NamedTuple):
    """A recorded inequality lhs <op> rhs, evaluated in exact integers."""

    label: str
    lhs: int
    op: str
    rhs: int

    @property
    def holds(self) -> bool:
        return _OPS[self.op](self.lhs, self.rhs)


def require(checks: list, label: str, lhs: int, op: str, rhs: int, **context) -> None:
    """Record a check and raise InvariantViolation if it fails."""
    c = Check(label, lhs, op, rhs)
    checks.append(c)
    if not c.holds:
        raise InvariantViolation(f"failed: {label} ({lhs} {op} {rhs} is false)", **context)


def _num(x):
    return to_decimal(x) if isinstance(x, int) and not isinstance(x, bool) else x


@dataclass(frozen=True)
class DecompositionTrace:
    """Bookkeeping for one construction step; ``child`` links the step that
    produced the parts this one repaired (recursive constructions only)."""

    case: str
    n: int
    scalars: dict = field(default_factory=dict)
    exponents: tuple = ()
    groups: tuple = ()
    subtracted: int | None = None
    values: dict = field(default_factory=dict)
    checks: tuple = ()
    repair: str | None = None
    child: "DecompositionTrace | None" = None

    def steps(self) -> Iterator["DecompositionTrace"]:
        node = self
        while node is not None:
            yield node
            node = node.child

    def failed_checks(self) -> list[tuple[int, Check]]:
        return [(d, c) for d, s in enumerate(self.steps()) for c in s.checks if not c.holds]

    def step_json(self) -> dict:
        return {
            "case": self.case,
            "n": _num(self.n),
            "scalars": {k: _num(v) for k, v in self.scalars.items()},
            "exponents": list(self.exponents),
            "groups": [list(gr) for gr in self.groups],
            "subtracted": _num(self.subtracted),
            "values": {k: [_num(x) for x in v] for k, v in self.values.items()},
            "checks": [[c.label, _num(c.lhs), c.op, _num(c.rhs)] for c in self.checks],
            "repair": self.repair,
        }

    def to_json(self) -> dict:
        out = self.step_json()
        out["steps"] = [s.step_json() for s in list(self.steps())[1:]]
        return out


@dataclass(frozen=True)
class DecompositionCertificate:
    n: int
    g: int
    h: int
    parts: tuple
    part_cells: tuple
    forbidden: int | None
    trace: DecompositionTrace
    target_cell: int | None = None

    @property
    def sorted_parts(self) -> tuple:
        return tuple(sorted(self.parts))

    def to_json(self) -> dict:
        return {
            "n": to_decimal(self.n),
            "g": self.g,
            "h": self.h,
            "parts": [to_decimal(x) for x in self.parts],
            "sorted_parts": [to_decimal(x) for x in self.sorted_parts],
            "part_cells": list(self.part_cells),
            "forbidden": None if self.forbidden is None else to_decimal(self.forbidden),
            "target_cell": self.target_cell,
            "trace": self.trace.to_json(),
        }


@dataclass(frozen=True)
class Verdict:
    ok: bool
    clause: str | None = None
    part: int | None = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify_certificate(
    c: DecompositionCertificate, spec: PartitionSpec, g: int, check_trace: bool = True
) -> Verdict:
    """Independent check of a certificate against a partition.

    Uses only membership tests and integer addition. Clauses, in order:
    part-count, positive, forbidden, cell, target-cell, sum, trace.
    """
    if len(c.parts) != c.h or len(c.part_cells) != c.h:
        return Verdict(False, "part-count", None, f"{len(c.parts)} parts, expected {c.h}")
    for idx, x in enumerate(c.parts):
        if x < 1:
            return Verdict(False, "positive", idx, f"part {idx} = {x}")
    if c.forbidden is not None:
        for idx, x in enumerate(c.parts):
            if x == c.forbidden:
                return Verdict(False, "forbidden", idx, f"part {idx} equals {c.forbidden}")
    for idx, (x, cell) in enumerate(zip(c.parts, c.part_cells)):
        if not 0 <= cell < spec.h or not is_member(x, spec.predicate(cell), g):
            return Verdict(False, "cell", idx, f"part {idx} not in A_g(W_{cell})")
    if c.target_cell is not None:
        for idx, cell in enumerate(c.part_cells):
            if cell != c.target_cell:
                return Verdict(False, "target-cell", idx, f"part {idx} in cell {cell}")
    total = sum(c.parts)
    if total != c.n:
        return Verdict(False, "sum", None, f"parts sum to {total}, not {c.n}")
    if check_trace:
        bad = c.trace.failed_checks()
        if bad:
            depth, chk = bad[0]
            return Verdict(False, "trace", None, f"step {depth}: {chk.label}")
    return Verdict(True)

"""Split a set of digit positions into single-cell groups."""

from __future__ import annotations

from typing import Callable, Iterable


class GroupingError(ValueError):
    """No grouping with the requested count exists."""


def split_groups(
    F: Iterable[int], cells: Callable[[int], int], parts_needed: int
) -> list[tuple[int, ...]]:
    """Exactly ``parts_needed`` nonempty disjoint groups covering F, each inside one cell.

    Starts from singletons and, while there are too many groups, merges the
    two lowest groups of the lowest-indexed cell that still holds two or
    more. Groups come back ordered by their largest exponent, descending.
    """
    F = sorted(set(F))
    if parts_needed < 1:
        raise GroupingError("parts_needed must be positive")
    if len(F) < parts_needed:
        raise GroupingError(f"{len(F)} exponents cannot fill {parts_needed} groups")
    by_cell: dict[int, list[list[int]]] = {}
    for f in F:
        by_cell.setdefault(cells(f), []).append([f])
    if len(by_cell) > parts_needed:
        raise GroupingError(
            f"exponents span {len(by_cell)} cells, more than {parts_needed} groups"
        )
    count = len(F)
    while count > parts_needed:
        c = min(c for c, grs in by_cell.items() if len(grs) >= 2)
        grs = by_cell[c]
        grs.sort(key=min)
        merged = sorted(grs[0] + grs[1])
        grs[:2] = [merged]
        count -= 1
    groups = [tuple(sorted(gr, reverse=True)) for grs in by_cell.values() for gr in grs]
    groups.sort(key=lambda gr: gr[0], reverse=True)
    return groups

"""Asymptotic bases built from g-adic digit sets.

Constructs the sets A_g(W), partitions of the naturals into digit-position
cells, bounded sumset oracles, and certified h-part decompositions that
witness non-minimality of the resulting bases.
"""

from asymbasis.gadic import (
    GadicExpansion,
    count_members,
    enumerate_members,
    evaluate,
    expand,
    is_member,
)
from asymbasis.partition import (
    PartitionError,
    PartitionSpec,
    Thm1Params,
    Thm2Params,
    check_hypotheses,
    interval_partition,
    residue_partition,
    thm1_partition,
    thm2_partition,
)

__all__ = [
    "GadicExpansion",
    "PartitionError",
    "PartitionSpec",
    "Thm1Params",
    "Thm2Params",
    "check_hypotheses",
    "count_members",
    "enumerate_members",
    "evaluate",
    "expand",
    "interval_partition",
    "is_member",
    "residue_partition",
    "thm1_partition",
    "thm2_partition",
]

__version__ = "0.1.0"

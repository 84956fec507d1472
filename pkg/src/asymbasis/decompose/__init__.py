"""Constructive decompositions with independently checkable certificates."""

from asymbasis.decompose.certificate import (
    Check,
    DecompositionCertificate,
    DecompositionTrace,
    InvariantViolation,
    OutOfRangeError,
    Verdict,
    verify_certificate,
)
from asymbasis.decompose.grouping import GroupingError, split_groups
from asymbasis.decompose.thm1 import (
    LABELS,
    UnreachableCase,
    classify_case,
    decompose_thm1,
    sample_for_case,
)
from asymbasis.decompose.thm2 import decompose_thm2

__all__ = [
    "Check",
    "DecompositionCertificate",
    "DecompositionTrace",
    "GroupingError",
    "InvariantViolation",
    "LABELS",
    "OutOfRangeError",
    "UnreachableCase",
    "Verdict",
    "classify_case",
    "decompose_thm1",
    "decompose_thm2",
    "sample_for_case",
    "split_groups",
    "verify_certificate",
]

"""Python access to the specker-lab core.  Integers are plain Python ints."""

import json

from ._specker import (
    AuditFailure,
    DominationFails,
    HorizonExceeded,
    NoNonzeroKernel,
    block_of_matrix,
    brute_min_solution,
    certify_unbounded,
    diag_scale,
    evaluate_points,
    kernel_basis,
    matrix_for_index,
    min_solution,
    nwd_extend,
    partition_block,
    preservation_traces,
    verify_family,
)
from ._specker import build_family as build_family_json


def build_family(**config):
    """Build a family and return it as a dict (see build_family_json)."""
    return json.loads(build_family_json(**config))


__all__ = [
    "AuditFailure",
    "DominationFails",
    "HorizonExceeded",
    "NoNonzeroKernel",
    "block_of_matrix",
    "brute_min_solution",
    "build_family",
    "build_family_json",
    "certify_unbounded",
    "diag_scale",
    "evaluate_points",
    "kernel_basis",
    "matrix_for_index",
    "min_solution",
    "nwd_extend",
    "partition_block",
    "preservation_traces",
    "verify_family",
]

"""Exact Manhattan sequence consensus for up to five integer sequences."""

from .easy import CanonicalProgram, canonicalize, solve_easy, solve_fast, solve_reference
from .five import all_systems, governing_set, solve_k5
from .ilp import PmIlp, build_ilp, lift_ilp_solution, merge_variables, negate_variable, normalize
from .kernel import kernelize, lift_kernel_solution
from .model import (
    BasicInterval,
    ConsensusSolution,
    ContractError,
    InstanceMatrix,
    InternalError,
    IntervalSystem,
    UsageError,
    dist_to_collection,
    manhattan_dist,
    sort_columns,
)
from .oracle import brute_force_easy, brute_force_msc, random_instance

__all__ = [
    "BasicInterval",
    "CanonicalProgram",
    "ConsensusSolution",
    "ContractError",
    "InstanceMatrix",
    "InternalError",
    "IntervalSystem",
    "PmIlp",
    "UsageError",
    "all_systems",
    "brute_force_easy",
    "brute_force_msc",
    "build_ilp",
    "canonicalize",
    "dist_to_collection",
    "governing_set",
    "kernelize",
    "lift_ilp_solution",
    "lift_kernel_solution",
    "manhattan_dist",
    "merge_variables",
    "negate_variable",
    "normalize",
    "random_instance",
    "solve_easy",
    "solve_fast",
    "solve_k5",
    "solve_reference",
    "sort_columns",
]

"""Exact enumeration of minimal transitive cycle factorizations of permutations."""
from .perm import (
    CycleFactorization,
    CycleIndex,
    Factorization,
    Infeasible,
    InfeasibleIndexError,
    Permutation,
    are_disjoint,
    cycle_type,
    format_cycles,
    genus_of_index,
    is_transitive,
    multiply,
    parse_cycles,
)

__version__ = "0.1.0"

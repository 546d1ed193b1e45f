"""Exhaustive generation of minimal transitive cycle factorizations.

The search places factors from the left (``s_r`` first).  After choosing a
prefix, the remaining factors must multiply to ``rest`` and must connect the
blocks already formed.  If ``c(rest)`` is the number of cycles of ``rest`` and
``q`` the number of components after joining the current blocks with the
cycles of ``rest``, any completion needs

    sum (k - 1)  >=  (n - c(rest)) + 2 (q - 1)

with equal parity, and genus 0 makes this bound tight at the root, so almost
every node of the search lies on a valid branch.
"""
from __future__ import annotations

import math
import os
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Iterator, Sequence

from .perm import (
    CycleFactorization,
    CycleIndex,
    Factorization,
    Permutation,
    are_disjoint,
    canonical_target,
    cycle_type,
    genus_of_index,
    permutations_of_type,
    require_genus_zero,
)

DEFAULT_MAX_DEGREE = 8
MAX_SEARCH_SIZE = 10**8


class BoundExceededError(ValueError):
    """The requested search is larger than the configured guards allow."""


def max_degree() -> int:
    value = os.environ.get("CYCLEFACT_MAX_DEGREE")
    return int(value) if value else DEFAULT_MAX_DEGREE


def count_cycles_of_length(n: int, k: int) -> int:
    if k > n:
        return 0
    return math.factorial(n) // (math.factorial(n - k) * k)


def search_size_bound(n: int, index: CycleIndex) -> int:
    """Loose bound on the number of ordered tuples of cycles with this index."""
    bound = 1
    for k in index.lengths():
        bound *= count_cycles_of_length(n, k)
    return bound


def _check_guards(n: int, index: CycleIndex, degree_bound: int | None) -> None:
    limit = max_degree() if degree_bound is None else degree_bound
    if n > limit:
        raise BoundExceededError(f"degree {n} exceeds enumeration bound {limit}")
    size = search_size_bound(n, index)
    if size > MAX_SEARCH_SIZE:
        raise BoundExceededError(f"search space bound {size} exceeds {MAX_SEARCH_SIZE}")


def all_cycles(n: int, k: int) -> list[Permutation]:
    """All k-cycles of S_n, in lexicographic order of their canonical cycle tuple."""
    out = []
    for points in combinations(range(1, n + 1), k):
        first, rest = points[0], points[1:]
        for arrangement in permutations(rest):
            out.append(Permutation.cycle((first,) + arrangement, n))
    return out


def _cycle_count(images: tuple[int, ...]) -> tuple[int, list[int]]:
    """Number of cycles and the support bitmask of each cycle (0-based images)."""
    n = len(images)
    seen = [False] * n
    masks = []
    for start in range(n):
        if seen[start]:
            continue
        mask = 0
        v = start
        while not seen[v]:
            seen[v] = True
            mask |= 1 << v
            v = images[v]
        masks.append(mask)
    return len(masks), masks


def _merge(blocks: tuple[int, ...], mask: int) -> tuple[int, ...]:
    merged = mask
    keep = []
    for b in blocks:
        if b & merged:
            merged |= b
        else:
            keep.append(b)
    # a second pass catches blocks that only touch the grown mask
    changed = True
    while changed:
        changed = False
        still = []
        for b in keep:
            if b & merged:
                merged |= b
                changed = True
            else:
                still.append(b)
        keep = still
    keep.append(merged)
    return tuple(sorted(keep))


def _component_count(blocks: tuple[int, ...], masks: list[int]) -> int:
    current = blocks
    for m in masks:
        if m & (m - 1):
            current = _merge(current, m)
    return len(current)


def _search(
    n: int,
    rest: tuple[int, ...],
    blocks: tuple[int, ...],
    lengths: dict[int, int],
    budget: int,
    cycles_by_length: dict[int, list[tuple[tuple[int, ...], int, Permutation]]],
    prefix: list[Permutation],
) -> Iterator[list[Permutation]]:
    if budget == 0:
        if len(blocks) == 1 and all(rest[v] == v for v in range(n)):
            yield list(prefix)
        return
    for k in sorted(lengths):
        if not lengths[k]:
            continue
        lengths[k] -= 1
        new_budget = budget - (k - 1)
        for inv, mask, cyc in cycles_by_length[k]:
            new_rest = tuple(inv[t] for t in rest)
            c, masks = _cycle_count(new_rest)
            distance = n - c
            if distance > new_budget or (new_budget - distance) % 2:
                continue
            new_blocks = _merge(blocks, mask)
            q = _component_count(new_blocks, masks)
            if distance + 2 * (q - 1) > new_budget:
                continue
            prefix.append(cyc)
            yield from _search(n, new_rest, new_blocks, lengths, new_budget, cycles_by_length, prefix)
            prefix.pop()
        lengths[k] += 1


def _raw_factorizations(
    rest: Permutation, index: CycleIndex, initial_blocks: Sequence[Sequence[int]] = ()
) -> Iterator[list[Permutation]]:
    n = rest.degree
    cycles_by_length = {}
    for k in set(index.lengths()):
        entries = []
        for cyc in all_cycles(n, k):
            inv = tuple(image - 1 for image in cyc.inverse().images)
            mask = sum(1 << (v - 1) for v in cyc.support)
            entries.append((inv, mask, cyc))
        cycles_by_length[k] = entries
    blocks = [1 << v for v in range(n)]
    block_t = tuple(sorted(blocks))
    for group in initial_blocks:
        block_t = _merge(block_t, sum(1 << (v - 1) for v in group))
    rest0 = tuple(image - 1 for image in rest.images)
    lengths = index.as_dict()
    if index.weight == 0:
        if len(block_t) == 1 and rest.is_identity():
            yield []
        return
    yield from _search(n, rest0, block_t, lengths, index.weight, cycles_by_length, [])


@dataclass(frozen=True)
class FactorizationSet:
    """All minimal transitive cycle factorizations of ``target`` with a given index."""

    target: Permutation
    index: CycleIndex
    items: tuple[CycleFactorization, ...]

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


def enumerate_factorizations(
    target: Permutation, index: CycleIndex, degree_bound: int | None = None
) -> FactorizationSet:
    """Every ordered tuple of cycles with cycle index ``index`` multiplying to ``target``
    whose factors act transitively.  Rejects indices of nonzero genus."""
    require_genus_zero(cycle_type(target), index)
    _check_guards(target.degree, index, degree_bound)
    items = [
        CycleFactorization.unchecked(tuple(factors), target) for factors in _raw_factorizations(target, index)
    ]
    items.sort(key=CycleFactorization.sort_key)
    return FactorizationSet(target, index, tuple(items))


def count_ordered(alpha: Sequence[int], index: CycleIndex, degree_bound: int | None = None) -> int:
    """Brute-force number of cycle factorizations of a fixed permutation of type ``alpha``."""
    return len(enumerate_factorizations(canonical_target(alpha), index, degree_bound))


# -- commutation classes -------------------------------------------------------


@dataclass(frozen=True)
class EquivalenceClasses:
    base: FactorizationSet
    classes: tuple[tuple[int, ...], ...]   # item indices, each sorted; classes sorted by first index
    representatives: tuple[CycleFactorization, ...]

    def __len__(self) -> int:
        return len(self.classes)

    def class_of(self) -> dict[int, int]:
        return {i: c for c, members in enumerate(self.classes) for i in members}


def _bfs_classes(tuples: Sequence[tuple], movable_from: int = 0) -> list[list[int]]:
    """Partition tuples into classes under swaps of adjacent disjoint entries
    at positions >= ``movable_from``."""
    position = {t: i for i, t in enumerate(tuples)}
    assigned = [-1] * len(tuples)
    classes = []
    for start in range(len(tuples)):
        if assigned[start] >= 0:
            continue
        cid = len(classes)
        assigned[start] = cid
        members = [start]
        queue = deque([start])
        while queue:
            t = tuples[queue.popleft()]
            for pos in range(movable_from, len(t) - 1):
                if are_disjoint(t[pos], t[pos + 1]):
                    swapped = t[:pos] + (t[pos + 1], t[pos]) + t[pos + 2:]
                    j = position.get(swapped)
                    if j is None:
                        raise AssertionError("commutation left the factorization set")
                    if assigned[j] < 0:
                        assigned[j] = cid
                        members.append(j)
                        queue.append(j)
        classes.append(sorted(members))
    return classes


def commutation_classes(fset: FactorizationSet) -> EquivalenceClasses:
    """Classes under repeated exchange of adjacent factors with disjoint supports."""
    classes = _bfs_classes([f.factors for f in fset.items])
    reps = tuple(fset.items[members[0]] for members in classes)
    return EquivalenceClasses(fset, tuple(tuple(c) for c in classes), reps)


def count_inequivalent(alpha: Sequence[int], index: CycleIndex, degree_bound: int | None = None) -> int:
    fset = enumerate_factorizations(canonical_target(alpha), index, degree_bound)
    return len(commutation_classes(fset))


# -- beta-factorizations of the full cycle ----------------------------------------


@dataclass(frozen=True)
class BetaFactorizationSet:
    """Factorizations ``(rho, s_r, ..., s_1)`` of the full cycle with rho of type beta.

    ``classes`` are commutation classes among the cycle factors only; rho stays put.
    """

    n: int
    beta: tuple[int, ...]
    index: CycleIndex
    items: tuple[Factorization, ...]
    classes: tuple[tuple[int, ...], ...] = field(default=())

    def __len__(self) -> int:
        return len(self.items)

    def head(self, i: int) -> Permutation:
        return self.items[i].factors[0]


def enumerate_beta_factorizations(
    n: int, beta: Sequence[int], index: CycleIndex, degree_bound: int | None = None
) -> BetaFactorizationSet:
    beta = tuple(sorted(beta, reverse=True))
    if sum(beta) != n:
        raise ValueError(f"beta={beta} is not a partition of {n}")
    full = Permutation.cycle(tuple(range(1, n + 1)), n)
    g = genus_of_index((n,), index, extra=n - len(beta))
    if g != 0:
        return BetaFactorizationSet(n, beta, index, ())
    _check_guards(n, index, degree_bound)
    items = []
    for rho in permutations_of_type(beta, n):
        rest = rho.inverse() * full
        for sigmas in _raw_factorizations(rest, index, rho.cycles(include_fixed=False)):
            items.append(Factorization.unchecked((rho, *sigmas), full))
    items.sort(key=Factorization.sort_key)
    classes = _bfs_classes([f.factors for f in items], movable_from=1)
    return BetaFactorizationSet(n, beta, index, tuple(items), tuple(tuple(c) for c in classes))

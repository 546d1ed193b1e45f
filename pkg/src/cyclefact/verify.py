"""The ten acceptance check groups, shared by ``cyclefact verify`` and the test suite.

Each group compares two independent computations at exact equality and
returns one :class:`Check` per compared quantity.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import Callable

from . import formulas
from .enumerator import (
    commutation_classes,
    enumerate_beta_factorizations,
    enumerate_factorizations,
    search_size_bound,
)
from .maps import (
    constellation_from_factorization,
    cyclic_descents,
    factorization_from_constellation,
    graft,
    insertion_positions,
    mark_descents,
    marked_graft,
    marked_prune,
    polymap_of,
    prune,
)
from .perm import CycleIndex, canonical_target, genus_zero_indices, partitions
from .series import (
    circular_descent_count,
    necklace_series,
    q_polynomial,
    solve_w,
    solve_wtilde,
    theorem1_series,
    theorem2_series,
    TruncatedSeries,
)

DEFAULT_SEED = 20240601
ROUND_TRIP_SEARCH_CAP = 400_000
"""Round-trip sets are those whose search-size bound stays below this cap."""


@dataclass(frozen=True)
class Check:
    label: str
    expected: object
    actual: object

    @property
    def passed(self) -> bool:
        return self.expected == self.actual

    def as_dict(self) -> dict:
        return {"label": self.label, "expected": _jsonable(self.expected), "actual": _jsonable(self.actual), "passed": self.passed}


def _jsonable(value):
    if isinstance(value, (int, str, bool)) or value is None:
        return value
    return str(value)


@dataclass
class GroupResult:
    number: int
    title: str
    checks: list[Check] = field(default_factory=list)
    error: str | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.error is None and bool(self.checks) and all(c.passed for c in self.checks)

    @property
    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"; error: {self.error}" if self.error else ""
        bad = len(self.failures)
        return f"[{status}] criterion {self.number}: {self.title} ({len(self.checks)} checks, {bad} failed{extra})"

    def as_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "error": self.error,
            "checks": [c.as_dict() for c in self.checks],
        }


@dataclass(frozen=True)
class Bounds:
    """Size limits of a verification run; ``quick`` caps every n at 4."""

    full_cycle_ordered: int = 6
    hurwitz: int = 6
    theorem1: int = 5
    theorem1_kmax: int = 4
    inequivalent: int = 5
    theorem2: int = 5
    residual_order: int = 8
    residual_kmax: int = 5
    round_trip: int = 5
    random_lists: int = 10_000
    random_length: int = 12
    circular: int = 7
    necklace: int = 8
    beta: int = 5
    seed: int = DEFAULT_SEED

    @classmethod
    def quick(cls, seed: int = DEFAULT_SEED) -> "Bounds":
        return cls.full().capped(4, seed)

    @classmethod
    def full(cls, seed: int = DEFAULT_SEED) -> "Bounds":
        return cls(seed=seed)

    def capped(self, nmax: int, seed: int | None = None) -> "Bounds":
        def cap(x: int) -> int:
            return min(x, nmax)

        return Bounds(
            full_cycle_ordered=cap(self.full_cycle_ordered),
            hurwitz=cap(self.hurwitz),
            theorem1=max(2, cap(self.theorem1)),
            theorem1_kmax=self.theorem1_kmax,
            inequivalent=cap(self.inequivalent),
            theorem2=max(2, cap(self.theorem2)),
            residual_order=cap(self.residual_order),
            residual_kmax=self.residual_kmax,
            round_trip=cap(self.round_trip),
            random_lists=self.random_lists,
            random_length=self.random_length,
            circular=cap(self.circular),
            necklace=cap(self.necklace),
            beta=cap(self.beta),
            seed=self.seed if seed is None else seed,
        )


@lru_cache(maxsize=None)
def _factorizations(alpha: tuple[int, ...], index: CycleIndex):
    return enumerate_factorizations(canonical_target(alpha), index)


@lru_cache(maxsize=None)
def _classes(alpha: tuple[int, ...], index: CycleIndex):
    return commutation_classes(_factorizations(alpha, index))


def clear_caches() -> None:
    _factorizations.cache_clear()
    _classes.cache_clear()


def _two_part(total: int):
    for n in range(2, total + 1):
        for a in range(n - 1, 0, -1):
            yield a, n - a


# -- the groups ---------------------------------------------------------------------


def group_full_cycle_ordered(b: Bounds) -> list[Check]:
    out = []
    for n in range(1, b.full_cycle_ordered + 1):
        for idx in genus_zero_indices((n,)):
            out.append(Check(f"n={n} index {idx or '-'}", formulas.springer_ordered(n, idx), len(_factorizations((n,), idx))))
    return out


def group_hurwitz(b: Bounds) -> list[Check]:
    out = []
    for n in range(2, b.hurwitz + 1):
        for a in range(n - 1, (n - 1) // 2, -1):
            alpha = (a, n - a)
            idx = CycleIndex.of(i2=n)
            out.append(Check(f"alpha={alpha}", formulas.hurwitz_number(alpha), len(_factorizations(alpha, idx))))
    return out


def _two_part_coefficients(H: TruncatedSeries, total: int, kmax: int, ordered: bool) -> list[Check]:
    out = []
    for a, c in _two_part(total):
        alpha = (a, c)
        for idx in genus_zero_indices(alpha, max_k=kmax):
            spec = {"x1": a, "x2": c, "u": idx.r, **{f"q{k}": m for k, m in idx.items}}
            scale = a * c * (factorial(idx.r) if ordered else 1)
            if ordered:
                oracle = len(_factorizations(tuple(sorted(alpha, reverse=True)), idx))
            else:
                oracle = len(_classes(tuple(sorted(alpha, reverse=True)), idx))
            out.append(Check(f"(a,b)=({a},{c}) index {idx}", oracle, scale * H.coeff(spec)))
    return out


def group_theorem1(b: Bounds) -> list[Check]:
    H = theorem1_series(b.theorem1, b.theorem1_kmax)
    return _two_part_coefficients(H, b.theorem1, b.theorem1_kmax, ordered=True)


def group_inequivalent(b: Bounds) -> list[Check]:
    out = []
    for n in range(1, b.inequivalent + 1):
        for idx in genus_zero_indices((n,)):
            out.append(Check(f"n={n} index {idx or '-'}", formulas.springer_inequivalent(n, idx), len(_classes((n,), idx))))
        if n >= 2:
            idx = CycleIndex.of(i2=n - 1)
            out.append(Check(f"n={n} transpositions (k-cycle formula)", formulas.kcycle_inequivalent_fullcycle(n, 2), len(_classes((n,), idx))))
    return out


def group_theorem2(b: Bounds) -> list[Check]:
    kmax = max(2, b.theorem2)
    H = theorem2_series(b.theorem2, kmax)
    return _two_part_coefficients(H, b.theorem2, kmax, ordered=False)


def group_residuals(b: Bounds) -> list[Check]:
    N, K = b.residual_order, b.residual_kmax
    w = solve_w(N, K)
    x = TruncatedSeries.var("x", w.variables, w.graded, N)
    u = TruncatedSeries.var("u", w.variables, w.graded, N)
    res_w = w - x * (u * q_polynomial(K, w)).exp()
    t = solve_wtilde(N, K)
    res_t = t - 1 - u * t * q_polynomial(K, x * t * t)
    h = t.specialize({"u": 1, "q2": 1}, zero_others=True)
    hx = TruncatedSeries.var("x", h.variables, h.graded, N)
    res_h = h - 1 - hx * h * h * h
    return [
        Check(f"w residual terms (N={N}, K={K})", 0, len(res_w.terms)),
        Check(f"wtilde residual terms (N={N}, K={K})", 0, len(res_t.terms)),
        Check("h = 1 + x h^3 residual terms", 0, len(res_h.terms)),
    ]


def round_trip_family(nmax: int):
    """Enumerated sets used by the bijection checks."""
    for n in range(1, nmax + 1):
        for alpha in partitions(n):
            for idx in genus_zero_indices(alpha):
                if search_size_bound(n, idx) <= ROUND_TRIP_SEARCH_CAP:
                    yield alpha, idx


def _round_trip_ok(F) -> bool:
    C = constellation_from_factorization(F)
    if factorization_from_constellation(C) != F:
        return False
    if C.descent_cycles() != F.target or C.euler_genus() != 0:
        return False
    M = polymap_of(F)
    if M != C or not M.is_proper():
        return False
    if M.n_faces >= 2:
        P = prune(M)
        back, _ = graft(P.forests, P.core, P.core_face_labels)
        if back != M:
            return False
    marked = mark_descents(M)
    if marked.descent_cycles() != F.target:
        return False
    if marked.n_faces >= 2:
        mp = marked_prune(marked)
        if marked_graft(mp.core, mp.cacti) != marked:
            return False
    return True


def group_round_trips(b: Bounds) -> list[Check]:
    out = []
    for alpha, idx in round_trip_family(b.round_trip):
        fs = _factorizations(alpha, idx)
        good = sum(1 for F in fs if _round_trip_ok(F))
        out.append(Check(f"alpha={alpha} index {idx or '-'}", len(fs), good))
    return out


def group_marked_classes(b: Bounds) -> list[Check]:
    out = []
    for alpha, idx in round_trip_family(b.round_trip):
        fs = _factorizations(alpha, idx)
        images = {mark_descents(polymap_of(F)) for F in fs}
        out.append(Check(f"alpha={alpha} index {idx or '-'}", len(_classes(alpha, idx)), len(images)))
    return out


def _exhaustive_circular(n: int) -> list[int]:
    tallies = [0] * (n + 1)
    for rest in permutations(range(2, n + 1)):
        tallies[len(cyclic_descents((1, *rest)))] += 1
    return tallies


def group_lemmas(b: Bounds) -> list[Check]:
    rng = random.Random(b.seed)
    agree = 0
    for _ in range(b.random_lists):
        k = rng.randint(1, b.random_length)
        L = [rng.randint(0, 15) * 2 for _ in range(k)]
        a = rng.randint(0, 15) * 2 + 1
        if len(insertion_positions(L, a)) == len(cyclic_descents(L)):
            agree += 1
    out = [
        Check(f"random cyclic lists (seed {b.seed})", b.random_lists, agree),
        Check("L=<2,7,1,3,6,5,7,3>, a=4", 4, len(insertion_positions([2, 7, 1, 3, 6, 5, 7, 3], 4))),
    ]
    for n in range(2, b.circular + 1):
        tallies = _exhaustive_circular(n)
        series = [circular_descent_count(n, d) for d in range(n + 1)]
        out.append(Check(f"circular descents n={n}", tallies, series))
    top = b.necklace
    S = necklace_series(top)
    for total in range(2, top + 1):
        for n in range(1, total):
            m = total - n
            value = factorial(n) * factorial(m) * S.coeff((n, m, total))
            out.append(Check(f"necklaces n={n}, m={m}", factorial(total - 1), value))
    return out


def group_beta(b: Bounds) -> list[Check]:
    out = []
    for n in range(1, b.beta + 1):
        for beta in partitions(n):
            ell = len(beta)
            for idx in genus_zero_indices((n,), extra=n - ell):
                fset = enumerate_beta_factorizations(n, beta, idx)
                label = f"n={n} beta={beta} index {idx or '-'}"
                if idx.r == 0:
                    out.append(Check(label + " (single factor rho)", 1, len(fset.classes)))
                else:
                    out.append(Check(label, formulas.beta_inequivalent_fullcycle(n, beta, idx), len(fset.classes)))
        ones = (1,) * n
        for idx in genus_zero_indices((n,)):
            if idx.r:
                out.append(Check(f"n={n} beta=[1^n] reduction index {idx}", formulas.springer_inequivalent(n, idx), formulas.beta_inequivalent_fullcycle(n, ones, idx)))
    return out


GROUPS: list[tuple[int, str, Callable[[Bounds], list[Check]]]] = [
    (1, "ordered full-cycle counts vs n^(r-1) r!/prod i_k!", group_full_cycle_ordered),
    (2, "two-part transposition counts vs Hurwitz formula", group_hurwitz),
    (3, "H2 coefficients vs ordered two-part counts", group_theorem1),
    (4, "full-cycle class counts vs (2n+r-2)!/((2n-1)! prod i_k!)", group_inequivalent),
    (5, "H2~ coefficients vs two-part class counts", group_theorem2),
    (6, "functional-equation residuals", group_residuals),
    (7, "bijection round trips", group_round_trips),
    (8, "marked polymaps vs commutation classes", group_marked_classes),
    (9, "cyclic-list, circular-descent and necklace lemmas", group_lemmas),
    (10, "beta-factorization formula", group_beta),
]


def run_group(number: int, bounds: Bounds) -> GroupResult:
    _, title, fn = GROUPS[number - 1]
    result = GroupResult(number, title)
    start = time.perf_counter()
    try:
        result.checks = fn(bounds)
    except Exception as exc:  # a crash is a failed group, reported not raised
        result.error = f"{type(exc).__name__}: {exc}"
    result.seconds = time.perf_counter() - start
    return result


def run_all(bounds: Bounds, groups: list[int] | None = None) -> list[GroupResult]:
    return [run_group(g, bounds) for g in (groups or [n for n, _, _ in GROUPS])]

"""Exact evaluators for the closed counting formulas, plus Lagrange-inversion variants.

Every evaluator returns a Python ``int``; rational intermediates use
:class:`fractions.Fraction` and integrality is asserted, never rounded.
Feasibility ("zero otherwise") always goes through :func:`genus_of_index`.
"""
from __future__ import annotations

from fractions import Fraction
from math import comb, factorial, prod
from typing import Sequence

from .perm import CycleIndex, genus_of_index


class FormulaError(ArithmeticError):
    """A formula produced a non-integer or two methods disagreed."""


def _as_int(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise FormulaError(f"{what} evaluated to non-integer {value}")
    return int(value)


def _feasible(alpha: Sequence[int], index: CycleIndex, extra: int = 0) -> bool:
    return genus_of_index(alpha, index, extra) == 0


def _index_factorials(index: CycleIndex) -> int:
    return prod(factorial(c) for _, c in index.items)


def multinomial(counts: Sequence[int]) -> int:
    return factorial(sum(counts)) // prod(factorial(c) for c in counts)


def hurwitz_number(alpha: Sequence[int]) -> int:
    """Minimal transitive transposition factorizations of a fixed permutation of type alpha."""
    alpha = tuple(alpha)
    if not alpha or any(a < 1 for a in alpha):
        raise ValueError(f"not a partition: {alpha}")
    n, m = sum(alpha), len(alpha)
    value = Fraction(n) ** (m - 3) * factorial(n + m - 2)
    for a in alpha:
        value *= Fraction(a ** (a + 1), factorial(a))
    return _as_int(value, "Hurwitz formula")


def springer_ordered(n: int, index: CycleIndex) -> int:
    """Ordered cycle factorizations of (1 2 ... n): n^(r-1) r! / prod i_k!."""
    if not _feasible((n,), index):
        return 0
    r = index.r
    value = Fraction(n) ** (r - 1) * factorial(r) / _index_factorials(index)
    return _as_int(value, "ordered full-cycle formula")


def springer_inequivalent(n: int, index: CycleIndex) -> int:
    """Commutation classes of cycle factorizations of (1 2 ... n)."""
    if not _feasible((n,), index):
        return 0
    r = index.r
    value = Fraction(factorial(2 * n + r - 2), factorial(2 * n - 1) * _index_factorials(index))
    return _as_int(value, "inequivalent full-cycle formula")


def kcycle_inequivalent_fullcycle(n: int, k: int) -> int:
    """Classes of k-cycle factorizations of (1 2 ... n): C(2n+r-2, r)/(2n-1) with n = 1 + r(k-1)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    if n < 1 or (n - 1) % (k - 1):
        return 0
    r = (n - 1) // (k - 1)
    return _as_int(Fraction(comb(2 * n + r - 2, r), 2 * n - 1), "k-cycle formula")


def beta_inequivalent_fullcycle(n: int, beta: Sequence[int], index: CycleIndex) -> int:
    """Classes of factorizations (rho, s_r, ..., s_1) of (1 2 ... n) with rho of type beta.

    Requires r >= 1: at r = 0 the formula contains (-1)! and the only such
    factorization is the one-factor ((1 2 ... n)).
    """
    beta = tuple(beta)
    if sum(beta) != n or any(b < 1 for b in beta):
        raise ValueError(f"beta={beta} is not a partition of {n}")
    r = index.r
    if r < 1:
        raise ValueError("the beta formula needs at least one cycle factor")
    ell = len(beta)
    if not _feasible((n,), index, extra=n - ell):
        return 0
    mult = {}
    for b in beta:
        mult[b] = mult.get(b, 0) + 1
    denom = _index_factorials(index) * prod(factorial(j) for j in mult.values())
    value = Fraction(n * factorial(r - 1) * factorial(ell - 1) * comb(r + ell + n - 2, r - 1), denom)
    return _as_int(value, "beta formula")


# -- Lagrange inversion ------------------------------------------------------------------


def _poly_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_pow(p: list[int], e: int) -> list[int]:
    out = [1]
    for _ in range(e):
        out = _poly_mul(out, p)
    return out


def _q_power_coefficient(index: CycleIndex) -> tuple[int, int]:
    """[q^i] Q(t)^r as (coefficient, t-exponent): Q = sum q_k t^(k-1)."""
    counts = [c for _, c in index.items]
    return multinomial(counts), index.weight


def lagrange_ordered(n: int, index: CycleIndex) -> int:
    """r! (1/n) [t^(n-1)] [q^i u^r] exp(n u Q(t))."""
    if not _feasible((n,), index):
        return 0
    r = index.r
    coeff, t_exp = _q_power_coefficient(index)
    # [u^r] exp(n u Q) = n^r Q^r / r!
    if t_exp != n - 1:
        return 0
    value = factorial(r) * Fraction(1, n) * Fraction(n**r * coeff, factorial(r))
    return _as_int(value, "Lagrange ordered")


def lagrange_inequivalent(n: int, index: CycleIndex) -> int:
    """(1/r) [lambda^(r-1)] (1 + lambda)^(r+2n-2) times the multinomial of i."""
    if not _feasible((n,), index):
        return 0
    r = index.r
    if r == 0:
        return 1 if n == 1 else 0
    coeff, t_exp = _q_power_coefficient(index)
    if t_exp != n - 1:
        return 0
    expansion = _poly_pow([1, 1], r + 2 * n - 2)
    lam = expansion[r - 1] if r - 1 < len(expansion) else 0
    return _as_int(Fraction(lam * coeff, r), "Lagrange inequivalent")

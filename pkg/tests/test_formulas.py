from math import comb

import pytest

from cyclefact.enumerator import count_inequivalent, count_ordered, enumerate_beta_factorizations
from cyclefact.formulas import (
    beta_inequivalent_fullcycle,
    hurwitz_number,
    kcycle_inequivalent_fullcycle,
    lagrange_inequivalent,
    lagrange_ordered,
    springer_inequivalent,
    springer_ordered,
)
from cyclefact.perm import CycleIndex, genus_zero_indices, partitions


def idx(text):
    return CycleIndex.parse(text)


@pytest.mark.parametrize("alpha, expected", [((1, 1), 1), ((2, 1), 8), ((3,), 3), ((1,), 1)])
def test_hurwitz_values(alpha, expected):
    assert hurwitz_number(alpha) == expected


def test_hurwitz_single_part_is_the_tree_count():
    assert all(hurwitz_number((n,)) == n ** (n - 2) for n in range(1, 9))


@pytest.mark.parametrize("alpha", [(2, 2), (3, 1), (2, 1, 1), (1, 1, 1)])
def test_hurwitz_against_enumeration(alpha):
    n = sum(alpha)
    i2 = n + len(alpha) - 2
    assert hurwitz_number(alpha) == count_ordered(alpha, CycleIndex.of(i2=i2))


@pytest.mark.parametrize("n, index, expected", [(4, "2:1,3:1", 8), (3, "2:2", 3), (3, "2:1", 0), (1, "", 1)])
def test_ordered_values(n, index, expected):
    assert springer_ordered(n, idx(index)) == expected


@pytest.mark.parametrize("n, index, expected", [(3, "2:2", 3), (4, "2:3", 12), (3, "3:1", 1), (3, "2:1", 0)])
def test_inequivalent_values(n, index, expected):
    assert springer_inequivalent(n, idx(index)) == expected


@pytest.mark.parametrize("n, k, expected", [(3, 2, 3), (5, 3, 5), (4, 3, 0), (5, 2, 55)])
def test_kcycle_values(n, k, expected):
    assert kcycle_inequivalent_fullcycle(n, k) == expected


def test_kcycle_two_is_the_catalan_like_sequence():
    for n in range(1, 9):
        assert kcycle_inequivalent_fullcycle(n, 2) * (2 * n - 1) == comb(3 * n - 3, n - 1)


@pytest.mark.parametrize("n", range(1, 9))
def test_kcycle_agrees_with_general_formula(n):
    for k in range(2, n + 1):
        if (n - 1) % (k - 1) == 0:
            index = CycleIndex.of({k: (n - 1) // (k - 1)})
            assert kcycle_inequivalent_fullcycle(n, k) == springer_inequivalent(n, index)


@pytest.mark.parametrize("n", range(1, 9))
def test_lagrange_forms_match_closed_forms(n):
    for index in genus_zero_indices((n,)):
        assert lagrange_ordered(n, index) == springer_ordered(n, index)
        assert lagrange_inequivalent(n, index) == springer_inequivalent(n, index)
    assert lagrange_ordered(n, CycleIndex.of(i2=n + 1)) == 0


def test_lagrange_named_values():
    assert lagrange_inequivalent(4, idx("2:3")) == 12
    assert lagrange_ordered(3, idx("2:2")) == 3


@pytest.mark.parametrize("n", range(1, 5))
def test_full_cycle_formulas_against_enumeration(n):
    for index in genus_zero_indices((n,)):
        assert springer_ordered(n, index) == count_ordered((n,), index)
        assert springer_inequivalent(n, index) == count_inequivalent((n,), index)


class TestBeta:
    def test_named_value(self):
        assert beta_inequivalent_fullcycle(3, (2, 1), idx("2:1")) == 3

    def test_infeasible_is_zero(self):
        assert beta_inequivalent_fullcycle(4, (2, 1, 1), idx("2:3")) == 0

    @pytest.mark.parametrize("n", range(1, 7))
    def test_all_ones_reduces_to_full_cycle_classes(self, n):
        for index in genus_zero_indices((n,)):
            if index.r:
                assert beta_inequivalent_fullcycle(n, (1,) * n, index) == springer_inequivalent(n, index)

    @pytest.mark.parametrize("n", range(2, 5))
    def test_against_enumeration(self, n):
        for beta in partitions(n):
            for index in genus_zero_indices((n,), extra=n - len(beta)):
                if index.r:
                    got = len(enumerate_beta_factorizations(n, beta, index).classes)
                    assert beta_inequivalent_fullcycle(n, beta, index) == got

    def test_needs_a_cycle_factor(self):
        with pytest.raises(ValueError):
            beta_inequivalent_fullcycle(3, (3,), CycleIndex.of())

    def test_beta_must_partition_n(self):
        with pytest.raises(ValueError):
            beta_inequivalent_fullcycle(3, (2, 2), idx("2:1"))

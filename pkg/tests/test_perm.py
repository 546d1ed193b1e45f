import pytest
from hypothesis import given, strategies as st

from cyclefact.perm import (
    CycleFactorization,
    CycleIndex,
    CycleNotationError,
    DegreeMismatchError,
    Factorization,
    Infeasible,
    InfeasibleIndexError,
    Permutation,
    canonical_target,
    cycle_type,
    format_cycles,
    genus_of_index,
    genus_zero_indices,
    is_transitive,
    multiply,
    orbits,
    parse_cycles,
    partitions,
    permutations_of_type,
    product,
    require_genus_zero,
)


def perms(max_n=7):
    return st.integers(1, max_n).flatmap(
        lambda n: st.permutations(range(1, n + 1)).map(lambda p: Permutation(tuple(p)))
    )


def same_degree_pair(max_n=7):
    return st.integers(1, max_n).flatmap(
        lambda n: st.tuples(*[st.permutations(range(1, n + 1)).map(lambda p: Permutation(tuple(p)))] * 3)
    )


class TestNotation:
    def test_parse_infers_degree_from_largest_symbol(self):
        p = parse_cycles("(1 5)(2 4 3)")
        assert p.degree == 5
        assert p(1) == 5 and p(5) == 1 and p(2) == 4 and p(3) == 2

    def test_commas_are_separators(self):
        assert parse_cycles("(1,2,3)") == parse_cycles("(1 2 3)")

    def test_explicit_degree_keeps_trailing_fixed_points(self):
        p = parse_cycles("(1 2)", degree=4)
        assert p.degree == 4
        assert format_cycles(p) == "(1 2)(4)"

    def test_format_puts_each_minimum_first(self):
        assert format_cycles(parse_cycles("(3 1 2)(5 4)")) == "(1 2 3)(4 5)"

    @pytest.mark.parametrize("bad", ["(1 2", "1 2)", "((1 2))", "(1 1 2)", "(1 a)", "()"])
    def test_malformed_text(self, bad):
        with pytest.raises(CycleNotationError):
            parse_cycles(bad)

    def test_empty_text_is_the_identity_when_degree_is_given(self):
        assert parse_cycles("", 3) == Permutation.identity(3)
        with pytest.raises(CycleNotationError):
            parse_cycles("")

    def test_symbol_beyond_degree(self):
        with pytest.raises(CycleNotationError):
            parse_cycles("(1 7)", degree=5)

    @given(perms())
    def test_format_parse_round_trip(self, p):
        assert parse_cycles(format_cycles(p), p.degree) == p
        assert parse_cycles(format_cycles(p)) == p


class TestArithmetic:
    def test_right_factor_acts_first(self):
        p, q = parse_cycles("(1 2)", 3), parse_cycles("(2 3)", 3)
        # q sends 2 to 3, then p fixes 3
        assert multiply(p, q)(2) == 3
        assert multiply(p, q) == parse_cycles("(1 2 3)")

    def test_motivating_product(self):
        factors = [parse_cycles(c, 9) for c in ("(2 7 8 6)", "(2 6 3 9)", "(1 5)", "(4 5 8)", "(5 9)")]
        assert product(factors, 9) == parse_cycles("(1 5 7 8 4)(3 9 6)", 9)

    def test_degree_mismatch(self):
        with pytest.raises(DegreeMismatchError):
            multiply(Permutation.identity(2), Permutation.identity(3))

    @given(same_degree_pair())
    def test_group_laws(self, triple):
        p, q, s = triple
        e = Permutation.identity(p.degree)
        assert (p * q) * s == p * (q * s)
        assert p * e == p == e * p
        assert p * p.inverse() == e

    @given(perms())
    def test_cycle_type_partitions_degree(self, p):
        assert sum(cycle_type(p)) == p.degree
        assert Permutation.from_cycles(p.cycles(), p.degree) == p

    def test_orbits_and_transitivity(self):
        a, b = parse_cycles("(1 2)", 4), parse_cycles("(3 4)", 4)
        assert orbits([a, b], 4) == [[1, 2], [3, 4]]
        assert not is_transitive([a, b], 4)
        assert is_transitive([a, b, parse_cycles("(2 3)", 4)], 4)


class TestCycleIndex:
    def test_parse_and_render(self):
        idx = CycleIndex.parse("2:3,3:1")
        assert idx[2] == 3 and idx[3] == 1 and idx[4] == 0
        assert str(idx) == "2:3,3:1"
        assert idx.r == 4 and idx.weight == 5

    def test_constructors_agree(self):
        assert CycleIndex.of(i2=1, i3=1) == CycleIndex.from_lengths([3, 2]) == CycleIndex.of({2: 1, 3: 1})

    def test_empty_index_is_falsy(self):
        assert not CycleIndex.of() and CycleIndex.parse("") == CycleIndex.of()

    @pytest.mark.parametrize("bad", ["2", "2:x", "1:3"])
    def test_rejects_bad_entries(self, bad):
        with pytest.raises(ValueError):
            CycleIndex.parse(bad)


class TestGenus:
    def test_minimal_and_excess(self):
        assert genus_of_index((3,), CycleIndex.of(i2=2)) == 0
        assert genus_of_index((3,), CycleIndex.of(i2=4)) == 1
        assert genus_of_index((3,), CycleIndex.of(i2=1)) is Infeasible.SUB_MINIMAL
        assert genus_of_index((3,), CycleIndex.of(i2=3)) is Infeasible.PARITY

    def test_require_reports_reason(self):
        with pytest.raises(InfeasibleIndexError, match="sub-minimal"):
            require_genus_zero((3,), CycleIndex.of(i2=1))
        with pytest.raises(InfeasibleIndexError, match="positive genus"):
            require_genus_zero((3,), CycleIndex.of(i2=4))

    def test_genus_zero_indices_are_exactly_the_partitions_of_the_weight(self):
        got = {str(i) for i in genus_zero_indices((4,))}
        assert got == {"2:3", "2:1,3:1", "4:1"}

    def test_partitions(self):
        assert list(partitions(4)) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]

    def test_canonical_target_uses_consecutive_blocks(self):
        assert canonical_target((2, 1)) == parse_cycles("(1 2)(3)")
        assert canonical_target((3, 2)) == parse_cycles("(1 2 3)(4 5)")

    def test_permutations_of_type(self):
        assert len(list(permutations_of_type((2, 1), 3))) == 3
        assert len(list(permutations_of_type((3,), 3))) == 2


class TestFactorization:
    def test_product_is_checked(self):
        a, b = parse_cycles("(1 2)", 3), parse_cycles("(2 3)", 3)
        with pytest.raises(ValueError):
            Factorization((a, b), parse_cycles("(1 3 2)"))

    def test_cycle_factors_are_single_cycles(self):
        t = parse_cycles("(1 2)(3 4)")
        with pytest.raises(ValueError):
            CycleFactorization((t,), t)

    def test_sigma_indexing_and_genus(self):
        a, b = parse_cycles("(1 3)", 3), parse_cycles("(1 2)", 3)
        F = CycleFactorization((a, b), a * b)
        assert F.sigma(1) == b and F.sigma(2) == a
        assert F.is_minimal_transitive() and F.cycle_index == CycleIndex.of(i2=2)
        assert str(F) == "((1 3), (1 2))"

    def test_inverse_reversed(self):
        a, b = parse_cycles("(1 3)", 3), parse_cycles("(1 2 3)", 3)
        F = Factorization((a, b), a * b)
        G = F.inverse_reversed()
        assert G.target == F.target.inverse()

import json

import pytest
from hypothesis import given, strategies as st

from cyclefact.enumerator import commutation_classes, enumerate_factorizations
from cyclefact.maps import (
    MapError,
    MarkedPolymap,
    Polymap,
    RootedCactus,
    constellation_from_factorization,
    core_and_branches,
    cyclic_descents,
    default_face_labels,
    factorization_from_constellation,
    graft,
    insertion_positions,
    is_valid_labelling,
    mark_descents,
    marked_graft,
    marked_prune,
    polymap_of,
    prune,
    validate_marking,
)
from cyclefact.maps.export import from_dict, to_dict, to_dot, to_json
from cyclefact.maps.marked import corner_face
from cyclefact.maps.pruning import face_label_order
from cyclefact.perm import (
    CycleFactorization,
    CycleIndex,
    Factorization,
    Permutation,
    canonical_target,
    parse_cycles,
    product,
)


def factorization(cycles, n, cls=CycleFactorization):
    factors = tuple(parse_cycles(c, n) for c in cycles)
    return cls(factors, product(factors, n))


@pytest.fixture
def three_factor():
    # leftmost factor is s_3, rightmost s_1
    return factorization(["(1 5 3)", "(2 5)", "(1 5)(2 4 3)"], 5, Factorization)


@pytest.fixture
def nine_point():
    return factorization(["(2 7 8 6)", "(2 6 3 9)", "(1 5)", "(4 5 8)", "(5 9)"], 9)


@pytest.fixture
def equivalent_pair():
    F = factorization(["(2 8 6)", "(3 5 7)", "(4 6)", "(5 6)", "(1 4 3)", "(2 7)"], 8)
    G = factorization(["(3 5 7)", "(2 8 6)", "(2 7)", "(4 6)", "(1 4 3)", "(5 6)"], 8)
    return F, G


def all_maps(alpha, index):
    return [polymap_of(F) for F in enumerate_factorizations(canonical_target(alpha), CycleIndex.parse(index))]


class TestDescents:
    def test_weak_inequality(self):
        assert len(cyclic_descents([1, 2, 3, 3, 2, 3, 1, 3, 4])) == 4
        assert len(cyclic_descents([4, 4, 14, 8, 12, 12])) == 4
        assert len(cyclic_descents([5, 5, 5])) == 3
        assert len(cyclic_descents([1, 2, 3])) == 1

    @given(st.lists(st.integers(0, 20), min_size=1, max_size=12))
    def test_rotation_invariant_and_positive(self, L):
        d = len(cyclic_descents(L))
        assert 1 <= d <= len(L)
        assert all(len(cyclic_descents(L[i:] + L[:i])) == d for i in range(len(L)))


class TestInsertion:
    def test_five_position_example(self):
        assert len(insertion_positions([2, 7, 1, 3, 6, 5, 7, 3], 4)) == 4

    def test_increasing_list_admits_only_the_wraparound(self):
        assert insertion_positions([1, 2, 3], 10) == [0]

    def test_face_of_the_branch_example(self):
        # The nondecreasing-triple rule puts 2 at slots 0, 1, 3 and 5 of this walk.
        assert insertion_positions([4, 4, 14, 8, 12, 12], 2) == [0, 1, 3, 5]

    def test_existing_label_rejected(self):
        with pytest.raises(ValueError):
            insertion_positions([1, 2, 3], 2)

    @given(st.lists(st.integers(0, 15), min_size=1, max_size=12), st.integers(0, 15))
    def test_count_equals_descents(self, half, b):
        L = [2 * x for x in half]
        assert len(insertion_positions(L, 2 * b + 1)) == len(cyclic_descents(L))


class TestConstellations:
    def test_three_factor_example(self, three_factor):
        C = constellation_from_factorization(three_factor)
        assert C.euler_genus() == 0
        assert C.descent_cycles() == parse_cycles("(1 2 4)(3)(5)") == three_factor.target
        back = factorization_from_constellation(C)
        assert back == three_factor
        assert [str(back.sigma(i)) for i in (1, 2, 3)] == ["(1 5)(2 4 3)", "(2 5)", "(1 5 3)"]

    def test_empty_factorization_is_a_lone_vertex(self):
        F = CycleFactorization((), Permutation.identity(1))
        C = constellation_from_factorization(F)
        assert C.vertices == (1,) and C.n_polygons == 0
        assert C.descent_cycles() == Permutation.identity(1)
        assert factorization_from_constellation(C, r=0) == F

    @pytest.mark.parametrize("k", [2, 3, 5])
    def test_single_polygon(self, k):
        M = Polymap.labelled([(1, tuple(range(1, k + 1)))])
        (face,) = M.face_walks()
        assert face.degree == k and len(face.descents) == k
        assert M.euler_genus() == 0
        assert M.descent_cycles() == Permutation.from_cycles([tuple(range(1, k + 1))], k)
        F = factorization_from_constellation(M)
        assert F.r == 1 and F.target == M.descent_cycles()

    def test_nine_point_polymap(self, nine_point):
        M = polymap_of(nine_point)
        assert M.is_proper() and M.euler_genus() == 0
        assert M.descent_cycles() == parse_cycles("(1 5 7 8 4)(2)(3 9 6)")
        P = prune(M)
        back, _ = graft(P.forests, P.core, P.core_face_labels)
        assert back == M

    def test_round_trip_on_small_sets(self):
        for F in enumerate_factorizations(parse_cycles("(1 2 3)"), CycleIndex.parse("2:2")):
            assert factorization_from_constellation(constellation_from_factorization(F)) == F

    def test_every_enumerated_map_has_genus_zero(self):
        for M in all_maps((2, 2), "2:2,3:1") + all_maps((3,), "3:1"):
            assert M.euler_genus() == 0 and M.is_proper()

    def test_rejections(self):
        t = parse_cycles("(1 2)(3 4)")
        bad = Factorization((t,), t)
        with pytest.raises(MapError):
            constellation_from_factorization(bad)
        with pytest.raises(MapError):
            Polymap([(1, 2)], {1: [0]})
        decreasing = Polymap([(1, 2), (1, 2)], {1: [1, 0], 2: [0, 1]}, [1, 2])
        with pytest.raises(MapError):
            factorization_from_constellation(decreasing)


class TestPruning:
    def test_smooth_map_is_its_own_core(self):
        M = Polymap.labelled([(1, (1, 2)), (2, (1, 2))])
        dec = core_and_branches(M)
        assert dec.core == M and dec.branches == []
        P = prune(M)
        assert all(c.is_trivial for forest in P.forests for c in forest)
        assert graft(P.forests, P.core, P.core_face_labels)[0] == M

    def test_single_face_has_no_core(self):
        with pytest.raises(MapError):
            prune(Polymap.labelled([(1, (1, 2, 3))]))

    def test_round_trip_on_two_part_sets(self):
        maps = all_maps((2, 1), "2:3")
        assert len(maps) == 8
        for M in maps:
            P = prune(M)
            order = face_label_order(P.core, P.core_face_labels)
            for fi, w in enumerate(P.core.face_walks()):
                assert len(P.forests[order[fi] - 1]) == len(w.descents)
            assert graft(P.forests, P.core, P.core_face_labels)[0] == M

    def test_one_graft_per_admissible_slot(self):
        core = Polymap.labelled([(1, (1, 2)), (2, (1, 2))])
        labels = default_face_labels(core)
        leaf = RootedCactus(((3, (0, 3)),))
        trivial = RootedCactus()
        widths = [len(w.descents) for w in core.face_walks()]
        for j, d in enumerate(widths):
            made = set()
            for i in range(d):
                forests = [[trivial] * w for w in widths]
                forests[j][i] = leaf
                M, _ = graft(forests, core, labels)
                assert M.is_proper()
                made.add(M)
            assert len(made) == d

    def test_index_out_of_range(self):
        core = Polymap.labelled([(1, (1, 2)), (2, (1, 2))])
        widths = [len(w.descents) for w in core.face_walks()]
        forests = [[RootedCactus()] * (w + 1) for w in widths]
        with pytest.raises(MapError):
            graft(forests, core, default_face_labels(core))

    def test_label_collision(self):
        core = Polymap.labelled([(1, (1, 2)), (2, (1, 2))])
        widths = [len(w.descents) for w in core.face_walks()]
        forests = [[RootedCactus()] * w for w in widths]
        forests[0][0] = RootedCactus(((2, (0, 3)),))
        with pytest.raises(MapError):
            graft(forests, core, default_face_labels(core))


class TestMarked:
    def test_equivalent_factorizations_share_a_marked_map(self, equivalent_pair):
        F, G = equivalent_pair
        mF, labels_F = mark_descents(polymap_of(F), return_labels=True)
        mG, labels_G = mark_descents(polymap_of(G), return_labels=True)
        assert mF == mG
        assert is_valid_labelling(mF, labels_F) and is_valid_labelling(mG, labels_G)
        ok, witness = validate_marking(mF)
        assert ok and is_valid_labelling(mF, witness)

    def test_cyclic_precedence_is_rejected(self):
        bad = MarkedPolymap([(1, 2), (1, 2)], {1: [0, 1], 2: [1, 0]})
        assert validate_marking(bad) == (False, None)

    def test_cacti_are_always_properly_marked(self):
        for M in all_maps((4,), "2:3") + all_maps((4,), "2:1,3:1"):
            assert M.n_faces == 1
            assert validate_marking(mark_descents(M))[0]

    def test_single_polygon_has_one_marking(self):
        maps = {mark_descents(Polymap.labelled([(label, (1, 2, 3))])) for label in (1, 5, 9)}
        assert len(maps) == 1

    def test_marked_maps_match_classes(self):
        fs = enumerate_factorizations(canonical_target((2, 1)), CycleIndex.parse("2:3"))
        marked = {mark_descents(polymap_of(F)) for F in fs}
        assert len(marked) == len(commutation_classes(fs)) == 8
        for m in marked:
            mp = marked_prune(m)
            assert marked_graft(mp.core, mp.cacti) == m

    def test_smooth_marked_map_prunes_to_trivial_cacti(self):
        m = mark_descents(Polymap.labelled([(1, (1, 2)), (2, (1, 2))]))
        mp = marked_prune(m)
        assert mp.core == m
        for value in mp.cacti.values():
            for cactus in value if isinstance(value, tuple) else (value,):
                assert cactus.n_polygons == 0

    @pytest.mark.parametrize("alpha, index", [((3, 1), "2:4"), ((2, 2), "2:2,3:1"), ((2, 1, 1), "2:5")])
    def test_each_core_face_owns_degree_plus_descents_cacti(self, alpha, index):
        for M in all_maps(alpha, index):
            mp = marked_prune(mark_descents(M))
            owned = {}
            for corner, value in mp.cacti.items():
                f = corner_face(mp.core, corner)
                owned[f] = owned.get(f, 0) + (2 if corner[1] == 0 else 1)
            for f, walk in enumerate(mp.core.face_walks()):
                assert owned.get(f, 0) == walk.degree + len(walk.descents)

    def test_non_proper_input(self):
        with pytest.raises(MapError):
            mark_descents(Polymap([(1, 2)] * 3, {1: [0, 1, 2], 2: [0, 2, 1]}, [1, 2, 3]))


class TestExport:
    def test_json_round_trip(self, nine_point):
        M = polymap_of(nine_point)
        data = json.loads(to_json(M))
        assert data["kind"] == "polymap" and len(data["faces"]) == M.n_faces
        assert from_dict(data) == M
        m = mark_descents(M)
        assert from_dict(to_dict(m)).key() == m.key()

    def test_dot_mentions_every_vertex(self, three_factor):
        text = to_dot(constellation_from_factorization(three_factor))
        assert text.startswith("graph") or text.startswith("digraph")
        assert all(f"v{v}" in text for v in range(1, 6))

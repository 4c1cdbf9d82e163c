import pytest
from hypothesis import given, settings, strategies as st

from trimanifold import (
    MoveDescriptor,
    MoveKind,
    apply_pachner,
    are_isomorphic,
    betti_gf2,
    classify_surface,
    enumerate_valid_moves,
    from_top_faces,
    is_combinatorial_manifold,
    is_orientable,
    minimal_triangulation,
    random_pachner_walk,
)
from trimanifold.errors import FaceNotPresent, InvalidMove, InvalidParameter, NotAManifold
from trimanifold.moves import F_VECTOR_DELTA, _replacement, iter_pachner_walk

from oracles import brute_isomorphic, closure
from conftest import SEED_NAMES

CAPS = {2: 24, 3: 40}


def _naive_valid(T, m):
    """A move is legal iff its replacement gives distinct new facets and a manifold."""
    try:
        removed, added = _replacement(T, m)
    except (InvalidMove, FaceNotPresent):
        return False
    facets = [f for f in T.facets if f not in set(removed)] + list(added)
    if len(set(facets)) != len(facets):
        return False
    return is_combinatorial_manifold(from_top_faces(facets, T.dimension))


def _all_candidates(T):
    kinds = [k for k in MoveKind if k.manifold_dimension == T.dimension]
    for k in kinds:
        for s in T.simplices(k.anchor_dimension):
            yield MoveDescriptor(k, s)


class TestDescriptor:
    def test_anchor_sorted(self):
        assert MoveDescriptor(MoveKind.M22, (3, 1)).anchor == (1, 3)

    def test_anchor_dimension_checked(self):
        with pytest.raises(ValueError):
            MoveDescriptor(MoveKind.M13, (0, 1))
        with pytest.raises(ValueError):
            MoveDescriptor(MoveKind.M32, (0, 1, 2))

    def test_ordering(self):
        a = MoveDescriptor(MoveKind.M13, (0, 1, 2))
        b = MoveDescriptor(MoveKind.M31, (0,))
        assert a < b
        assert sorted([b, a]) == [a, b]

    def test_kind_properties(self):
        assert MoveKind.M14.grows and not MoveKind.M23.grows
        assert MoveKind.M32.manifold_dimension == 3
        assert MoveKind.M22.anchor_dimension == 1


class TestEnumerate:
    def test_tetrahedron_boundary_only_m13(self, sphere):
        moves = enumerate_valid_moves(sphere)
        assert len(moves) == 4
        assert all(m.kind is MoveKind.M13 for m in moves)

    def test_simplex4_boundary_only_m14(self, sphere3):
        moves = enumerate_valid_moves(sphere3)
        assert len(moves) == 5
        assert all(m.kind is MoveKind.M14 for m in moves)

    def test_torus_has_no_m31(self, torus):
        assert all(len(torus.adjacency[v]) == 6 for v in range(7))
        assert not [m for m in enumerate_valid_moves(torus) if m.kind is MoveKind.M31]

    def test_sorted(self, rp2):
        moves = enumerate_valid_moves(rp2)
        assert moves == sorted(moves)

    def test_requires_manifold(self):
        with pytest.raises(NotAManifold):
            enumerate_valid_moves(from_top_faces([[1, 2, 3], [1, 2, 4]], 2))

    @pytest.mark.parametrize("seed", range(3))
    @pytest.mark.parametrize("name", SEED_NAMES)
    def test_matches_naive_check(self, name, seed):
        T = minimal_triangulation(name)
        T = random_pachner_walk(T, 15, CAPS[T.dimension], seed)
        fast = set(enumerate_valid_moves(T))
        naive = {m for m in _all_candidates(T) if _naive_valid(T, m)}
        assert fast == naive


class TestApply:
    def test_m13_on_tetrahedron_boundary(self, sphere):
        T = apply_pachner(sphere, MoveDescriptor(MoveKind.M13, (0, 1, 2)))
        assert T.f_vector == (5, 9, 6)
        assert T.euler_characteristic == 2

    @pytest.mark.parametrize("edge", [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    def test_m22_blocked_on_tetrahedron_boundary(self, sphere, edge):
        with pytest.raises(InvalidMove) as exc:
            apply_pachner(sphere, MoveDescriptor(MoveKind.M22, edge))
        assert exc.value.blocking == tuple(sorted(set(range(4)) - set(edge)))

    def test_m31_blocked_on_tetrahedron_boundary(self, sphere):
        with pytest.raises(InvalidMove) as exc:
            apply_pachner(sphere, MoveDescriptor(MoveKind.M31, (0,)))
        assert exc.value.blocking == (1, 2, 3)

    def test_m23_blocked_on_simplex4_boundary(self, sphere3):
        # K5 is complete, so the new edge always exists
        with pytest.raises(InvalidMove) as exc:
            apply_pachner(sphere3, MoveDescriptor(MoveKind.M23, (0, 1, 2)))
        assert exc.value.blocking == (3, 4)

    def test_missing_anchor(self, sphere):
        with pytest.raises(FaceNotPresent):
            apply_pachner(sphere, MoveDescriptor(MoveKind.M22, (0, 9)))

    def test_wrong_dimension_kind(self, sphere):
        with pytest.raises(InvalidMove):
            apply_pachner(sphere, MoveDescriptor(MoveKind.M14, (0, 1, 2, 3)))

    def test_m13_m31_round_trip(self, torus):
        T = apply_pachner(torus, MoveDescriptor(MoveKind.M13, torus.facets[0]))
        new_vertex = T.vertex_count - 1
        back = apply_pachner(T, MoveDescriptor(MoveKind.M31, (new_vertex,)))
        assert are_isomorphic(back, torus)
        assert brute_isomorphic(back.facets, torus.facets)

    def test_m14_m41_round_trip(self, sphere3):
        T = apply_pachner(sphere3, MoveDescriptor(MoveKind.M14, (0, 1, 2, 3)))
        back = apply_pachner(T, MoveDescriptor(MoveKind.M41, (T.vertex_count - 1,)))
        assert back == sphere3

    def test_m22_twice_round_trip(self, sphere):
        T = apply_pachner(sphere, MoveDescriptor(MoveKind.M13, (0, 1, 2)))
        T = apply_pachner(T, MoveDescriptor(MoveKind.M13, (0, 1, 3)))
        flips = [m for m in enumerate_valid_moves(T) if m.kind is MoveKind.M22]
        assert flips
        for m in flips:
            removed, _ = _replacement(T, m)
            (c,) = set(removed[0]) - set(m.anchor)
            (d,) = set(removed[1]) - set(m.anchor)
            U = apply_pachner(T, m)
            back = apply_pachner(U, MoveDescriptor(MoveKind.M22, (c, d)))
            assert back == T
            assert brute_isomorphic(back.facets, T.facets)

    def test_m23_m32_round_trip(self, sphere3):
        # on the bare simplex boundary no 2-3 move is legal, so subdivide first
        T = apply_pachner(sphere3, MoveDescriptor(MoveKind.M14, (0, 1, 2, 3)))
        flips = [m for m in enumerate_valid_moves(T) if m.kind is MoveKind.M23]
        assert flips
        for m in flips:
            removed, _ = _replacement(T, m)
            new_edge = tuple(sorted({w for f in removed for w in f} - set(m.anchor)))
            U = apply_pachner(T, m)
            assert U.f_vector == tuple(a + b for a, b in zip(T.f_vector, (0, 1, 2, 1)))
            back = apply_pachner(U, MoveDescriptor(MoveKind.M32, new_edge))
            assert are_isomorphic(back, T)
            assert brute_isomorphic(back.facets, T.facets)


class TestWalk:
    def test_zero_steps(self, sphere):
        assert random_pachner_walk(sphere, 0, 24, 3) == sphere

    def test_sphere_stays_sphere(self, sphere):
        T = random_pachner_walk(sphere, 50, 24, seed=7)
        assert classify_surface(T).canonical_name == "S2"
        assert T.euler_characteristic == 2

    def test_torus_walk(self, torus):
        T = random_pachner_walk(torus, 100, 24, seed=1)
        assert T.euler_characteristic == 0
        assert is_orientable(T)

    def test_deterministic(self, rp2):
        assert random_pachner_walk(rp2, 40, 24, 5) == random_pachner_walk(rp2, 40, 24, 5)

    def test_bad_parameters(self, torus):
        with pytest.raises(InvalidParameter):
            random_pachner_walk(torus, -1, 24, 0)
        with pytest.raises(InvalidParameter):
            random_pachner_walk(torus, 5, 6, 0)

    def test_cap_at_current_count_blocks_growth(self, sphere):
        # at the cap only non-growth moves remain; the tetrahedron boundary has none
        assert list(iter_pachner_walk(sphere, 5, 4, 0)) == []

    @settings(max_examples=25)
    @given(st.sampled_from(SEED_NAMES), st.integers(0, 2**32), st.integers(5, 40))
    def test_walk_invariants(self, name, seed, steps):
        T0 = minimal_triangulation(name)
        cap = min(CAPS[T0.dimension], T0.vertex_count + 6)
        chi, orient, betti = T0.euler_characteristic, is_orientable(T0), betti_gf2(T0)
        prev = T0
        for m, T in iter_pachner_walk(T0, steps, cap, seed):
            delta = F_VECTOR_DELTA[m.kind]
            assert T.f_vector == tuple(a + b for a, b in zip(prev.f_vector, delta))
            assert T.vertex_count <= cap
            assert is_combinatorial_manifold(T)
            assert T.euler_characteristic == chi
            assert is_orientable(T) == orient
            assert betti_gf2(T) == betti
            prev = T

    @settings(max_examples=15)
    @given(st.integers(0, 2**32))
    def test_faces_stay_a_set(self, seed):
        T = random_pachner_walk(minimal_triangulation("RP2"), 30, 12, seed)
        assert len(closure(T.facets)) == sum(T.f_vector)

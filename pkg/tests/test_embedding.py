from __future__ import annotations

import random
from itertools import permutations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipoint.embedding import (
    brute_force_embed,
    count_embeddable_T,
    embed_3tree_fixed_outer,
    embeddable_T_bound,
    embeds_on,
    hull_rotations,
    is_plane,
    permutation_to_3tree,
    plane_permutation_census,
    shape_embeds,
)
from unipoint.errors import DomainError
from unipoint.geometry import PointSet
from unipoint.order_types import load_order_types
from unipoint.threetrees import RootedTriangulation, all_shapes, gen_T_family
from unipoint.triangulations import Triangulation, gen_triangulations

K4 = Triangulation([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])
TRIANGLE_PLUS_ONE = PointSet([(0, 0), (6, 0), (0, 6), (1, 1)])
SQUARE = PointSet([(0, 0), (4, 0), (4, 4), (0, 4)])


def test_is_plane_k4():
    assert is_plane(K4, TRIANGLE_PLUS_ONE, [0, 1, 2, 3])
    assert all(not is_plane(K4, SQUARE, p) for p in permutations(range(4)))


def test_embeds_on_k4():
    phi = embeds_on(K4, TRIANGLE_PLUS_ONE)
    assert phi is not None and is_plane(K4, TRIANGLE_PLUS_ONE, phi)
    assert embeds_on(K4, SQUARE) is None


def test_size_mismatch():
    with pytest.raises(DomainError):
        embeds_on(K4, load_order_types(5)[0])


def test_fixed_outer_k4():
    P = TRIANGLE_PLUS_ONE
    assert embed_3tree_fixed_outer(K4, P, {0: 0, 1: 1, 2: 2}) == [0, 1, 2, 3]
    with pytest.raises(DomainError):
        embed_3tree_fixed_outer(K4, SQUARE, {0: 0, 1: 1, 2: 2})
    with pytest.raises(DomainError):
        embed_3tree_fixed_outer(K4, P, {0: 0, 1: 1, 2: 3})


def test_fixed_outer_is_unique():
    # every drawing extending the hull map is the one returned
    for P in load_order_types(6):
        if len(P.hull) != 3:
            continue
        for T in gen_T_family(6):
            G = T.to_triangulation()
            for face in G.faces:
                hull_map = dict(zip(face, P.hull))
                phi = embed_3tree_fixed_outer(G, P, hull_map)
                drawings = [
                    list(p)
                    for p in permutations(range(6))
                    if all(p[v] == q for v, q in hull_map.items()) and is_plane(G, P, p)
                ]
                assert len(drawings) <= 1
                assert (phi is None) == (not drawings)
                if phi is not None:
                    assert phi == drawings[0]


@pytest.mark.parametrize("n", [5, 6])
def test_permutation_to_3tree_matches_exhaustive(n):
    members = [T.to_triangulation() for T in gen_T_family(n)]
    labeled = list(gen_T_family(n))
    for P in load_order_types(n):
        for pi in permutations(range(n)):
            plane = [labeled[i] for i, G in enumerate(members) if is_plane(G, P, pi)]
            assert len(plane) <= 1
            got = permutation_to_3tree(P, pi)
            assert got == (plane[0] if plane else None)


def test_census_bound_n6():
    for P in load_order_types(6):
        count, total = plane_permutation_census(P)
        assert total == 720
        assert count < embeddable_T_bound(6)


def test_count_embeddable_T():
    for P in load_order_types(5):
        assert count_embeddable_T(P) <= embeddable_T_bound(5)


def corpus(seed: int, size: int, n_max: int = 7):
    rng = random.Random(seed)
    graphs = {n: gen_triangulations(n) for n in range(4, n_max + 1)}
    sets = {n: load_order_types(n) for n in range(4, n_max + 1)}
    for _ in range(size):
        n = rng.randint(4, n_max)
        yield rng.choice(graphs[n]), rng.choice(sets[n])


def test_embeds_on_agrees_with_brute_force():
    for G, P in corpus(7, 150, 6):
        phi = embeds_on(G, P)
        oracle = brute_force_embed(G, P)
        assert (phi is None) == (oracle is None)
        if phi is not None:
            assert is_plane(G, P, phi)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 272), st.integers(0, 3314))
def test_shape_fast_path_matches_labeled_embedder(i, j):
    s = all_shapes(5)[i]
    P = load_order_types(8)[j]
    if len(P.hull) != 3:
        return
    G = RootedTriangulation.from_shape(s).base
    for q in hull_rotations(P):
        fast = shape_embeds(s, P, *q)
        slow = embed_3tree_fixed_outer(G, P, {0: q[0], 1: q[1], 2: q[2]}) is not None
        assert fast == slow


def test_hull_rotations_ccw():
    rots = hull_rotations(TRIANGLE_PLUS_ONE)
    assert len(set(rots)) == 3
    with pytest.raises(DomainError):
        hull_rotations(SQUARE)

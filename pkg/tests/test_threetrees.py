from __future__ import annotations

import random
from itertools import permutations
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipoint.errors import DomainError
from unipoint.threetrees import (
    BIPYRAMID_TIPS,
    RootedTriangulation,
    all_shapes,
    bipyramid,
    build_bipyramid_graph,
    count_T_family,
    flip_shape,
    gen_T_family,
    interior_degree_profile,
    peel_order,
    reroot_3tree,
    shape_of,
    shape_size,
    stack,
)
from unipoint.triangulations import gen_triangulations


@pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
def test_T_family_size(n):
    assert sum(1 for _ in gen_T_family(n)) == count_T_family(n)


def test_T_family_members_distinct_and_valid():
    seen = set()
    for T in gen_T_family(7):
        G = T.to_triangulation()
        assert G.is_3tree
        assert len(G.edges) == 3 * 7 - 6
        seen.add(G.rotation)
    assert len(seen) == count_T_family(7)


def test_T_family_rejects_small_n():
    with pytest.raises(DomainError):
        list(gen_T_family(3))


def test_stack_rejects_non_face():
    with pytest.raises(DomainError):
        stack((0, 1, 2), [(3, (0, 1, 2)), (4, (0, 1, 2)), (5, (0, 1, 2))])


def test_only_3trees_peel():
    graphs = gen_triangulations(6)
    assert sorted(peel_order(G) is not None for G in graphs) == [False, True]


@pytest.mark.parametrize("n", [4, 5, 6])
def test_reroot_every_triangle_exhaustive(n):
    for G in {T.to_triangulation().canonical_key: T.to_triangulation() for T in gen_T_family(n)}.values():
        for tri in G.triangles:
            for C in permutations(tri):
                seq = reroot_3tree(G, C)
                assert seq.base == C
                H = seq.replay()
                assert H.canonical_key == G.canonical_key
                # the replay keeps the original labels
                assert sorted(H.edges) == sorted(G.edges)


def test_reroot_rejects_non_triangle():
    G = next(iter(gen_T_family(6))).to_triangulation()
    a, b = next((u, v) for u in range(6) for v in range(6) if u != v and not G.has_edge(u, v))
    c = next(w for w in range(6) if w not in (a, b))
    with pytest.raises(DomainError):
        reroot_3tree(G, (a, b, c))


def test_shape_counts():
    # ternary trees with k nodes: C(3k, k) / (2k + 1)
    for k in range(6):
        assert len(all_shapes(k)) == comb(3 * k, k) // (2 * k + 1)
    assert len(all_shapes(5)) == 273


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 272))
def test_shape_round_trip_and_flip(i):
    s = all_shapes(5)[i]
    R = RootedTriangulation.from_shape(s)
    assert R.base.n == 8
    assert R.shape() == s
    assert shape_size(s) == 5
    assert flip_shape(flip_shape(s)) == s
    # reflecting the drawing and swapping a, b gives the flipped shape
    assert shape_of(R.base.mirror(), (1, 0, 2)) == flip_shape(s)


def test_rooted_requires_face():
    G = stack((0, 1, 2), [(3, (0, 1, 2)), (4, (0, 1, 3))])
    with pytest.raises(DomainError):
        RootedTriangulation(G, (0, 1, 3))  # separating
    RootedTriangulation(G, (0, 1, 2))


def test_degree_profile():
    s = ((None, None, None), None, None)
    ia, ib, ic, inner = interior_degree_profile(s)
    assert (ia, ib, ic) == (2, 2, 1)
    assert inner == 4


def test_bipyramid():
    B = bipyramid()
    assert B.n == 5
    assert [B.degree(v) for v in BIPYRAMID_TIPS] == [3, 3]


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32))
def test_bipyramid_planting(seed):
    rng = random.Random(seed)
    shapes = [rng.choice(all_shapes(5)) for _ in range(6)]
    G = build_bipyramid_graph(shapes)
    assert G.n == 35
    assert len(G.edges) == 99
    assert G.is_3tree


def test_bipyramid_planting_validates():
    with pytest.raises(DomainError):
        build_bipyramid_graph([None] * 5)
    with pytest.raises(DomainError):
        build_bipyramid_graph([None] * 5 + ["x"])


def test_shapes_are_rooted_quotient_of_T8():
    seen = set()
    for T in gen_T_family(8):
        G = T.to_triangulation()
        for a, b, c in G.faces:
            for outer in ((a, b, c), (b, c, a), (c, a, b)):
                seen.add(shape_of(G, outer))
    assert seen == set(all_shapes(5))

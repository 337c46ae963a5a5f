from __future__ import annotations

import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipoint.errors import InvalidEmbeddingError, PlanarCodeError, UnflippableEdgeError
from unipoint.triangulations import (
    PLANAR_CODE_HEADER,
    Triangulation,
    are_isomorphic,
    canonical_graph_key,
    flip,
    from_edges,
    gen_triangulations,
    labeled_maximal_planar_classes,
    parse_planar_code,
    stacked_triangulation,
    write_planar_code,
)

K4 = Triangulation([[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])
OCTAHEDRON = from_edges(6, [(u, v) for u in range(6) for v in range(u + 1, 6) if v - u != 3])


def random_relabel(G: Triangulation, rng: random.Random) -> Triangulation:
    perm = list(range(G.n))
    rng.shuffle(perm)
    return G.relabeled(perm)


def test_k4_structure():
    assert K4.n == 4
    assert len(K4.edges) == 6
    assert len(K4.faces) == 4
    assert K4.is_3tree


def test_rejects_non_triangulations():
    with pytest.raises(InvalidEmbeddingError):
        Triangulation([[1, 2], [0, 2], [0, 1], []])
    with pytest.raises(InvalidEmbeddingError):
        Triangulation([[1, 2, 3], [0, 2, 3], [0, 1, 3], [0, 1, 2]])  # wrong rotations
    with pytest.raises(InvalidEmbeddingError):
        Triangulation([[1, 1, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]])


def test_faces_oriented_consistently():
    for G in gen_triangulations(7):
        for a, b, c in G.faces:
            assert G.next_in_face(a, b) == c
            assert G.next_in_face(b, c) == a


def test_flip_k4_fails_octahedron_succeeds():
    for e in K4.edges:
        with pytest.raises(UnflippableEdgeError):
            flip(K4, e)
    assert len(OCTAHEDRON.edges) == 12
    for e in OCTAHEDRON.edges:
        H = flip(OCTAHEDRON, e)
        assert not H.has_edge(*e)
        assert len(H.edges) == 12


@settings(max_examples=25, deadline=None)
@given(st.integers(5, 9), st.integers(0, 2**32))
def test_flip_is_involution_up_to_edge(n, seed):
    rng = random.Random(seed)
    G = rng.choice(gen_triangulations(n))
    e = rng.choice(G.edges)
    w, x = G.next_in_face(*e), G.next_in_face(e[1], e[0])
    if G.has_edge(w, x):
        return
    H = flip(G, e)
    assert H.has_edge(w, x)
    back = flip(H, (min(w, x), max(w, x)))
    assert back.canonical_key == G.canonical_key


@settings(max_examples=40, deadline=None)
@given(st.integers(4, 10), st.integers(0, 2**32))
def test_canonical_key_relabel_and_mirror_invariant(n, seed):
    rng = random.Random(seed)
    G = rng.choice(gen_triangulations(n))
    k = canonical_graph_key(G)
    assert canonical_graph_key(random_relabel(G, rng)) == k
    assert canonical_graph_key(G.mirror()) == k


def test_canonical_key_agrees_with_networkx_isomorphism():
    graphs = gen_triangulations(8)
    nxg = [nx.Graph(G.edges) for G in graphs]
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            assert not nx.is_isomorphic(nxg[i], nxg[j])
    assert are_isomorphic(graphs[3], random_relabel(graphs[3], random.Random(0)))


@pytest.mark.parametrize("n,count", [(4, 1), (5, 1), (6, 2), (7, 5), (8, 14), (9, 50)])
def test_generation_counts(n, count):
    assert len(gen_triangulations(n)) == count


def test_generation_count_ten():
    assert len(gen_triangulations(10)) == 233


@pytest.mark.parametrize("n", [4, 5, 6])
def test_brute_force_oracle_small(n):
    assert labeled_maximal_planar_classes(n) == len(gen_triangulations(n))


def test_generation_deterministic():
    a = gen_triangulations(8)
    b = gen_triangulations(8)
    assert [G.rotation for G in a] == [G.rotation for G in b]


def test_planar_code_round_trip():
    graphs = gen_triangulations(8)
    data = write_planar_code(graphs)
    assert data.startswith(PLANAR_CODE_HEADER)
    back = parse_planar_code(data)
    assert [G.rotation for G in back] == [G.rotation for G in graphs]


def test_planar_code_is_clockwise():
    data = write_planar_code([K4])
    body = data[len(PLANAR_CODE_HEADER) :]
    assert body[0] == 4
    # vertex 1 (1-based) has counterclockwise neighbours 2, 3, 4
    assert list(body[1:5]) == [4, 3, 2, 0]


def test_planar_code_errors_report_offsets():
    data = write_planar_code([K4])
    with pytest.raises(PlanarCodeError, match="header"):
        parse_planar_code(data[3:])
    with pytest.raises(PlanarCodeError) as info:
        parse_planar_code(data[:-3])
    assert info.value.offset == len(data) - 3
    bad = bytearray(data)
    bad[len(PLANAR_CODE_HEADER) + 1] = 9
    with pytest.raises(PlanarCodeError, match="out of range") as info:
        parse_planar_code(bytes(bad))
    assert info.value.offset == len(PLANAR_CODE_HEADER) + 1


def test_json_round_trip():
    G = stacked_triangulation(7)
    assert Triangulation.from_json(G.to_json()) == G


def test_triangles_include_separating():
    # a planar 3-tree on n vertices has 2n-4 faces and n-4 separating triangles
    G = stacked_triangulation(6)
    assert len(G.triangles) == 3 * 6 - 8
    assert all(G.has_edge(a, b) and G.has_edge(b, c) and G.has_edge(a, c) for a, b, c in G.triangles)

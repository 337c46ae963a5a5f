from __future__ import annotations

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unipoint.errors import GeneralPositionError, MalformedFileError
from unipoint.geometry import PointSet
from unipoint.order_types import (
    KNOWN_ORDER_TYPE_COUNTS,
    OrderTypeClass,
    canonical_key,
    enumerate_grid_order_types,
    generate_order_types,
    has_triangular_hull,
    lambda_matrix,
    load_order_types,
    oriented_key,
    parse_otypes_file,
    read_otypes_path,
    write_otypes_file,
)


def random_set(n: int, rng: random.Random, span: int = 1000) -> PointSet:
    while True:
        pts = {(rng.randrange(span), rng.randrange(span)) for _ in range(n)}
        if len(pts) < n:
            continue
        try:
            return PointSet(pts)
        except GeneralPositionError:
            continue


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_bundled_database_complete(n):
    sets = load_order_types(n)
    assert len(sets) == KNOWN_ORDER_TYPE_COUNTS[n]
    assert len({canonical_key(P) for P in sets}) == len(sets)
    assert all(0 <= c < 256 for P in sets for p in P for c in p)


def test_grid_oracle_small():
    assert len(enumerate_grid_order_types(4, 3)) == 2
    # no 3x3 grid subset realizes the triangle with two interior points
    assert len(enumerate_grid_order_types(5, 3)) == 2
    assert len(enumerate_grid_order_types(5, 4)) == 3


def test_grid_order_types_are_in_database():
    db = {canonical_key(P) for P in load_order_types(6)}
    grid = enumerate_grid_order_types(6, 4)
    assert {c.key for c in grid} <= db


def test_generation_reproduces_small_counts():
    levels = generate_order_types(6)
    assert {n: len(v) for n, v in levels.items()} == {3: 1, 4: 2, 5: 3, 6: 16}


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 8), st.integers(0, 2**32))
def test_key_invariant_under_relabeling_and_mirror(n, seed):
    rng = random.Random(seed)
    P = random_set(n, rng)
    perm = list(range(n))
    rng.shuffle(perm)
    k = canonical_key(P)
    assert canonical_key(P.permuted(perm)) == k
    assert canonical_key(P.mirrored()) == k
    assert oriented_key(P.permuted(perm)) == oriented_key(P)


@settings(max_examples=30, deadline=None)
@given(st.integers(4, 7), st.integers(0, 2**32))
def test_key_invariant_under_affine_map(n, seed):
    rng = random.Random(seed)
    P = random_set(n, rng)
    # an orientation-preserving linear map keeps every triple's sign
    Q = PointSet((2 * x + y, x + 3 * y) for x, y in P)
    assert canonical_key(Q) == canonical_key(P)


def test_lambda_matrix_counts_left_points():
    P = PointSet([(0, 0), (4, 0), (0, 4), (1, 1)])
    lam = lambda_matrix(P)
    assert lam.shape == (4, 4)
    # both other points lie left of the bottom edge 0 -> 1
    assert lam[0, 1] == 2
    assert np.all(lam + lam.T == np.where(np.eye(4, dtype=bool), 0, 2))


def test_convex_and_triangle_quadrilaterals_differ():
    sq = PointSet([(0, 0), (4, 0), (4, 4), (0, 4)])
    tri = PointSet([(0, 0), (4, 0), (0, 4), (1, 1)])
    assert canonical_key(sq) != canonical_key(tri)
    assert OrderTypeClass.of(tri) == OrderTypeClass.of(PointSet([(10, 10), (0, 0), (20, 0), (9, 3)]))
    assert has_triangular_hull(tri) and not has_triangular_hull(sq)


def test_chirality_detected():
    # the convex pentagon is mirror symmetric as an order type
    pent = PointSet([(0, 0), (4, 0), (5, 3), (2, 5), (-1, 3)])
    assert oriented_key(pent) == oriented_key(pent.mirrored())
    chiral = [P for P in load_order_types(6) if oriented_key(P) != oriented_key(P.mirrored())]
    assert chiral


def test_file_round_trip_both_widths_and_orders():
    sets = load_order_types(6)
    for width in (8, 16):
        for order in ("little", "big"):
            data = write_otypes_file(sets, width, order)
            assert len(data) == len(sets) * 6 * 2 * width // 8
            assert parse_otypes_file(data, 6, width, order) == sets


def test_wrong_byte_order_is_detected():
    # read little-endian, these bytes give (0,0), (1,2), (129,258): collinear
    P = PointSet([(0, 0), (256, 512), (33024, 513)])
    data = write_otypes_file([P], 16, "big")
    assert parse_otypes_file(data, 3, 16, "big") == [P]
    with pytest.raises(GeneralPositionError, match="record 0"):
        parse_otypes_file(data, 3, 16, "little")


def test_size_mismatch():
    data = write_otypes_file(load_order_types(6), 8)
    with pytest.raises(MalformedFileError):
        parse_otypes_file(data, 7)
    with pytest.raises(MalformedFileError):
        parse_otypes_file(data[:-1], 6)


def test_read_path_infers_n(tmp_path):
    sets = load_order_types(7)
    path = tmp_path / "otypes07.b08"
    path.write_bytes(write_otypes_file(sets))
    assert read_otypes_path(path) == sets


def test_trivial_levels():
    assert load_order_types(1)[0].n == 1
    assert load_order_types(2)[0].n == 2

from __future__ import annotations

import json

import pytest

from unipoint.errors import ConstraintError, DomainError
from unipoint.obstruction import (
    ObstructionFamily,
    cached_family,
    check_degree_separation,
    check_family_structure,
    reverify_family,
    search_obstruction_families,
)
from unipoint.order_types import load_order_types
from unipoint.threetrees import BIPYRAMID_TIPS, all_shapes, build_bipyramid_graph, flip_shape
from unipoint.triangulations import parse_planar_code


@pytest.fixture(scope="module")
def families():
    return search_obstruction_families()


def test_search_finds_families(families):
    assert families
    for fam in families:
        check_family_structure(fam)


def test_search_independent_of_order(families):
    assert search_obstruction_families(seed=11) == families
    assert search_obstruction_families(max_families=1) == families[:1]


def test_cached_family_is_first_result(families):
    assert cached_family() == families[0]


def test_reverify_cached_family_on_subset():
    # the full re-verification runs in the acceptance suite
    subset = [P for P in load_order_types(8) if len(P.hull) == 3][:300]
    ok, worst = reverify_family(cached_family(), subset)
    assert ok and worst <= 2


def test_empty_universe():
    with pytest.raises(DomainError):
        search_obstruction_families(universe=[])


def test_seven_copies_rejected():
    s = next(s for s in all_shapes(5) if flip_shape(s) == s)
    fam = ObstructionFamily((s,) * 7)
    with pytest.raises(ConstraintError):
        check_family_structure(fam)
    # all seven embed wherever one does
    ok, worst = reverify_family(fam, [P for P in load_order_types(8) if len(P.hull) == 3][:200])
    assert worst in (0, 7)


def test_family_size_checked():
    with pytest.raises(DomainError):
        ObstructionFamily((None,) * 6)


def test_structure_violations():
    fam = cached_family()
    m = list(fam.members)
    m[0], m[2] = m[2], m[0]
    with pytest.raises(ConstraintError, match="flip pair"):
        check_family_structure(ObstructionFamily(tuple(m)))


def test_serialization(tmp_path):
    fam = cached_family()
    obj = json.loads(json.dumps(fam.to_json()))
    assert ObstructionFamily.from_json(obj) == fam
    graphs = parse_planar_code(fam.to_planar_code())
    assert [G.rotation for G in graphs] == [R.base.rotation for R in fam.rooted()]
    assert all(R.outer == (0, 1, 2) for R in fam.rooted())


def test_degree_separation_on_planted_graphs():
    fam = cached_family()
    for i in range(7):
        G = build_bipyramid_graph([fam.members[(i + k) % 7] for k in range(6)])
        check_degree_separation(G)
        assert all(G.degree(t) >= 12 for t in BIPYRAMID_TIPS)


def test_degree_separation_violation():
    # empty faces leave the tips at degree 3
    G = build_bipyramid_graph([None] * 6)
    with pytest.raises(ConstraintError):
        check_degree_separation(G)

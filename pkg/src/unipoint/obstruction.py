"""Seven rooted 8-vertex 3-trees, no three of which share a fixed-outer
embedding, and the 35-vertex bipyramid family built from them."""

from __future__ import annotations

import json
import logging
import random
from dataclasses import dataclass
from importlib import resources
from itertools import combinations, product
from pathlib import Path
from typing import Optional, Sequence

from .analysis import fixed_outer_masks
from .embedding import embed_3tree_fixed_outer, hull_rotations
from .errors import ConstraintError, DomainError
from .geometry import PointSet
from .order_types import load_order_types
from .threetrees import (
    BIPYRAMID_TIPS,
    RootedTriangulation,
    Shape,
    all_shapes,
    build_bipyramid_graph,
    flip_shape,
    interior_degree_profile,
)
from .triangulations import Triangulation, write_planar_code

log = logging.getLogger(__name__)

FAMILY_SIZE = 7
PLANTED_VERTICES = 8


@dataclass(frozen=True)
class ObstructionFamily:
    """Members ordered as three flip pairs (0,1), (2,3), (4,5) and one
    self-symmetric graph at index 6."""

    members: tuple

    def __post_init__(self):
        if len(self.members) != FAMILY_SIZE:
            raise DomainError(f"a family has {FAMILY_SIZE} members")

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return [(0, 1), (2, 3), (4, 5)]

    def rooted(self) -> list[RootedTriangulation]:
        return [RootedTriangulation.from_shape(s) for s in self.members]

    def to_json(self) -> dict:
        return {
            "members": [_shape_to_json(s) for s in self.members],
            "outer": [0, 1, 2],
            "pairs": self.pairs,
            "self_symmetric": 6,
        }

    @classmethod
    def from_json(cls, obj: dict) -> ObstructionFamily:
        return cls(tuple(_shape_from_json(s) for s in obj["members"]))

    def to_planar_code(self) -> bytes:
        return write_planar_code(R.base for R in self.rooted())


def _shape_to_json(s: Shape):
    return None if s is None else [_shape_to_json(c) for c in s]


def _shape_from_json(obj) -> Shape:
    return None if obj is None else tuple(_shape_from_json(c) for c in obj)


def check_family_structure(fam: ObstructionFamily) -> None:
    """Raise ConstraintError unless the family is flip-closed as three pairs
    plus one self-symmetric member and satisfies the degree constraints."""
    m = fam.members
    for i, j in fam.pairs:
        if flip_shape(m[i]) != m[j] or m[i] == m[j]:
            raise ConstraintError(f"members {i} and {j} are not a flip pair")
    if flip_shape(m[6]) != m[6]:
        raise ConstraintError("member 6 is not flip-symmetric")
    for i, s in enumerate(m):
        ia, ib, ic, inner = interior_degree_profile(s)
        want = 3 if i == 6 else 4
        if ic != want:
            raise ConstraintError(f"member {i}: vertex c has {ic} stacked neighbours, need {want}")
        if inner > 7:
            raise ConstraintError(f"member {i}: a stacked vertex has degree {inner} > 7")
        if ia < 1 or ib < 1:
            raise ConstraintError(f"member {i}: a or b has no stacked neighbour")


def _candidates() -> tuple[list, list]:
    """Flip-symmetric singles (c gains 3) and flip pairs (c gains 4)."""
    shapes = all_shapes(PLANTED_VERTICES - 3)
    singles, pairs = [], set()
    for s in shapes:
        ia, ib, ic, inner = interior_degree_profile(s)
        if inner > 7 or ia < 1 or ib < 1:
            continue
        f = flip_shape(s)
        if f == s and ic == 3:
            singles.append(s)
        elif f != s and ic == 4:
            pairs.add(min((s, f), (f, s), key=_shape_order))
    return singles, sorted(pairs, key=lambda p: _shape_order(p[0]))


def _shape_order(s):
    return repr(s)


def _universe8(universe):
    if universe is None:
        universe = load_order_types(PLANTED_VERTICES)
    universe = list(universe)
    if not universe:
        raise DomainError("empty order-type universe")
    return universe


def search_obstruction_families(
    universe: Optional[Sequence[PointSet]] = None,
    max_families: Optional[int] = None,
    seed: Optional[int] = None,
) -> list[ObstructionFamily]:
    """All families (up to ``max_families``) such that, for every 8-point set
    with triangular hull and every labeling of the hull, at most two members
    embed with a, b, c on the labeled points.

    ``seed`` shuffles the candidate order; the result is sorted, so it does
    not depend on it.
    """
    universe = _universe8(universe)
    singles, pairs = _candidates()
    if seed is not None:
        rng = random.Random(seed)
        rng.shuffle(singles)
        rng.shuffle(pairs)
    shapes = singles + [s for p in pairs for s in p]
    index = {s: i for i, s in enumerate(shapes)}
    # co[i, j]: members k such that i, j, k embed together somewhere
    co: dict[tuple[int, int], int] = {}
    for _, _, m in fixed_outer_masks(shapes, universe):
        bits = [i for i in range(len(shapes)) if m >> i & 1]
        for a, b in combinations(bits, 2):
            co[a, b] = co.get((a, b), 0) | m

    def valid(members: list[int]) -> bool:
        mask = 0
        for i in members:
            mask |= 1 << i
        for a, b in combinations(sorted(members), 2):
            if co.get((a, b), 0) & mask & ~(1 << a) & ~(1 << b):
                return False
        return True

    found = []
    for s in singles:
        si = index[s]
        good = [p for p in pairs if valid([si, index[p[0]], index[p[1]]])]
        for chosen in combinations(good, 3):
            members = [si] + [index[x] for p in chosen for x in p]
            if valid(members):
                ordered = sorted(chosen, key=lambda p: _shape_order(p[0]))
                found.append(ObstructionFamily(tuple(x for p in ordered for x in p) + (s,)))
    found.sort(key=lambda f: [_shape_order(x) for x in f.members])
    if max_families is not None:
        found = found[:max_families]
    return found


def reverify_family(fam: ObstructionFamily, universe: Optional[Sequence[PointSet]] = None) -> tuple[bool, int]:
    """Recompute, with the labeled embedder on explicit graphs, the largest
    number of members sharing one fixed-outer point set; returns
    (largest <= 2, largest). Mirror images are checked explicitly."""
    universe = _universe8(universe)
    graphs = [R.base for R in fam.rooted()]
    worst = 0
    for P in universe:
        if len(P.hull) != 3:
            continue
        for Q in (P, P.mirrored()):
            for q in hull_rotations(Q):
                hits = 0
                for G in graphs:
                    if embed_3tree_fixed_outer(G, Q, {0: q[0], 1: q[1], 2: q[2]}) is not None:
                        hits += 1
                worst = max(worst, hits)
    return worst <= 2, worst


def check_degree_separation(G: Triangulation) -> None:
    """Tips have degree >= 12, other bipyramid vertices >= 8, all else <= 7."""
    for v in range(G.n):
        d = G.degree(v)
        if v in BIPYRAMID_TIPS:
            ok = d >= 12
        elif v < 5:
            ok = d >= 8
        else:
            ok = d <= 7
        if not ok:
            raise ConstraintError(f"vertex {v} has degree {d}, breaking the degree separation")


def count_family_classes(fam: ObstructionFamily, check_every: int = 1) -> int:
    """Number of isomorphism classes among the 7^6 face assignments."""
    check_family_structure(fam)
    keys = set()
    for k, choice in enumerate(product(range(FAMILY_SIZE), repeat=6)):
        G = build_bipyramid_graph([fam.members[i] for i in choice])
        if k % check_every == 0:
            check_degree_separation(G)
        keys.add(G.canonical_key)
    return len(keys)


# -- cache -------------------------------------------------------------------------


def cached_family() -> ObstructionFamily:
    """The family shipped with the package (first result of the search)."""
    text = (resources.files("unipoint") / "data" / "family.json").read_text()
    return ObstructionFamily.from_json(json.loads(text))


def save_family(fam: ObstructionFamily, path: str | Path) -> None:
    Path(path).write_text(json.dumps(fam.to_json(), indent=1) + "\n")

"""Exact integer predicates on planar point sets.

Every decision in the package goes through :func:`orient`, which evaluates a
3x3 determinant on Python integers. Coordinates are bounded on ingestion so
the same code would be overflow-free with 64-bit machine integers.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from math import comb
from typing import Iterable, NamedTuple, Sequence

from .errors import CoordinateRangeError, GeneralPositionError

COORD_LIMIT = 1 << 20


class Point(NamedTuple):
    x: int
    y: int


def orient(p: Sequence[int], q: Sequence[int], r: Sequence[int]) -> int:
    """Sign of the signed area of triangle pqr; +1 means counterclockwise."""
    d = (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])
    return (d > 0) - (d < 0)


def segments_properly_cross(a, b, c, d) -> bool:
    """True iff the open segments ab and cd share an interior point.

    Segments sharing an endpoint never cross. Collinear configurations are
    reported as non-crossing; general position rules them out upstream.
    """
    if a == c or a == d or b == c or b == d:
        return False
    o1 = orient(a, b, c)
    o2 = orient(a, b, d)
    if o1 * o2 >= 0:
        return False
    o3 = orient(c, d, a)
    o4 = orient(c, d, b)
    return o3 * o4 < 0


def point_in_triangle(p, a, b, c) -> bool:
    """True iff p lies strictly inside triangle abc.

    Raises GeneralPositionError when p is on the boundary (or on a supporting
    line through two corners) or when abc is degenerate.
    """
    s = orient(a, b, c)
    if s == 0:
        raise GeneralPositionError(f"degenerate triangle {a}, {b}, {c}")
    o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    if o1 == 0 or o2 == 0 or o3 == 0:
        raise GeneralPositionError(f"point {p} is collinear with a side of the triangle")
    return o1 == s and o2 == s and o3 == s


def convex_position4(a, b, c, d) -> bool:
    """True iff the four points are the corners of a convex quadrilateral."""
    pts = (a, b, c, d)
    for i, j, k in combinations(range(4), 3):
        if orient(pts[i], pts[j], pts[k]) == 0:
            raise GeneralPositionError(f"collinear triple {pts[i]}, {pts[j]}, {pts[k]}")
    for i in range(4):
        others = [pts[j] for j in range(4) if j != i]
        if point_in_triangle(pts[i], *others):
            return False
    return True


def _hull_indices(points: Sequence[Sequence[int]]) -> list[int]:
    order = sorted(range(len(points)), key=lambda i: (points[i][0], points[i][1]))
    if len(order) < 3:
        return order

    def half(seq):
        chain: list[int] = []
        for i in seq:
            while len(chain) >= 2 and orient(points[chain[-2]], points[chain[-1]], points[i]) <= 0:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(order)
    upper = half(reversed(order))
    return lower[:-1] + upper[:-1]


def crossing_lower_bound(n: int) -> int:
    """Lower bound on the rectilinear crossing number of K_n (floor formula).

    The product of the four floors is always divisible by 4.
    """
    if n < 4:
        return 0
    return (n // 2) * ((n - 1) // 2) * ((n - 2) // 2) * ((n - 3) // 2) // 4


class PointSet:
    """An immutable, validated set of integer points in general position.

    Derived tables (orientations, segment crossings, triangle contents) are
    computed lazily as bitmasks and cached; they drive the fast paths of the
    embedding code.
    """

    __slots__ = ("points", "__dict__")

    def __init__(self, points: Iterable[Sequence[int]]):
        pts = []
        for p in points:
            x, y = p
            if not isinstance(x, int) or not isinstance(y, int):
                x2, y2 = int(x), int(y)
                if x2 != x or y2 != y:
                    raise TypeError(f"non-integer coordinate in {p!r}")
                x, y = x2, y2
            if abs(x) >= COORD_LIMIT or abs(y) >= COORD_LIMIT:
                raise CoordinateRangeError(f"coordinate of {p!r} exceeds 2^20")
            pts.append(Point(x, y))
        self.points: tuple[Point, ...] = tuple(pts)
        if len(set(self.points)) != len(self.points):
            raise GeneralPositionError("point set contains coincident points")
        for i, j, k in combinations(range(len(pts)), 3):
            if orient(pts[i], pts[j], pts[k]) == 0:
                raise GeneralPositionError(f"collinear triple at indices {(i, j, k)}")

    def __len__(self) -> int:
        return len(self.points)

    def __getitem__(self, i: int) -> Point:
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other) -> bool:
        return isinstance(other, PointSet) and self.points == other.points

    def __hash__(self) -> int:
        return hash(self.points)

    def __repr__(self) -> str:
        return f"PointSet({[tuple(p) for p in self.points]})"

    @property
    def n(self) -> int:
        return len(self.points)

    def mirrored(self) -> PointSet:
        """Reflection across the y axis (orientations flip sign)."""
        return PointSet((-p.x, p.y) for p in self.points)

    def permuted(self, order: Sequence[int]) -> PointSet:
        return PointSet(self.points[i] for i in order)

    def to_json(self) -> list[list[int]]:
        return [[p.x, p.y] for p in self.points]

    # -- cached tables ---------------------------------------------------

    @cached_property
    def orientation(self) -> list[list[list[int]]]:
        """orientation[i][j][k] == orient(p_i, p_j, p_k)."""
        n = self.n
        pts = self.points
        table = [[[0] * n for _ in range(n)] for _ in range(n)]
        for i, j, k in combinations(range(n), 3):
            s = orient(pts[i], pts[j], pts[k])
            t = table
            t[i][j][k] = t[j][k][i] = t[k][i][j] = s
            t[i][k][j] = t[k][j][i] = t[j][i][k] = -s
        return table

    @cached_property
    def hull(self) -> list[int]:
        return convex_hull(self)

    @cached_property
    def segment_ids(self) -> list[list[int]]:
        """segment_ids[i][j]: index of the segment p_i p_j (symmetric)."""
        n = self.n
        ids = [[-1] * n for _ in range(n)]
        for s, (i, j) in enumerate(combinations(range(n), 2)):
            ids[i][j] = ids[j][i] = s
        return ids

    @cached_property
    def crossing_masks(self) -> list[int]:
        """Bitmask over segment ids of the segments properly crossing each one."""
        n = self.n
        o = self.orientation
        pairs = list(combinations(range(n), 2))
        masks = [0] * len(pairs)
        for s, (a, b) in enumerate(pairs):
            for t in range(s + 1, len(pairs)):
                c, d = pairs[t]
                if a == c or a == d or b == c or b == d:
                    continue
                if o[a][b][c] * o[a][b][d] < 0 and o[c][d][a] * o[c][d][b] < 0:
                    masks[s] |= 1 << t
                    masks[t] |= 1 << s
        return masks

    @cached_property
    def inside_masks(self) -> dict[tuple[int, int, int], int]:
        """Point bitmask strictly inside each triangle, keyed by sorted index triple."""
        n = self.n
        o = self.orientation
        out = {}
        for a, b, c in combinations(range(n), 3):
            s = o[a][b][c]
            m = 0
            for p in range(n):
                if p != a and p != b and p != c:
                    if o[a][b][p] == s and o[b][c][p] == s and o[c][a][p] == s:
                        m |= 1 << p
            out[(a, b, c)] = m
        return out

    def inside(self, a: int, b: int, c: int) -> int:
        """Bitmask of points strictly inside triangle p_a p_b p_c."""
        if a > b:
            a, b = b, a
        if b > c:
            b, c = c, b
            if a > b:
                a, b = b, a
        return self.inside_masks[(a, b, c)]


def convex_hull(P: PointSet | Sequence[Sequence[int]]) -> list[int]:
    """Hull vertex indices in counterclockwise order, starting at the
    lexicographically smallest point."""
    points = P.points if isinstance(P, PointSet) else P
    return _hull_indices(points)


def count_convex_quadruples(P: PointSet) -> int:
    """Number of 4-subsets of P in convex position.

    A 4-subset is non-convex exactly when one of its points lies inside the
    triangle of the other three, and then that triangle is unique, so the
    count is C(n,4) minus the number of (triangle, interior point) pairs.
    """
    nonconvex = sum(m.bit_count() for m in P.inside_masks.values())
    return comb(P.n, 4) - nonconvex

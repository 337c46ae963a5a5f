"""Planar 3-trees: the labeled stacking family, rerooting, rooted shapes and
the bipyramid construction.

A rooted 3-tree with outer face ``(a, b, c)`` is determined up to rooted
isomorphism by a ternary tree ("shape"): ``None`` for an empty face, or a
triple ``(s0, s1, s2)`` for a vertex ``v`` stacked into the face, whose
children are the shapes of the faces ``(a, b, v)``, ``(b, c, v)`` and
``(c, a, v)``, each again read with that vertex order.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import factorial
from typing import Iterator, Optional, Sequence

from .errors import DomainError
from .triangulations import Triangulation

Shape = Optional[tuple]


# -- stacking ---------------------------------------------------------------


def stack(base: tuple[int, int, int], steps: Sequence[tuple[int, tuple[int, int, int]]]) -> Triangulation:
    """Build a triangulation from a triangle by inserting degree-3 vertices.

    ``steps`` holds ``(v, (x, y, z))``: vertex v is made adjacent to x, y, z,
    which must bound a face of the graph built so far. A vertex set bounding
    two faces (only the initial triangle) is consumed one side at a time.
    """
    a, b, c = base
    labels = {a, b, c} | {v for v, _ in steps}
    n = len(labels)
    if labels != set(range(n)):
        raise DomainError("stacking labels must be exactly 0..n-1")
    rot: list[list[int]] = [[] for _ in range(n)]
    rot[a], rot[b], rot[c] = [b, c], [c, a], [a, b]
    faces: dict[frozenset, list[tuple[int, int, int]]] = {frozenset(base): [(a, b, c), (a, c, b)]}
    for v, tri in steps:
        options = faces.get(frozenset(tri))
        if not options:
            raise DomainError(f"{tri} is not a face when inserting vertex {v}")
        x, y, z = options.pop(0)
        if not options:
            del faces[frozenset(tri)]
        # face (x, y, z) traced as x->y->z: at y, z precedes x; at z, x precedes y;
        # at x, y precedes z
        for p, before in ((y, z), (z, x), (x, y)):
            r = rot[p]
            r.insert(r.index(before) + 1, v)
        rot[v] = [x, y, z]
        for f in ((x, y, v), (y, z, v), (z, x, v)):
            faces.setdefault(frozenset(f), []).append(f)
    return Triangulation(rot)


def peel_order(G: Triangulation, keep: Sequence[int] = ()) -> list[tuple[int, tuple[int, int, int]]] | None:
    """Repeatedly delete degree-3 vertices outside ``keep`` until 3 vertices
    remain; returns the deletions (vertex, neighbours) or None if G is not a
    planar 3-tree."""
    keep = set(keep)
    adj = [set(r) for r in G.rotation]
    alive = set(range(G.n))
    order = []
    while len(alive) > 3:
        for v in sorted(alive):
            if v in keep or len(adj[v]) != 3:
                continue
            x, y, z = sorted(adj[v])
            if y in adj[x] and z in adj[x] and z in adj[y]:
                break
        else:
            return None
        order.append((v, (x, y, z)))
        for w in adj[v]:
            adj[w].discard(v)
        adj[v] = set()
        alive.discard(v)
    return order


@dataclass(frozen=True)
class ConstructionSequence:
    """A triangle plus the vertices stacked into it, in insertion order."""

    base: tuple[int, int, int]
    steps: tuple[tuple[int, tuple[int, int, int]], ...]

    def replay(self) -> Triangulation:
        return stack(self.base, self.steps)


def reroot_3tree(G: Triangulation, C: Sequence[int]) -> ConstructionSequence:
    """Construction sequence for the planar 3-tree G starting from triangle C."""
    C = tuple(C)
    if len(set(C)) != 3 or not all(G.has_edge(C[i], C[i - 1]) for i in range(3)):
        raise DomainError(f"{C} is not a triangle of the graph")
    order = peel_order(G, keep=C)
    if order is None:
        raise DomainError("graph is not a planar 3-tree")
    return ConstructionSequence(C, tuple(reversed(order)))


# -- the labeled family T_n -------------------------------------------------


@dataclass(frozen=True)
class Labeled3Tree:
    """Member of the labeled stacking family on vertices 0..n-1.

    Vertices 0..3 form a K4; ``stacking[i]`` is the (sorted) face into which
    vertex ``i + 4`` was inserted.
    """

    n: int
    stacking: tuple[tuple[int, int, int], ...]

    def sequence(self) -> ConstructionSequence:
        steps = [(3, (0, 1, 2))] + [(i + 4, f) for i, f in enumerate(self.stacking)]
        return ConstructionSequence((0, 1, 2), tuple(steps))

    def to_triangulation(self) -> Triangulation:
        return _replay_cached(self)


@lru_cache(maxsize=1 << 16)
def _replay_cached(T: Labeled3Tree) -> Triangulation:
    return T.sequence().replay()


def _k4_faces() -> list[tuple[int, int, int]]:
    return [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]


def gen_T_family(n: int) -> Iterator[Labeled3Tree]:
    """All members of T_n in lexicographic order of their stacking choices."""
    if n < 4:
        raise DomainError("T_n is defined for n >= 4")

    def rec(v: int, fs: list, chosen: list):
        if v == n:
            yield Labeled3Tree(n, tuple(chosen))
            return
        for f in sorted(fs):
            x, y, z = f
            rest = [g for g in fs if g != f]
            rest += [tuple(sorted(t)) for t in ((x, y, v), (y, z, v), (x, z, v))]
            chosen.append(f)
            yield from rec(v + 1, rest, chosen)
            chosen.pop()

    yield from rec(4, _k4_faces(), [])


def count_T_family(n: int) -> int:
    """Size of T_n: 2^(n-4) (n-3)!."""
    if n < 4:
        raise DomainError("T_n is defined for n >= 4")
    return 2 ** (n - 4) * factorial(n - 3)


# -- rooted shapes ------------------------------------------------------------


@lru_cache(maxsize=None)
def shape_size(s: Shape) -> int:
    if s is None:
        return 0
    return 1 + shape_size(s[0]) + shape_size(s[1]) + shape_size(s[2])


@lru_cache(maxsize=None)
def flip_shape(s: Shape) -> Shape:
    """Shape of the mirror image with the roles of a and b exchanged."""
    if s is None:
        return None
    return (flip_shape(s[0]), flip_shape(s[2]), flip_shape(s[1]))


@lru_cache(maxsize=None)
def all_shapes(k: int) -> tuple:
    """All ternary shapes with k stacked vertices (there are C(3k,k)/(2k+1))."""
    if k == 0:
        return (None,)
    out = []
    for i in range(k):
        for j in range(k - i):
            l = k - 1 - i - j
            for s0 in all_shapes(i):
                for s1 in all_shapes(j):
                    for s2 in all_shapes(l):
                        out.append((s0, s1, s2))
    return tuple(out)


def shape_steps(s: Shape, face: tuple[int, int, int], next_label: int) -> tuple[list, int]:
    """Stacking steps realizing shape s inside ``face``; labels are assigned in
    preorder from ``next_label``."""
    steps = []

    def rec(node, f, label):
        if node is None:
            return label
        v = label
        steps.append((v, f))
        x, y, z = f
        label = rec(node[0], (x, y, v), label + 1)
        label = rec(node[1], (y, z, v), label)
        return rec(node[2], (z, x, v), label)

    end = rec(s, face, next_label)
    return steps, end


@dataclass(frozen=True)
class RootedTriangulation:
    """A triangulation with a designated outer face, counterclockwise (a, b, c)."""

    base: Triangulation
    outer: tuple[int, int, int]

    def __post_init__(self):
        if frozenset(self.outer) not in {frozenset(f) for f in self.base.faces}:
            raise DomainError(f"{self.outer} is not a face")

    @classmethod
    def from_shape(cls, s: Shape) -> RootedTriangulation:
        """Rooted 3-tree with outer face (0, 1, 2) = (a, b, c)."""
        steps, _ = shape_steps(s, (0, 1, 2), 3)
        return cls(stack((0, 1, 2), steps), (0, 1, 2))

    def shape(self) -> Shape:
        return shape_of(self.base, self.outer)


def shape_of(G: Triangulation, outer: Sequence[int]) -> Shape:
    """Rooted shape of the 3-tree G seen from the face ``outer`` = (a, b, c)."""
    seq = reroot_3tree(G, outer)
    into: dict[frozenset, int] = {}
    for v, f in seq.steps:
        key = frozenset(f)
        if key in into:
            raise DomainError(f"{tuple(outer)} is a separating triangle, not a face")
        into[key] = v

    def rec(x, y, z):
        v = into.get(frozenset((x, y, z)))
        if v is None:
            return None
        return (rec(x, y, v), rec(y, z, v), rec(z, x, v))

    return rec(*outer)


def interior_degree_profile(s: Shape) -> tuple[int, int, int, int]:
    """(interior neighbours of a, of b, of c, max degree of a stacked vertex)."""
    R = RootedTriangulation.from_shape(s)
    G = R.base
    inner = range(3, G.n)
    ia, ib, ic = (sum(1 for w in G.rotation[v] if w >= 3) for v in (0, 1, 2))
    return ia, ib, ic, max((G.degree(v) for v in inner), default=0)


# -- bipyramid planting ---------------------------------------------------------

# triangle t0, t1, t2 = 0, 1, 2; tips 3 and 4
BIPYRAMID_FACES = ((0, 1, 3), (1, 2, 3), (0, 2, 3), (0, 1, 4), (1, 2, 4), (0, 2, 4))
BIPYRAMID_TIPS = (3, 4)


def bipyramid() -> Triangulation:
    return stack((0, 1, 2), [(3, (0, 1, 2)), (4, (0, 1, 2))])


def build_bipyramid_graph(assignment: Sequence[RootedTriangulation | Shape]) -> Triangulation:
    """Plant one rooted 3-tree onto each face of the bipyramid.

    Face i of ``BIPYRAMID_FACES`` receives ``assignment[i]``. Its vertex c goes
    to the tip of the face, a to the smaller and b to the larger of the two
    triangle vertices.
    """
    if len(assignment) != 6:
        raise DomainError("a bipyramid has six faces")
    shapes = []
    for item in assignment:
        if isinstance(item, RootedTriangulation):
            shapes.append(item.shape())
        elif item is None or isinstance(item, tuple):
            shapes.append(item)
        else:
            raise DomainError(f"cannot plant {item!r}: not a rooted 3-tree")
    steps = [(3, (0, 1, 2)), (4, (0, 1, 2))]
    label = 5
    for (t, u, tip), s in zip(BIPYRAMID_FACES, shapes):
        more, label = shape_steps(s, (min(t, u), max(t, u), tip), label)
        steps += more
    return stack((0, 1, 2), steps)

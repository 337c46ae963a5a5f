"""Plane straight-line embeddings of triangulations on point sets.

An assignment is a list ``phi`` with ``phi[v]`` the index of the point that
vertex ``v`` is drawn on.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from typing import Iterable, Optional, Sequence

from .errors import DomainError
from .geometry import PointSet
from .threetrees import Labeled3Tree, gen_T_family, reroot_3tree, shape_size
from .triangulations import Triangulation

Assignment = list


def _edges_of(G) -> Sequence[tuple[int, int]]:
    if isinstance(G, Triangulation):
        return G.edges
    if isinstance(G, Labeled3Tree):
        return G.to_triangulation().edges
    return list(G)


def is_plane(G, P: PointSet, phi: Sequence[int]) -> bool:
    """True iff no two edges of G cross when vertex v is drawn at P[phi[v]].

    G may be a Triangulation, a Labeled3Tree or an iterable of edges.
    """
    sid = P.segment_ids
    masks = P.crossing_masks
    used = 0
    segs = []
    for u, v in _edges_of(G):
        s = sid[phi[u]][phi[v]]
        segs.append(s)
        used |= 1 << s
    for s in segs:
        if masks[s] & used:
            return False
    return True


# -- rooted 3-trees with a fixed outer face ------------------------------------


def _labeled_tree(seq) -> tuple:
    """Ternary tree (v, child_ab, child_bc, child_ca) from a construction sequence."""
    into = {}
    for v, f in seq.steps:
        into[frozenset(f)] = v

    def rec(x, y, z):
        v = into.get(frozenset((x, y, z)))
        if v is None:
            return None
        return (v, rec(x, y, v), rec(y, z, v), rec(z, x, v))

    return rec(*seq.base)


@lru_cache(maxsize=None)
def _size(node) -> int:
    if node is None:
        return 0
    return 1 + _size(node[1]) + _size(node[2]) + _size(node[3])


def _greedy(node, P: PointSet, q0: int, q1: int, q2: int, phi: list) -> bool:
    avail = P.inside(q0, q1, q2)
    if node is None:
        return avail == 0
    if avail.bit_count() != _size(node):
        return False
    v, c0, c1, c2 = node
    n0, n1, n2 = _size(c0), _size(c1), _size(c2)
    inside = P.inside
    while avail:
        low = avail & -avail
        p = low.bit_length() - 1
        avail ^= low
        if (
            inside(q0, q1, p).bit_count() == n0
            and inside(q1, q2, p).bit_count() == n1
            and inside(q2, q0, p).bit_count() == n2
        ):
            # at most one point matches the three counts, so no backtracking
            phi[v] = p
            return (
                _greedy(c0, P, q0, q1, p, phi)
                and _greedy(c1, P, q1, q2, p, phi)
                and _greedy(c2, P, q2, q0, p, phi)
            )
    return False


def _rooted_tree(G: Triangulation, face: tuple[int, int, int]):
    cache = G.__dict__.setdefault("_rooted_trees", {})
    key = frozenset(face)
    if key not in cache:
        seq = reroot_3tree(G, tuple(sorted(face)))
        cache[key] = (seq.base, _labeled_tree(seq))
    base, tree = cache[key]
    return base, tree


def _reorient(tree, base, face):
    """Re-read a labeled tree built on ``base`` with the vertex order of ``face``."""
    if tuple(face) == tuple(base):
        return tree
    into = {}

    def collect(node, f):
        if node is None:
            return
        v = node[0]
        into[frozenset(f)] = v
        x, y, z = f
        collect(node[1], (x, y, v))
        collect(node[2], (y, z, v))
        collect(node[3], (z, x, v))

    collect(tree, base)

    def rec(x, y, z):
        v = into.get(frozenset((x, y, z)))
        if v is None:
            return None
        return (v, rec(x, y, v), rec(y, z, v), rec(z, x, v))

    return rec(*face)


def embed_3tree_fixed_outer(G: Triangulation, P: PointSet, hull_map: dict[int, int]) -> Optional[Assignment]:
    """The unique plane embedding of the planar 3-tree G on P extending
    ``hull_map`` (three vertices of a face -> the three hull points), or None.

    Each stacked vertex must go to the single point splitting its triangle
    into parts holding exactly as many points as the corresponding subgraphs
    have vertices.
    """
    hull = P.hull
    if len(hull) != 3:
        raise DomainError("the convex hull of the point set is not a triangle")
    if len(hull_map) != 3 or set(hull_map.values()) != set(hull):
        raise DomainError("hull_map must send three vertices onto the three hull points")
    if G.n != P.n:
        raise DomainError("graph and point set sizes differ")
    face = tuple(hull_map)
    if frozenset(face) not in {frozenset(f) for f in G.faces}:
        raise DomainError(f"{face} is not a face of the graph")
    base, tree = _rooted_tree(G, face)
    tree = _reorient(tree, base, face)
    phi = [-1] * G.n
    for v, p in hull_map.items():
        phi[v] = p
    if not _greedy(tree, P, *(hull_map[v] for v in face), phi):
        return None
    if not is_plane(G, P, phi):
        return None
    return phi


# -- recovering a stacking from a permutation -------------------


def permutation_to_3tree(P: PointSet, pi: Sequence[int]) -> Optional[Labeled3Tree]:
    """The unique member of T_n drawn plane by vertex i -> P[pi[i]], or None.

    Each further vertex lands in one region of the current drawing; it can
    only be stacked into the face bounding that region.
    """
    n = P.n
    if n < 4 or len(pi) != n:
        raise DomainError("need a permutation of at least four points")
    sid = P.segment_ids
    cross = P.crossing_masks
    first = pi[:4]
    # K4 is drawable iff one of the first four points lies inside the others
    inner = None
    for k in range(4):
        a, b, c = (first[j] for j in range(4) if j != k)
        if P.inside(a, b, c) >> first[k] & 1:
            inner = k
            break
    if inner is None:
        return None
    outer_face = tuple(sorted(j for j in range(4) if j != inner))
    faces = {tuple(sorted(f)) for f in ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))} - {outer_face}
    used = 0
    for u in range(4):
        for v in range(u + 1, 4):
            used |= 1 << sid[pi[u]][pi[v]]
    stacking = []
    for i in range(4, n):
        p = pi[i]
        parent = None
        for f in faces:
            a, b, c = (pi[x] for x in f)
            if P.inside(a, b, c) >> p & 1:
                parent = f
                break
        if parent is None:
            parent = outer_face
        new = [sid[p][pi[x]] for x in parent]
        for s in new:
            if cross[s] & used:
                return None
        for s in new:
            used |= 1 << s
        x, y, z = parent
        children = [tuple(sorted(t)) for t in ((x, y, i), (y, z, i), (x, z, i))]
        if parent == outer_face:
            # the new vertex lies outside the drawing; one child face is the new hull
            hull_face = None
            for t in children:
                (w,) = set(parent) - set(t)
                a, b, c = (pi[u] for u in t)
                if P.inside(a, b, c) >> pi[w] & 1:
                    hull_face = t
            if hull_face is None:
                return None
            faces |= {t for t in children if t != hull_face}
            outer_face = hull_face
        else:
            faces.discard(parent)
            faces |= set(children)
        stacking.append(parent)
    T = Labeled3Tree(n, tuple(stacking))
    if not is_plane(T, P, pi):
        return None
    return T


# -- general embedding search --------------------------------------------------


def _hull_maps(face: tuple[int, int, int], hull: Sequence[int]):
    x, y, z = face
    for f in ((x, y, z), (y, z, x), (z, x, y), (x, z, y), (z, y, x), (y, x, z)):
        yield dict(zip(f, hull))


def _cycle_counts(G: Triangulation, face: tuple[int, int, int]) -> dict[tuple[int, int, int], int]:
    """For every 3-cycle C != face: number of vertices on the side of C away
    from ``face``; a plane drawing with ``face`` outside puts exactly that many
    points inside the triangle of C."""
    adj = G.adjacency
    out = {}
    fset = set(face)
    for C in G.triangles:
        if set(C) == fset:
            continue
        start = next(v for v in face if v not in C)
        seen = {start, *C}
        stack = [start]
        while stack:
            x = stack.pop()
            for w in adj[x]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        out[C] = G.n - (len(seen) - 3) - 3
    return out


def _placement_order(G: Triangulation, face) -> list[int]:
    placed = set(face)
    order = []
    adj = G.adjacency
    while len(placed) < G.n:
        best = max(
            (v for v in range(G.n) if v not in placed),
            key=lambda v: (len(adj[v] & placed), -v),
        )
        order.append(best)
        placed.add(best)
    return order


def _search_plan(G: Triangulation, face):
    cache = G.__dict__.setdefault("_search_plans", {})
    key = tuple(sorted(face))
    if key not in cache:
        order = _placement_order(G, key)
        counts = _cycle_counts(G, key)
        rank = {v: i for i, v in enumerate(order)}
        for v in key:
            rank[v] = -1
        # checks fire when the last vertex of a cycle is placed
        checks: dict[int, list] = {v: [] for v in order}
        for C, k in counts.items():
            last = max(C, key=lambda v: rank[v])
            checks[last].append((C, k))
        earlier = {v: [w for w in G.adjacency[v] if rank[w] < rank[v]] for v in order}
        cache[key] = (order, checks, earlier)
    return cache[key]


def _backtrack(G: Triangulation, P: PointSet, face, hull_map) -> Optional[Assignment]:
    order, checks, earlier = _search_plan(G, face)
    sid = P.segment_ids
    cross = P.crossing_masks
    inside = P.inside
    phi = [-1] * G.n
    used = 0
    for u, v in G.edges:
        if u in hull_map and v in hull_map:
            used |= 1 << sid[hull_map[u]][hull_map[v]]
    for v, p in hull_map.items():
        phi[v] = p
    free = [p for p in range(P.n) if p not in hull_map.values()]

    def rec(i: int, used: int, free_mask: int) -> bool:
        if i == len(order):
            return True
        v = order[i]
        m = free_mask
        while m:
            low = m & -m
            p = low.bit_length() - 1
            m ^= low
            new = 0
            ok = True
            for w in earlier[v]:
                s = sid[p][phi[w]]
                if cross[s] & used:
                    ok = False
                    break
                new |= 1 << s
            if not ok:
                continue
            phi[v] = p
            for C, k in checks[v]:
                a, b, c = (phi[x] for x in C)
                if inside(a, b, c).bit_count() != k:
                    ok = False
                    break
            if ok and rec(i + 1, used | new, free_mask ^ low):
                return True
            phi[v] = -1
        return False

    free_mask = 0
    for p in free:
        free_mask |= 1 << p
    if rec(0, used, free_mask):
        return phi
    return None


def embeds_on(G: Triangulation, P: PointSet) -> Optional[Assignment]:
    """Some plane straight-line embedding of the maximal planar graph G on P.

    The outer face of a drawing is the convex hull, so P must have a
    triangular hull; every face of G is tried in all six ways onto it.
    """
    if G.n != P.n:
        raise DomainError("graph and point set sizes differ")
    hull = P.hull
    if G.n == 3:
        return [0, 1, 2] if len(hull) == 3 else None
    if len(hull) != 3:
        return None
    three_tree = G.is_3tree
    for face in G.faces:
        for hull_map in _hull_maps(face, hull):
            if three_tree:
                phi = embed_3tree_fixed_outer(G, P, hull_map)
            else:
                phi = _backtrack(G, P, face, hull_map)
            if phi is not None and is_plane(G, P, phi):
                return phi
    return None


def brute_force_embed(G, P: PointSet) -> Optional[Assignment]:
    """Factorial oracle: first permutation that draws G without crossings."""
    n = P.n
    for perm in permutations(range(n)):
        if is_plane(G, P, perm):
            return list(perm)
    return None


def count_embeddable_T(P: PointSet) -> int:
    """Number of members of T_n with a plane straight-line embedding on P."""
    if P.n < 4:
        raise DomainError("T_n is defined for n >= 4")
    return sum(1 for T in gen_T_family(P.n) if embeds_on(T.to_triangulation(), P) is not None)


def plane_permutation_census(P: PointSet) -> tuple[int, int]:
    """(number of permutations drawing some member of T_n plane, n!)."""
    count = 0
    total = 0
    for perm in permutations(range(P.n)):
        total += 1
        if permutation_to_3tree(P, perm) is not None:
            count += 1
    return count, total


def embeddable_T_bound(n: int) -> float:
    """(1/8)(5n+12)(n-1)!, which equals (1 - 3/8 (n-4)/n) n!."""
    from math import factorial

    return (5 * n + 12) * factorial(n - 1) / 8


# -- shape-level fast path -------------------------------------------------------


def shape_embeds(s, P: PointSet, q0: int, q1: int, q2: int, memo: dict | None = None) -> bool:
    """Whether the rooted shape s has a plane embedding on the points inside
    and on triangle (q0, q1, q2) with a, b, c on q0, q1, q2.

    Memoized on (sub-shape, triangle); ``memo`` may be shared across shapes
    for one point set.
    """
    if memo is None:
        memo = {}
    key = (s, q0, q1, q2)
    r = memo.get(key)
    if r is not None:
        return r
    avail = P.inside(q0, q1, q2)
    if s is None:
        r = avail == 0
    elif avail.bit_count() != shape_size(s):
        r = False
    else:
        n0, n1, n2 = shape_size(s[0]), shape_size(s[1]), shape_size(s[2])
        r = False
        inside = P.inside
        while avail:
            low = avail & -avail
            p = low.bit_length() - 1
            avail ^= low
            if (
                inside(q0, q1, p).bit_count() == n0
                and inside(q1, q2, p).bit_count() == n1
                and inside(q2, q0, p).bit_count() == n2
            ):
                r = (
                    shape_embeds(s[0], P, q0, q1, p, memo)
                    and shape_embeds(s[1], P, q1, q2, p, memo)
                    and shape_embeds(s[2], P, q2, q0, p, memo)
                )
                break
    memo[key] = r
    return r


def hull_rotations(P: PointSet) -> list[tuple[int, int, int]]:
    """The three counterclockwise labelings of a triangular hull."""
    h = P.hull
    if len(h) != 3:
        raise DomainError("the convex hull of the point set is not a triangle")
    return [(h[r], h[(r + 1) % 3], h[(r + 2) % 3]) for r in range(3)]

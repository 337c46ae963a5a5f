"""Maximal planar graphs as rotation systems.

Vertices are ``0..n-1``. ``rotation[v]`` lists the neighbours of ``v`` in
counterclockwise order. The face to the left of the dart ``u -> v`` continues
with ``v -> w`` where ``w`` precedes ``u`` in the rotation at ``v``.
"""

from __future__ import annotations

from collections import deque
from functools import cached_property
from itertools import combinations
from typing import Iterable, Sequence

from .errors import InvalidEmbeddingError, PlanarCodeError, UnflippableEdgeError

PLANAR_CODE_HEADER = b">>planar_code<<"


class Triangulation:
    """A triangulated sphere: maximal planar graph with a fixed rotation system."""

    __slots__ = ("rotation", "_pos", "__dict__")

    def __init__(self, rotation: Sequence[Sequence[int]]):
        self.rotation: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rotation)
        n = len(self.rotation)
        if n < 3:
            raise InvalidEmbeddingError("a triangulation needs at least 3 vertices")
        pos = []
        for v, rot in enumerate(self.rotation):
            d = {w: i for i, w in enumerate(rot)}
            if len(d) != len(rot) or v in d or any(not 0 <= w < n for w in rot):
                raise InvalidEmbeddingError(f"bad neighbour list at vertex {v}: {rot}")
            pos.append(d)
        self._pos = pos
        for v, rot in enumerate(self.rotation):
            for w in rot:
                if v not in pos[w]:
                    raise InvalidEmbeddingError(f"edge {v}-{w} is not symmetric")
        n_edges = sum(len(r) for r in self.rotation) // 2
        if n_edges != 3 * n - 6:
            raise InvalidEmbeddingError(f"{n_edges} edges, expected {3 * n - 6}")
        fs = self._trace_faces()
        if len(fs) != 2 * n - 4:
            raise InvalidEmbeddingError(f"{len(fs)} triangular faces, expected {2 * n - 4}")

    # -- basic structure ---------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.rotation)

    def __len__(self) -> int:
        return self.n

    def __eq__(self, other) -> bool:
        return isinstance(other, Triangulation) and self.rotation == other.rotation

    def __hash__(self) -> int:
        return hash(self.rotation)

    def __repr__(self) -> str:
        return f"Triangulation(n={self.n}, rotation={[list(r) for r in self.rotation]})"

    def degree(self, v: int) -> int:
        return len(self.rotation[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._pos[u]

    @cached_property
    def edges(self) -> list[tuple[int, int]]:
        return sorted((u, v) for u, rot in enumerate(self.rotation) for v in rot if u < v)

    @cached_property
    def adjacency(self) -> list[frozenset[int]]:
        return [frozenset(r) for r in self.rotation]

    def next_in_face(self, u: int, v: int) -> int:
        """Third vertex of the face to the left of the dart u -> v."""
        rv = self.rotation[v]
        return rv[self._pos[v][u] - 1]

    def _trace_faces(self) -> list[tuple[int, int, int]]:
        seen = set()
        out = []
        for u, rot in enumerate(self.rotation):
            for v in rot:
                if (u, v) in seen:
                    continue
                face = [u]
                a, b = u, v
                while True:
                    seen.add((a, b))
                    face.append(b)
                    c = self.rotation[b][self._pos[b][a] - 1]
                    a, b = b, c
                    if a == u:
                        seen.add((a, b)) if b == v else None
                        break
                    if len(face) > 3:
                        break
                face.pop()
                if len(face) != 3 or (a, b) != (u, v):
                    raise InvalidEmbeddingError(f"non-triangular face through dart {u}->{v}")
                i = face.index(min(face))
                out.append(tuple(face[i:] + face[:i]))
        out.sort()
        return out

    @cached_property
    def faces(self) -> list[tuple[int, int, int]]:
        """Oriented faces, each listed once starting at its smallest vertex."""
        return self._trace_faces()

    def mirror(self) -> Triangulation:
        return Triangulation([r[::-1] for r in self.rotation])

    def relabeled(self, perm: Sequence[int]) -> Triangulation:
        """Graph with vertex v renamed perm[v]."""
        rot = [None] * self.n
        for v, r in enumerate(self.rotation):
            rot[perm[v]] = tuple(perm[w] for w in r)
        return Triangulation(rot)

    @cached_property
    def canonical_key(self) -> bytes:
        return canonical_graph_key(self)

    @cached_property
    def is_3tree(self) -> bool:
        from .threetrees import peel_order

        return peel_order(self) is not None

    @cached_property
    def triangles(self) -> list[tuple[int, int, int]]:
        """All 3-cycles as sorted triples."""
        adj = self.adjacency
        out = []
        for u, v in self.edges:
            for w in adj[u] & adj[v]:
                if w > v:
                    out.append((u, v, w))
        out.sort()
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "rotation": [list(r) for r in self.rotation]}

    @classmethod
    def from_json(cls, obj: dict) -> Triangulation:
        return cls(obj["rotation"])


def faces(G: Triangulation) -> list[tuple[int, int, int]]:
    return G.faces


def flip(G: Triangulation, e: tuple[int, int]) -> Triangulation:
    """Replace edge e by the other diagonal of its two incident triangles."""
    u, v = e
    if not G.has_edge(u, v):
        raise UnflippableEdgeError(f"{u}-{v} is not an edge")
    w = G.next_in_face(u, v)
    x = G.next_in_face(v, u)
    if G.has_edge(w, x):
        raise UnflippableEdgeError(f"diagonal {w}-{x} of edge {u}-{v} already present")
    rot = [list(r) for r in G.rotation]
    rot[u].remove(v)
    rot[v].remove(u)
    # at w the face (u, v, w) has u just before v; at x, v just before u
    rot[w].insert(rot[w].index(u) + 1, x)
    rot[x].insert(rot[x].index(v) + 1, w)
    return Triangulation(rot)


# -- canonical form -------------------------------------------------------


def _code(rotation, pos, u: int, v: int, ccw: bool) -> list[int]:
    n = len(rotation)
    number = [0] * n
    first = [0] * n
    number[u] = 1
    first[u] = v
    order = [u]
    nxt = 2
    code = []
    step = 1 if ccw else -1
    for x in order:
        rot = rotation[x]
        d = len(rot)
        i = pos[x][first[x]]
        for _ in range(d):
            w = rot[i]
            if number[w] == 0:
                number[w] = nxt
                nxt += 1
                first[w] = x
                order.append(w)
            code.append(number[w])
            i = (i + step) % d
        code.append(0)
    return code


def canonical_graph_key(G: Triangulation) -> bytes:
    """Smallest BFS code over starting darts and both orientations.

    Only darts maximizing a local degree invariant are tried; the invariant
    is preserved by isomorphisms (including orientation-reversing ones), so
    the key is still a complete invariant. For 3-connected planar graphs the
    embedding is unique up to mirror image, so equal keys means isomorphic.
    """
    rot = G.rotation
    pos = G._pos
    deg = [len(r) for r in rot]
    best_inv = None
    starts = []
    for u, r in enumerate(rot):
        d = len(r)
        for i, v in enumerate(r):
            after, before = deg[r[(i + 1) % d]], deg[r[i - 1]]
            for ccw, inv in ((True, (deg[u], deg[v], after, before)), (False, (deg[u], deg[v], before, after))):
                if best_inv is None or inv > best_inv:
                    best_inv = inv
                    starts = [(u, v, ccw)]
                elif inv == best_inv:
                    starts.append((u, v, ccw))
    best = None
    for u, v, ccw in starts:
        code = _code(rot, pos, u, v, ccw)
        if best is None or code < best:
            best = code
    if G.n < 256 and max(best) < 256:
        return bytes([G.n]) + bytes(best)
    return b"\xff" + b"".join(x.to_bytes(2, "big") for x in [G.n] + best)


def are_isomorphic(G: Triangulation, H: Triangulation) -> bool:
    return G.n == H.n and G.canonical_key == H.canonical_key


# -- generation -------------------------------------------------------------


def stacked_triangulation(n: int) -> Triangulation:
    """A planar 3-tree on n vertices: vertex k is stacked into a face of k-1."""
    from .threetrees import stack

    steps = [(k, (0, 1, k - 1)) for k in range(3, n)]
    return stack((0, 1, 2), steps)


def gen_triangulations(n: int) -> list[Triangulation]:
    """One triangulation per isomorphism class, sorted by canonical key.

    Breadth-first search of the flip graph, which is connected for sphere
    triangulations on a fixed number of vertices.
    """
    if not 4 <= n <= 12:
        raise ValueError("gen_triangulations supports 4 <= n <= 12")
    seed = stacked_triangulation(n)
    seen = {seed.canonical_key: seed}
    queue = deque([seed])
    while queue:
        G = queue.popleft()
        for e in G.edges:
            w, x = G.next_in_face(*e), G.next_in_face(e[1], e[0])
            if G.has_edge(w, x):
                continue
            H = flip(G, e)
            k = H.canonical_key
            if k not in seen:
                seen[k] = H
                queue.append(H)
    return [seen[k] for k in sorted(seen)]


# -- planar_code ------------------------------------------------------------


def write_planar_code(graphs: Iterable[Triangulation], header: bool = True) -> bytes:
    """Serialize in plantri's planar_code: per graph the vertex count, then for
    each vertex its neighbours (1-based, clockwise) followed by 0."""
    out = bytearray(PLANAR_CODE_HEADER if header else b"")
    for G in graphs:
        if G.n > 255:
            raise ValueError("only graphs with fewer than 256 vertices are supported")
        out.append(G.n)
        for r in G.rotation:
            out.extend(w + 1 for w in reversed(r))
            out.append(0)
    return bytes(out)


def parse_planar_code(data: bytes) -> list[Triangulation]:
    if not data.startswith(PLANAR_CODE_HEADER):
        raise PlanarCodeError("missing >>planar_code<< header", 0)
    i = len(PLANAR_CODE_HEADER)
    out = []
    while i < len(data):
        start = i
        n = data[i]
        i += 1
        if n == 0:
            raise PlanarCodeError("16-bit planar_code records are not supported", start)
        rot = []
        for v in range(n):
            nbrs = []
            while True:
                if i >= len(data):
                    raise PlanarCodeError(f"truncated neighbour list of vertex {v + 1}", i)
                b = data[i]
                i += 1
                if b == 0:
                    break
                if b > n:
                    raise PlanarCodeError(f"neighbour {b} out of range", i - 1)
                nbrs.append(b - 1)
            rot.append(nbrs[::-1])
        try:
            out.append(Triangulation(rot))
        except InvalidEmbeddingError as exc:
            raise PlanarCodeError(f"record is not a triangulation: {exc}", start) from exc
    return out


def from_edges(n: int, edges: Iterable[tuple[int, int]]) -> Triangulation:
    """Triangulation for an abstract maximal planar graph (via networkx)."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(n))
    g.add_edges_from(edges)
    ok, emb = nx.check_planarity(g)
    if not ok:
        raise InvalidEmbeddingError("graph is not planar")
    # networkx orders neighbours clockwise
    return Triangulation([list(emb.neighbors_cw_order(v))[::-1] for v in range(n)])


def labeled_maximal_planar_classes(n: int) -> int:
    """Independent oracle: isomorphism classes of maximal planar graphs found by
    brute force over all edge sets of size 3n-6 on n labeled vertices."""
    import networkx as nx

    pairs = list(combinations(range(n), 2))
    m = 3 * n - 6
    reps: list[nx.Graph] = []
    for chosen in combinations(pairs, m):
        deg = [0] * n
        for a, b in chosen:
            deg[a] += 1
            deg[b] += 1
        if min(deg) < 3:
            continue
        g = nx.Graph(chosen)
        if not nx.check_planarity(g)[0]:
            continue
        if not any(nx.is_isomorphic(g, h) for h in reps):
            reps.append(g)
    return len(reps)

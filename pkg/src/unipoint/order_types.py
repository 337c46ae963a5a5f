"""Order types: parsing, canonical keys, enumeration and the bundled database.

An order type is identified here up to relabeling *and* reflection. The key of
a point set is the lexicographically smallest serialized lambda matrix over
all labelings that start at a convex-hull vertex and continue in angular
order around it (counterclockwise, or clockwise for the mirror image).
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cmp_to_key
from importlib import resources
from itertools import combinations
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from .errors import GeneralPositionError, MalformedFileError
from .geometry import PointSet

log = logging.getLogger(__name__)

# literature counts (reflection identified), used to flag incomplete universes
KNOWN_ORDER_TYPE_COUNTS = {3: 1, 4: 2, 5: 3, 6: 16, 7: 135, 8: 3315, 9: 158817, 10: 14309547}


@dataclass(frozen=True)
class OrderTypeClass:
    key: bytes
    representative: PointSet = field(compare=False, hash=False)
    n: int = field(compare=False, hash=False)

    @classmethod
    def of(cls, P: PointSet) -> OrderTypeClass:
        return cls(canonical_key(P), P, P.n)


# -- file format ---------------------------------------------------------


def parse_otypes_file(
    data: bytes, n: int, coord_width: int = 8, byteorder: str = "little"
) -> list[PointSet]:
    """Split a fixed-record order-type file into point sets.

    Each record holds ``n`` points, each point two unsigned integers of
    ``coord_width`` bits (x then y).
    """
    if coord_width not in (8, 16):
        raise ValueError("coord_width must be 8 or 16")
    if byteorder not in ("little", "big"):
        raise ValueError("byteorder must be 'little' or 'big'")
    step = coord_width // 8
    record = n * 2 * step
    if n <= 0 or len(data) % record:
        raise MalformedFileError(
            f"length {len(data)} is not a multiple of the record size {record} "
            f"(n={n}, {coord_width}-bit); wrong n or coordinate width?"
        )
    if coord_width == 8:
        values = np.frombuffer(data, dtype=np.uint8)
    else:
        values = np.frombuffer(data, dtype="<u2" if byteorder == "little" else ">u2")
    values = values.reshape(-1, n, 2).astype(np.int64)
    out = []
    for idx, rec in enumerate(values):
        try:
            out.append(PointSet(rec.tolist()))
        except GeneralPositionError as exc:
            raise GeneralPositionError(
                f"record {idx}: {exc}; a degenerate record usually means the "
                f"byte order or coordinate width is wrong"
            ) from exc
    return out


def write_otypes_file(sets: Iterable[PointSet], coord_width: int = 8, byteorder: str = "little") -> bytes:
    limit = 1 << coord_width
    dtype = np.uint8 if coord_width == 8 else ("<u2" if byteorder == "little" else ">u2")
    rows = []
    for P in sets:
        arr = np.asarray(P.to_json(), dtype=np.int64)
        if arr.min() < 0 or arr.max() >= limit:
            raise ValueError(f"coordinates of {P!r} do not fit in {coord_width} bits")
        rows.append(arr)
    if not rows:
        return b""
    return np.stack(rows).astype(dtype).tobytes()


def read_otypes_path(path: str | Path, n: int | None = None, byteorder: str = "little") -> list[PointSet]:
    """Read ``otypes<nn>.b08`` / ``.b16``; n and width are taken from the name
    when not given."""
    path = Path(path)
    width = 16 if path.suffix == ".b16" else 8
    if n is None:
        digits = "".join(ch for ch in path.stem if ch.isdigit())
        if not digits:
            raise ValueError(f"cannot infer n from file name {path.name}; pass n explicitly")
        n = int(digits)
    return parse_otypes_file(path.read_bytes(), n, width, byteorder)


# -- lambda matrices and keys -------------------------------------------


def _lambda_rows(orientation: list[list[list[int]]], n: int) -> list[list[int]]:
    lam = [[0] * n for _ in range(n)]
    for i in range(n):
        oi = orientation[i]
        for j in range(n):
            if i != j:
                lam[i][j] = oi[j].count(1)
    return lam


def lambda_matrix(P: PointSet) -> np.ndarray:
    """lam[i, j] = number of points strictly left of the directed line i -> j."""
    return np.array(_lambda_rows(P.orientation, P.n), dtype=np.int64)


def _hull_from_orientation(o, n: int) -> list[int]:
    hull = []
    for i in range(n):
        # i is extreme iff some other point j has everything on one side of ij
        for j in range(n):
            if j == i:
                continue
            row = o[i][j]
            if all(row[k] >= 0 for k in range(n)) or all(row[k] <= 0 for k in range(n)):
                hull.append(i)
                break
    return hull


def key_from_orientation(o: list[list[list[int]]], n: int, mirrors: bool = True) -> bytes:
    """Canonical key from a full orientation table (see module docstring).

    With ``mirrors=False`` reflections are not quotiented.
    """
    lam = _lambda_rows(o, n)
    best = None
    for h in _hull_from_orientation(o, n):
        oh = o[h]
        others = [k for k in range(n) if k != h]
        # all others lie in an open half-plane around a hull vertex
        others.sort(key=cmp_to_key(lambda q, r: -oh[q][r]))
        for mirror in (False, True) if mirrors else (False,):
            perm = [h] + (others[::-1] if mirror else others)
            if mirror:
                code = bytes(lam[pj][pi] for pi in perm for pj in perm)
            else:
                code = bytes(lam[pi][pj] for pi in perm for pj in perm)
            if best is None or code < best:
                best = code
    return bytes([n]) + best


def canonical_key(P: PointSet) -> bytes:
    if P.n < 3:
        return bytes([P.n])
    return key_from_orientation(P.orientation, P.n)


def oriented_key(P: PointSet) -> bytes:
    """Like :func:`canonical_key` but distinguishing a set from its mirror image."""
    if P.n < 3:
        return bytes([P.n])
    return key_from_orientation(P.orientation, P.n, mirrors=False)


def has_triangular_hull(P: PointSet) -> bool:
    return len(P.hull) == 3


# -- enumeration ---------------------------------------------------------


def enumerate_grid_order_types(n: int, g: int) -> set[OrderTypeClass]:
    """All order types realized by n-subsets of the g x g integer grid."""
    if n < 3:
        raise ValueError("n must be at least 3")
    grid = [(x, y) for x in range(g) for y in range(g)]
    found: dict[bytes, OrderTypeClass] = {}
    for subset in combinations(grid, n):
        try:
            P = PointSet(subset)
        except GeneralPositionError:
            continue
        k = canonical_key(P)
        if k not in found:
            found[k] = OrderTypeClass(k, P, n)
    return set(found.values())


def _direction_sort_key(d):
    # half-plane index, then angle via cross products handled by cmp
    x, y = d
    return 0 if (y > 0 or (y == 0 and x > 0)) else 1


def _cmp_dirs(d1, d2) -> int:
    h1, h2 = _direction_sort_key(d1), _direction_sort_key(d2)
    if h1 != h2:
        return h1 - h2
    c = d1[0] * d2[1] - d1[1] * d2[0]
    return -1 if c > 0 else (1 if c < 0 else 0)


def _cell_samples(P: PointSet) -> dict[tuple[int, ...], list[tuple[Fraction, Fraction]]]:
    """One sample point per sector around every vertex of the arrangement of
    lines through pairs of P, grouped by the cell (sign vector) it lies in.

    Every cell of the arrangement is incident to a vertex, so every cell is
    represented.
    """
    pts = P.points
    lines = []
    for i, j in combinations(range(P.n), 2):
        (xi, yi), (xj, yj) = pts[i], pts[j]
        a, b = -(yj - yi), xj - xi
        lines.append((a, b, -(a * xi + b * yi)))
    vertices: dict[tuple[Fraction, Fraction], set[int]] = {}
    for s, t in combinations(range(len(lines)), 2):
        a1, b1, c1 = lines[s]
        a2, b2, c2 = lines[t]
        det = a1 * b2 - a2 * b1
        if det == 0:
            continue
        v = (Fraction(b1 * c2 - b2 * c1, det), Fraction(a2 * c1 - a1 * c2, det))
        vertices.setdefault(v, set()).update((s, t))
    cells: dict[tuple[int, ...], list] = {}
    for (vx, vy), through in vertices.items():
        dirs = []
        for s in through:
            a, b, _ = lines[s]
            dirs.append((b, -a))
            dirs.append((-b, a))
        dirs.sort(key=cmp_to_key(_cmp_dirs))
        values = [a * vx + b * vy + c for a, b, c in lines]
        for idx in range(len(dirs)):
            d1, d2 = dirs[idx], dirs[(idx + 1) % len(dirs)]
            wx, wy = d1[0] + d2[0], d1[1] + d2[1]
            eps = Fraction(1)
            for s, (a, b, _) in enumerate(lines):
                if s in through:
                    continue
                lw = a * wx + b * wy
                if values[s] * lw < 0:
                    bound = -values[s] / lw
                    if bound < 2 * eps:
                        eps = bound / 2
            qx, qy = vx + eps * wx, vy + eps * wy
            sig = tuple(1 if a * qx + b * qy + c > 0 else -1 for a, b, c in lines)
            cells.setdefault(sig, []).append((qx, qy))
    return cells


def _extended_orientation(P: PointSet, sig: tuple[int, ...]) -> list[list[list[int]]]:
    n = P.n
    o = [[row[:] + [0] for row in plane] + [[0] * (n + 1)] for plane in P.orientation]
    o.append([[0] * (n + 1) for _ in range(n + 1)])
    q = n
    for s, (i, j) in enumerate(combinations(range(n), 2)):
        v = sig[s]
        o[i][j][q] = o[j][q][i] = o[q][i][j] = v
        o[i][q][j] = o[q][j][i] = o[j][i][q] = -v
    return o


def _span(P: PointSet) -> int:
    xs = [p.x for p in P.points]
    ys = [p.y for p in P.points]
    return max(max(xs) - min(xs), max(ys) - min(ys))


def _normalized(P: PointSet) -> PointSet:
    mx = min(p.x for p in P.points)
    my = min(p.y for p in P.points)
    return PointSet((p.x - mx, p.y - my) for p in P.points)


def _compact(P: PointSet, key: bytes, tries: int = 8) -> PointSet:
    """Re-realize P on the smallest power-of-two grid that rounding finds."""
    arr = np.asarray(_normalized(P).to_json(), dtype=np.float64)
    span = max(_span(P), 1)
    rng = np.random.default_rng(len(key) * 7919 + key[-1])
    for bits in range(3, 17):
        g = (1 << bits) - 1
        if g >= span:
            break
        for t in range(tries):
            jitter = 0.0 if t == 0 else rng.uniform(-0.5, 0.5, arr.shape)
            cand = np.clip(np.rint(arr * g / span + jitter), 0, g).astype(np.int64)
            try:
                Q = PointSet(cand.tolist())
            except GeneralPositionError:
                continue
            if canonical_key(Q) == key:
                return Q
    return _normalized(P)


def _realize(P: PointSet, samples, key: bytes) -> PointSet | None:
    """Integer realization of P plus a point in the given cell."""
    cx = sum(s[0] for s in samples) / len(samples)
    cy = sum(s[1] for s in samples) / len(samples)
    base = P.to_json()
    scale = 1
    while True:
        pts = [(x * scale, y * scale) for x, y in base]
        pts.append((round(cx * scale), round(cy * scale)))
        arr = np.asarray(pts, dtype=np.int64)
        arr = arr - arr.min(axis=0)
        if arr.max() >= 1 << 20:
            return None
        try:
            Q = PointSet(arr.tolist())
        except GeneralPositionError:
            Q = None
        if Q is not None and canonical_key(Q) == key:
            return _compact(Q, key)
        scale *= 2


def extend_order_types(
    bases: Iterable[PointSet], found: dict[bytes, PointSet] | None = None, max_span: int = 255
) -> dict[bytes, PointSet]:
    """Add one point, in every cell of the line arrangement, to each base set.

    Returns (and updates) a map from canonical key to a realization; when a
    known class has a realization wider than ``max_span`` a smaller one is
    substituted if found.
    """
    found = {} if found is None else found
    for P in bases:
        for sig, samples in _cell_samples(P).items():
            key = key_from_orientation(_extended_orientation(P, sig), P.n + 1)
            old = found.get(key)
            if old is not None and _span(old) <= max_span:
                continue
            Q = _realize(P, samples, key)
            if Q is None:
                continue
            if old is None or _span(Q) < _span(old):
                found[key] = Q
    return found


def _deletions(sets: Iterable[PointSet], per_class: int, used: set) -> list[PointSet]:
    picked: dict[bytes, list[PointSet]] = {}
    for Q in sets:
        for i in range(Q.n):
            R = _normalized(PointSet(p for k, p in enumerate(Q.points) if k != i))
            if R.points in used:
                continue
            bucket = picked.setdefault(canonical_key(R), [])
            if len(bucket) < per_class:
                bucket.append(R)
                used.add(R.points)
    return [R for k in sorted(picked) for R in picked[k]]


def _random_realizations(P: PointSet, count: int, rng: random.Random, steps: int = 200) -> list[PointSet]:
    """Other realizations of P's order type, by a random walk of single-point
    moves that never change the key."""
    key = canonical_key(P)
    scale, jit = 8, 48
    out = []
    for _ in range(count):
        cur = [(x * scale, y * scale) for x, y in P.to_json()]
        for _ in range(steps):
            i = rng.randrange(len(cur))
            c = list(cur)
            c[i] = (c[i][0] + rng.randint(-jit, jit), c[i][1] + rng.randint(-jit, jit))
            try:
                Q = PointSet(c)
            except GeneralPositionError:
                continue
            if canonical_key(Q) == key:
                cur = c
        out.append(_normalized(PointSet(cur)))
    return out


def generate_order_types(
    n_max: int, walks: int = 6, per_class: int = 4, rounds: int = 3, seed: int = 1
) -> dict[int, list[PointSet]]:
    """Order types for 3 <= n <= n_max by repeated one-point extension.

    A single realization per class can miss extensions whose cell only
    exists in other realizations, so each level is also extended from
    ``walks`` random re-realizations of every smaller class and from sets
    obtained by deleting a point from the new level, until nothing new turns
    up.
    """
    rng = random.Random(seed)
    levels = {3: [PointSet([(0, 0), (1, 0), (0, 1)])]}
    for n in range(4, n_max + 1):
        prev = levels[n - 1]
        used = {P.points for P in prev}
        found = extend_order_types(prev)
        for P in prev:
            extend_order_types(_random_realizations(P, walks, rng), found)
        log.info("n=%d: %d order types after random realizations", n, len(found))
        for _ in range(rounds):
            before = len(found)
            extra = _deletions(found.values(), per_class, used)
            extend_order_types(extra, found)
            log.info("n=%d: %d order types after %d extra bases", n, len(found), len(extra))
            if len(found) == before:
                break
        levels[n] = [found[k] for k in sorted(found)]
        expected = KNOWN_ORDER_TYPE_COUNTS.get(n)
        if expected is not None and len(levels[n]) != expected:
            log.warning("n=%d: found %d order types, literature count is %d", n, len(levels[n]), expected)
    return levels


def write_database(levels: dict[int, list[PointSet]], directory: str | Path) -> list[Path]:
    """Write one ``otypes<nn>.b08`` (or ``.b16``) file per level."""
    directory = Path(directory)
    written = []
    for n, sets in sorted(levels.items()):
        width = 8 if all(_span(P) < 256 for P in sets) else 16
        path = directory / f"otypes{n:02d}.b{width:02d}"
        path.write_bytes(write_otypes_file(sets, width))
        written.append(path)
    return written


# -- bundled database ------------------------------------------------------


def bundled_path(n: int) -> Path | None:
    base = resources.files("unipoint") / "data"
    for ext in ("b08", "b16"):
        p = Path(str(base / f"otypes{n:02d}.{ext}"))
        if p.exists():
            return p
    return None


def trivial_order_type(n: int) -> list[PointSet]:
    return [PointSet([(0, 0), (1, 0), (0, 1)][:n])]


def load_order_types(n: int, path: str | Path | None = None, byteorder: str = "little") -> list[PointSet]:
    """Point sets, one per order type, from ``path`` or the bundled database."""
    if n <= 2 and path is None:
        return trivial_order_type(n)
    if path is None:
        path = bundled_path(n)
        if path is None:
            raise FileNotFoundError(f"no bundled order-type database for n={n}")
    return read_otypes_path(path, n, byteorder)


def order_type_classes(sets: Sequence[PointSet]) -> list[OrderTypeClass]:
    return [OrderTypeClass.of(P) for P in sets]

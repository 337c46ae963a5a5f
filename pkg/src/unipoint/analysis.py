"""Universality surveys, closed-form bounds and the five-point obstruction."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import factorial
from typing import Callable, Iterable, Optional, Sequence

from .embedding import embeds_on, hull_rotations, shape_embeds
from .geometry import PointSet
from .order_types import (
    KNOWN_ORDER_TYPE_COUNTS,
    canonical_key,
    load_order_types,
    oriented_key,
)
from .threetrees import RootedTriangulation, gen_T_family
from .triangulations import Triangulation, gen_triangulations

log = logging.getLogger(__name__)

# published counts of universal order types of n points
PUBLISHED_UNIVERSAL_COUNTS = {1: 1, 2: 1, 3: 1, 4: 1, 5: 1, 6: 5, 7: 45, 8: 364, 9: 5955, 10: 2072}


def check_universal(P: PointSet, graphs: Sequence[Triangulation]) -> tuple[bool, Optional[Triangulation]]:
    """(True, None) if every graph embeds on P, else (False, first failing graph)."""
    for G in graphs:
        if embeds_on(G, P) is None:
            return False, G
    return True, None


@dataclass
class ClassRecord:
    key: str
    universal: bool
    points: list
    witness: Optional[int] = None  # index into the survey's graph list
    chiral: bool = False

    def to_json(self) -> dict:
        return {
            "key": self.key,
            "universal": self.universal,
            "witness": self.witness,
            "chiral": self.chiral,
            "points": self.points,
        }

    @classmethod
    def from_json(cls, obj: dict) -> ClassRecord:
        return cls(obj["key"], obj["universal"], obj["points"], obj.get("witness"), obj.get("chiral", False))


@dataclass
class SurveyReport:
    n: int
    total: int
    records: list[ClassRecord] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def universal_keys(self) -> list[str]:
        return [r.key for r in self.records if r.universal]

    @property
    def universal_count(self) -> int:
        return len(self.universal_keys)

    @property
    def universal_count_unreflected(self) -> int:
        """Universal classes when mirror images are not identified."""
        return sum(2 if r.chiral else 1 for r in self.records if r.universal)

    def witnesses(self) -> dict[str, int]:
        return {r.key: r.witness for r in self.records if not r.universal}


def survey_universal(
    n: int,
    source: Optional[Sequence[PointSet]] = None,
    graphs: Optional[Sequence[Triangulation]] = None,
    done: Optional[dict[str, ClassRecord]] = None,
    on_record: Optional[Callable[[ClassRecord], None]] = None,
    threads: int = 1,
) -> SurveyReport:
    """Classify every order type of n points as universal or not.

    ``done`` maps hex keys to records from an earlier, interrupted run; those
    classes are not recomputed. ``on_record`` is called for every newly
    computed record (for streaming to disk). With ``threads > 1`` classes are
    checked in a process pool; records are still reported in source order.
    """
    if n <= 3:
        P = PointSet([(0, 0), (1, 0), (0, 1)][:n])
        rec = ClassRecord(canonical_key(P).hex(), True, P.to_json())
        if on_record and not (done and rec.key in done):
            on_record(rec)
        return SurveyReport(n, 1, [rec])
    if source is None:
        source = load_order_types(n)
    if graphs is None:
        graphs = gen_triangulations(n)
    done = done or {}
    report = SurveyReport(n, len(source))
    expected = KNOWN_ORDER_TYPE_COUNTS.get(n)
    if expected is not None and expected != len(source):
        report.warnings.append(f"source has {len(source)} order types, expected {expected}: incomplete universe")
    seen = set()
    todo = []
    for P in source:
        key = canonical_key(P).hex()
        if key in seen:
            report.warnings.append(f"duplicate order type {key}")
            continue
        seen.add(key)
        if key in done:
            report.records.append(done[key])
        else:
            todo.append((key, P))
    points = [P for _, P in todo]
    if threads > 1 and len(todo) > 1:
        with ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(graphs,)) as pool:
            verdicts = pool.map(_classify, points, chunksize=max(1, len(points) // (8 * threads)))
            for (key, P), (ok, witness) in zip(todo, verdicts):
                _record(report, key, P, ok, witness, on_record)
    else:
        for key, P in todo:
            ok, bad = check_universal(P, graphs)
            _record(report, key, P, ok, None if ok else graphs.index(bad), on_record)
    report.records.sort(key=lambda r: r.key)
    report.total = len(report.records)
    for w in report.warnings:
        log.warning(w)
    return report


_worker_graphs: Sequence[Triangulation] = ()


def _init_worker(graphs: Sequence[Triangulation]) -> None:
    global _worker_graphs
    _worker_graphs = graphs


def _classify(P: PointSet) -> tuple[bool, Optional[int]]:
    ok, bad = check_universal(P, _worker_graphs)
    return ok, None if ok else _worker_graphs.index(bad)


def _record(report: SurveyReport, key: str, P: PointSet, ok: bool, witness, on_record) -> None:
    rec = ClassRecord(key, ok, P.to_json(), witness, chiral=oriented_key(P) != oriented_key(P.mirrored()))
    report.records.append(rec)
    if on_record:
        on_record(rec)


# -- the counting argument ----------------------------------------------------------


def main_theorem_inequality(n: int) -> tuple[int, int, bool]:
    """(2^(n-1), (5n+12)(n-1)(n-2), whether the first is at most the second).

    A False third entry certifies that no n-point set is n-universal.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    f = 2 ** (n - 1)
    g = (5 * n + 12) * (n - 1) * (n - 2)
    return f, g, f <= g


def embeddable_T_bound_exact(n: int) -> tuple[int, int]:
    """(5n+12)(n-1)! and 8: the bound as a fraction numerator/denominator."""
    return (5 * n + 12) * factorial(n - 1), 8


def convex_fraction_holds(P: PointSet) -> bool:
    """Check count_convex > (3/8)((n-4)/n) C(n,4) in exact arithmetic."""
    from math import comb

    from .geometry import count_convex_quadruples

    n = P.n
    return 8 * n * count_convex_quadruples(P) > 3 * (n - 4) * comb(n, 4)


# -- five-point obstruction -------------------------------------------------------


FIVE_POINT_SHAPES = (
    ((None, None, None), None, None),
    (None, (None, None, None), None),
    (None, None, (None, None, None)),
)


def derive_lemma6_graphs() -> list[RootedTriangulation]:
    """Vertex 3 in the outer face (a, b, c) = (0, 1, 2), vertex 4 in one of the
    inner faces (a, b, 3), (b, c, 3), (c, a, 3)."""
    return [RootedTriangulation.from_shape(s) for s in FIVE_POINT_SHAPES]


def fixed_outer_masks(shapes: Sequence, universe: Iterable[PointSet], mirrors: bool = True) -> list[tuple[int, int, int]]:
    """For every triangular-hull set (and its mirror image) and every
    counterclockwise hull labeling: (set index, rotation, bitmask of shapes
    that embed with a, b, c on the labeled hull points).

    Rotation indices 3..5 refer to the mirror image.
    """
    out = []
    for idx, P in enumerate(universe):
        if len(P.hull) != 3:
            continue
        variants = [P, P.mirrored()] if mirrors else [P]
        for vi, Q in enumerate(variants):
            memo: dict = {}
            for r, q in enumerate(hull_rotations(Q)):
                m = 0
                for i, s in enumerate(shapes):
                    if shape_embeds(s, Q, *q, memo):
                        m |= 1 << i
                out.append((idx, 3 * vi + r, m))
    return out


def verify_lemma6(universe: Optional[Sequence[PointSet]] = None) -> tuple[bool, dict[str, list[int]]]:
    """True iff no 5-point set with triangular hull takes all three graphs
    with a fixed outer mapping; also returns the embed masks per class
    (one entry per labeling, mirror labelings last)."""
    if universe is None:
        universe = load_order_types(5)
    masks: dict[str, list[int]] = {}
    ok = True
    for idx, rot, m in fixed_outer_masks(FIVE_POINT_SHAPES, universe):
        key = canonical_key(universe[idx]).hex()
        masks.setdefault(key, []).append(m)
        if m == 0b111:
            ok = False
    return ok, masks


def verify_bin_bound(planted_vertices: int = 8, family_size: int = 7) -> tuple[int, int, int]:
    """(bins, graphs per bin, bound) of the simultaneous-embedding count."""
    faces = 2 * planted_vertices - 4
    outer_choices = faces - 1  # the planted graph's own outer face is glued to the bipyramid
    bins = 3 * family_size * outer_choices
    per_bin = 2 ** (6 - 1)  # two choices on each bipyramid face not holding the outer face
    return bins, per_bin, bins * per_bin


# -- unlabeled 3-trees ------------------------------------------------------------------


def count_unlabeled_3trees(n: int, method: str = "auto") -> int:
    """Isomorphism classes of planar 3-trees on n vertices.

    ``family`` canonicalizes every member of T_n (feasible for n <= 9);
    ``stack`` grows classes one vertex at a time by stacking into every face
    of every class representative.
    """
    if n < 4:
        raise ValueError("n must be at least 4")
    if method == "auto":
        method = "family" if n <= 8 else "stack"
    if method == "family":
        return len({T.to_triangulation().canonical_key for T in gen_T_family(n)})
    if method != "stack":
        raise ValueError(f"unknown method {method!r}")
    from .threetrees import stack

    level = {}
    K4 = stack((0, 1, 2), [(3, (0, 1, 2))])
    level[K4.canonical_key] = K4
    for m in range(5, n + 1):
        nxt = {}
        for G in level.values():
            for f in G.faces:
                H = _stack_onto(G, f)
                nxt.setdefault(H.canonical_key, H)
        level = nxt
        log.info("unlabeled 3-trees on %d vertices: %d", m, len(level))
    return len(level)


def _stack_onto(G: Triangulation, face: tuple[int, int, int]) -> Triangulation:
    x, y, z = face
    v = G.n
    rot = [list(r) for r in G.rotation] + [[x, y, z]]
    for p, before in ((y, z), (z, x), (x, y)):
        rot[p].insert(rot[p].index(before) + 1, v)
    return Triangulation(rot)

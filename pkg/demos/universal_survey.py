"""Which small point sets can draw every triangulation on their points?

Runs the exhaustive survey over all order types up to eight points and
draws one universal six-point set with a triangulation on it.
"""

from pathlib import Path

from unipoint.analysis import survey_universal
from unipoint.cli import render_svg
from unipoint.embedding import embeds_on
from unipoint.geometry import PointSet
from unipoint.order_types import load_order_types
from unipoint.triangulations import gen_triangulations

for n in range(3, 9):
    report = survey_universal(n)
    print(
        f"n={n}: {report.universal_count:>3} universal of {report.total:>4} order types"
        f" ({report.universal_count_unreflected} counting mirror images apart)"
    )

# A non-universal set comes with a triangulation it cannot draw.
report = survey_universal(6)
bad = next(r for r in report.records if not r.universal)
print("\nnon-universal", bad.points, "fails on triangulation", bad.witness)

# Every universal set has a triangular hull: the outer face must be a triangle.
good = [PointSet(r.points) for r in report.records if r.universal]
print("hull sizes of universal 6-point sets:", sorted(len(P.hull) for P in good))

G = gen_triangulations(6)[0]
P = good[0]
phi = embeds_on(G, P)
out = Path("drawing_demo.svg")
out.write_text(render_svg(P, [(phi[u], phi[v]) for u, v in G.edges], timestamp=False))
print(f"wrote {out} ({len(load_order_types(6))} order types checked)")

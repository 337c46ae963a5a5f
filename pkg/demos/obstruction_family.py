"""Building many 35-vertex triangulations that no single point set hosts together.

The key ingredient is a family of seven rooted 8-vertex 3-trees of which at
most two ever share a drawing with the same three hull points. Planting them
on the six faces of a bipyramid yields thousands of distinct graphs.
"""

import random

from unipoint.analysis import verify_bin_bound, verify_lemma6
from unipoint.obstruction import cached_family, check_family_structure, reverify_family
from unipoint.threetrees import build_bipyramid_graph, interior_degree_profile

# Warm-up with five points: three ways to stack two vertices, never all at once.
ok, masks = verify_lemma6()
print("five-point obstruction holds:", ok, masks)

fam = cached_family()
check_family_structure(fam)
for i, s in enumerate(fam.members):
    ia, ib, ic, top = interior_degree_profile(s)
    print(f"T{i + 1}: stacked neighbours a={ia} b={ib} c={ic}, max stacked degree {top}")

ok, worst = reverify_family(fam)
print(f"\nover all 8-point sets with triangular hull: at most {worst} members share a drawing")

bins, per_bin, bound = verify_bin_bound()
print(f"a 35-point set can host at most {bins} * {per_bin} = {bound} family graphs")

# Sample the 7^6 plantings; the full count lives in count_family_classes.
rng = random.Random(0)
keys = set()
for _ in range(2000):
    G = build_bipyramid_graph([rng.choice(fam.members) for _ in range(6)])
    keys.add(G.canonical_key)
print(f"2000 random plantings gave {len(keys)} nonisomorphic graphs")

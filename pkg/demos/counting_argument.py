"""Why no n-point set is n-universal once n >= 15.

Walks through the counting argument: the stacking family T_n, how few of
its members a single point set can draw, and the inequality that breaks.
"""

from itertools import permutations
from math import factorial

import numpy as np

from unipoint.analysis import main_theorem_inequality
from unipoint.embedding import embeddable_T_bound, permutation_to_3tree, plane_permutation_census
from unipoint.geometry import count_convex_quadruples, crossing_lower_bound
from unipoint.order_types import load_order_types
from unipoint.threetrees import count_T_family, gen_T_family

# T_n grows like 2^(n-4) (n-3)!
for n in range(4, 10):
    print(f"|T_{n}| = {sum(1 for _ in gen_T_family(n)):>6}  formula {count_T_family(n)}")

# A permutation of the points pins down at most one member of T_n.
P = next(P for P in load_order_types(6) if len(P.hull) == 3)
print("\npoint set", P.to_json())
print("permutation (0, 1, 2, 3, 4, 5) ->", permutation_to_3tree(P, (0, 1, 2, 3, 4, 5)))
pi = next(p for p in permutations(range(6)) if permutation_to_3tree(P, p) is not None)
print("permutation", pi, "->", permutation_to_3tree(P, pi))

# Every convex quadruple among the first four points kills a permutation,
# so the census stays below (1 - 3/8 (n-4)/n) n!.
censuses = np.array([plane_permutation_census(P)[0] for P in load_order_types(7)])
print(f"\nn=7: census max {censuses.max()}, mean {censuses.mean():.0f}, bound {embeddable_T_bound(7):.0f} of {factorial(7)}")
convex = np.array([count_convex_quadruples(P) for P in load_order_types(7)])
print(f"convex quadruples: min {convex.min()} (floor formula gives {crossing_lower_bound(7)})")

# Universal sets need |T_n| <= bound, i.e. 2^(n-1) <= (5n+12)(n-1)(n-2).
for n in (13, 14, 15, 16, 20):
    f, g, possible = main_theorem_inequality(n)
    print(f"n={n:>2}: 2^(n-1)={f:>7}  (5n+12)(n-1)(n-2)={g:>6}  possible={possible}")

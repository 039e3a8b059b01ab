"""The counting estimate against the true number of negative eigenvalues.

For two unit wells the estimate is 5/3.  Over random multi-well families it is
not always an upper bound: the cross term can be large and negative.
"""
import math

import numpy as np

from stargraph import EdgePotential, StarGraph, count_bound, find_eigenvalues

print("two unit wells:", count_bound([EdgePotential.well(-1.0, 0.0, 1.0)] * 2))

rng = np.random.default_rng(12345)
for case in range(10):
    n = int(rng.integers(2, 5))
    pots = []
    for _ in range(n):
        a, b = np.sort(rng.uniform(0.0, 3.0, 2))
        pots.append(EdgePotential.well(-rng.uniform(0.1, 20.0), a, b))
    actual = find_eigenvalues(StarGraph.from_potentials(pots)).count
    bound = count_bound(pots).bound
    mark = "" if actual <= math.floor(bound) else "  <- exceeds the estimate"
    print(f"case {case}: N={n} count={actual} estimate={bound:8.3f}{mark}")

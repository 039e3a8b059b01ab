"""A free star with an attractive delta vertex has exactly one bound state.

Its decay rate is -alpha/N, so the energy is -(alpha/N)**2.
"""
from stargraph import StarGraph, find_eigenvalues

for n in (2, 3, 5):
    for alpha in (-0.5, -2.0, -7.0):
        res = find_eigenvalues(StarGraph.free(n, alpha))
        (ev,) = res.eigenvalues
        print(f"N={n} alpha={alpha:5.1f}  kappa={ev.kappa:.12f}  closed form {-alpha / n:.12f}")

# a repulsive vertex binds nothing
print("alpha=+1:", find_eigenvalues(StarGraph.free(3, 1.0)).count, "bound states")

"""Identical wells on every edge produce a degenerate level.

Any level an edge has with a Dirichlet vertex condition is shared by all N
identical edges; the modes that cancel at the vertex give multiplicity N - 1.
"""
from stargraph import EdgePotential, StarGraph, fd_bound_states, find_eigenvalues

well = EdgePotential.well(-20.0, 0.0, 1.0)
graph = StarGraph.from_potentials([well] * 3)
res = find_eigenvalues(graph)
for ev in res.eigenvalues:
    print(f"E = {ev.energy:.10f}  multiplicity {ev.multiplicity}")

print("finite differences, h = 1e-3:")
for e in fd_bound_states(graph, 1e-3, 25.0):
    print(f"  {e:.10f}")

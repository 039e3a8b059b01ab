"""Birman-Schwinger: -kappa**2 is an eigenvalue of H(lambda V) iff 1/lambda is
an eigenvalue of the sandwiched free resolvent.  The Nystrom threshold is
compared with the coupling found from the secular equation.
"""
from stargraph import EdgePotential, StarGraph, coupling_at, coupling_threshold

wells = [EdgePotential.well(-1.0, 0.0, 1.0)] * 3
graph = StarGraph.from_potentials(wells)
for kappa in (0.01, 0.03, 0.05, 0.2):
    secular = coupling_at(graph, kappa)
    row = "  ".join(f"n={n}: {coupling_threshold(wells, kappa, n) - secular:+.2e}" for n in (16, 32, 64))
    print(f"kappa={kappa:<5} lambda*={secular:.10f}  {row}")

"""Second-order convergence of the finite-difference oracle.

The error constant err/h**2 settles, and halving h divides the error by about 4.
"""
from stargraph import EdgePotential, StarGraph, fd_bound_states, find_eigenvalues

graphs = {
    "free, alpha=-2": StarGraph.free(2, -2.0),
    "single well": StarGraph.from_potentials([EdgePotential.well(-4.0, 0.0, 1.0), EdgePotential()]),
}
for name, g in graphs.items():
    exact = find_eigenvalues(g).energies
    for h in (4e-3, 2e-3, 1e-3):
        fd = fd_bound_states(g, h, 25.0)
        err = max(abs(a - b) for a, b in zip(fd, exact))
        print(f"{name:15} h={h:<6} err={err:.3e}  err/h^2={err / h**2:.4f}")

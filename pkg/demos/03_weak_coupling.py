"""Weak coupling: lambda V binds for every small lambda when int V <= 0.

For three unit wells kappa ~ lambda - (2/3) lambda**2, with an O(lambda**3) residual.
A zero-mean potential still binds, but only at order lambda**2.
"""
from stargraph import EdgePotential, asymptotic_coefficients, existence_condition, weak_scan

wells = [EdgePotential.well(-1.0, 0.0, 1.0)] * 3
print(asymptotic_coefficients(wells))
for row in weak_scan(wells, [0.02, 0.01, 0.005, 0.0025]):
    print(f"lambda={row.lam:<7} kappa={row.kappa_numeric:.3e}  residual/lambda^3={row.residual_over_lambda3:.4f}")

zero_mean = [EdgePotential.well(-1.0, 0.0, 1.0) + EdgePotential.well(1.0, 1.0, 2.0)] * 2
print(existence_condition(zero_mean))
c2 = asymptotic_coefficients(zero_mean).c2
for row in weak_scan(zero_mean, [0.02, 0.01, 0.005]):
    print(f"lambda={row.lam:<6} kappa/lambda^2={row.kappa_numeric / row.lam**2:.5f}  (c2 = {c2:.5f})")

repulsive = [EdgePotential.well(1.0, 0.0, 1.0)] * 3
print(existence_condition(repulsive))

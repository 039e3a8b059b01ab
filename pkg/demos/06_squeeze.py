"""Squeezing eps**-1 W(x/eps) onto the vertex gives a delta coupling of strength int W.

With W = -1 on [0, 1] on three free edges the limit is alpha = -3, E = -1, and
the approach is linear in eps (slope close to 4/3), so eps = 0.025 is still
about 0.03 away.
"""
from stargraph import EdgePotential, squeeze_experiment

zero = [EdgePotential()] * 3
w = [EdgePotential.well(-1.0, 0.0, 1.0)] * 3
report = squeeze_experiment(zero, w, (0.2, 0.1, 0.05, 0.025, 0.0125))
print(f"alpha = {report.alpha}, limit energies {report.limit_energies}, kappa0 = {report.kappa0:.3f}")
for row in report.rows:
    print(
        f"eps={row.epsilon:<7} E={row.energies[0]:.6f}  error={row.eigen_error:.4f}"
        f"  error/eps={row.eigen_error / row.epsilon:.4f}  kernel={row.max_kernel_error:.2e}"
    )
print("linear extrapolation:", report.extrapolated_ground_energy())

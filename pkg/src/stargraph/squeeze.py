"""Squeezed potentials ``W_eps(x) = W(x/eps)/eps`` and the delta-coupling limit.

``H_0(V + W_eps)`` converges to ``H_alpha(V)`` with ``alpha = sum_j int W_j``
as eps -> 0.  Operator-norm convergence cannot be computed directly, so the
experiment checks two surrogates: eigenvalues and the resolvent kernel at a
fixed set of probe points.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .errors import AtEigenvalueError, PoleError
from .graph import StarGraph
from .green import StarResolvent
from .potential import EdgePotential, scale_potential
from .secular import SpectralResult, default_window, find_eigenvalues

Probe = tuple[int, float, int, float]

DEFAULT_EPSILONS = (0.2, 0.1, 0.05, 0.025)
KAPPA0_GUARD = 0.1


@dataclass(frozen=True)
class SqueezeFamily:
    W: tuple[EdgePotential, ...]
    epsilon: float
    scaled: tuple[EdgePotential, ...]
    mean: float


def squeeze_family(W: Sequence[EdgePotential], epsilon: float) -> SqueezeFamily:
    scaled = tuple(scale_potential(w, epsilon) for w in W)
    return SqueezeFamily(tuple(W), float(epsilon), scaled, math.fsum(w.moment(0) for w in W))


def squeezed_graph(V: Sequence[EdgePotential], W: Sequence[EdgePotential], epsilon: float) -> StarGraph:
    """``H_0(V + W_eps)`` on semi-infinite edges."""
    fam = squeeze_family(W, epsilon)
    pots = [v if w.is_zero else v + w for v, w in zip(V, fam.scaled)]
    return StarGraph.from_potentials(pots, 0.0)


def limit_graph(V: Sequence[EdgePotential], W: Sequence[EdgePotential]) -> StarGraph:
    """``H_alpha(V)`` with ``alpha`` the total integral of W."""
    return StarGraph.from_potentials(V, math.fsum(w.moment(0) for w in W))


def default_probes(n: int) -> list[Probe]:
    probes: list[Probe] = [(0, 0.0, 0, 0.0), (0, 0.5, 0, 1.0)]
    if n > 1:
        probes += [(0, 0.5, 1, 1.0), (n - 1, 2.0, 1, 0.3)]
    return probes


def _energies_near(result: SpectralResult, kappa0: float) -> bool:
    e0 = -kappa0 * kappa0
    return any(abs(e.energy - e0) < KAPPA0_GUARD for e in result.eigenvalues)


def choose_kappa0(W: Sequence[EdgePotential], spectra: Sequence[SpectralResult]) -> float:
    """Start at sqrt(1 + |<W>|) and grow until no eigenvalue is within 0.1 of -kappa0**2."""
    kappa0 = math.sqrt(1.0 + abs(math.fsum(w.moment(0) for w in W)))
    while any(_energies_near(r, kappa0) for r in spectra):
        kappa0 *= 1.25
    return kappa0


def kernel_probe_error(
    V: Sequence[EdgePotential],
    W: Sequence[EdgePotential],
    epsilon: float,
    kappa0: float,
    probes: Sequence[Probe],
) -> list[float]:
    """``|G_eps - G_limit|`` at each probe ``(j, x, ell, y)``."""
    approx = StarResolvent(squeezed_graph(V, W, epsilon), kappa0)
    limit = StarResolvent(limit_graph(V, W), kappa0)
    return [abs(approx.kernel(j, x, l, y) - limit.kernel(j, x, l, y)) for j, x, l, y in probes]


@dataclass
class SqueezeRow:
    epsilon: float
    energies: list[float]
    eigen_errors: list[float]
    kernel_errors: list[float]

    @property
    def eigen_error(self) -> float:
        return max(self.eigen_errors) if self.eigen_errors else math.nan

    @property
    def max_kernel_error(self) -> float:
        return max(self.kernel_errors) if self.kernel_errors else math.nan


@dataclass
class SqueezeReport:
    alpha: float
    kappa0: float
    limit_energies: list[float]
    rows: list[SqueezeRow]
    probes: list[Probe]
    flags: list[str] = field(default_factory=list)
    verification: str = "surrogate verification"

    def extrapolated_ground_energy(self) -> float:
        """Linear-in-eps extrapolation of the lowest energy from the two smallest eps."""
        rows = sorted((r for r in self.rows if r.energies), key=lambda r: r.epsilon)[:2]
        if len(rows) < 2:
            return math.nan
        (e1, y1), (e2, y2) = ((r.epsilon, r.energies[0]) for r in rows)
        return y1 - e1 * (y2 - y1) / (e2 - e1)


def squeeze_experiment(
    V: Sequence[EdgePotential],
    W: Sequence[EdgePotential],
    epsilons: Sequence[float] = DEFAULT_EPSILONS,
    probes: Sequence[Probe] | None = None,
    kappa0: float | None = None,
    samples: int | None = None,
) -> SqueezeReport:
    if len(V) != len(W):
        raise ValueError("V and W need one potential per edge")
    limit = limit_graph(V, W)
    kw = {} if samples is None else {"samples": samples}
    limit_spec = find_eigenvalues(limit, **kw)
    approx_graphs = [squeezed_graph(V, W, eps) for eps in epsilons]
    approx_specs = [find_eigenvalues(g, **kw) for g in approx_graphs]
    if probes is None:
        probes = default_probes(len(V))
    if kappa0 is None:
        kappa0 = choose_kappa0(W, [limit_spec] + approx_specs)

    flags = []
    limit_e = sorted(limit_spec.energies)
    if not limit_e:
        flags.append("LIMIT_EMPTY")

    limit_res = StarResolvent(limit, kappa0)
    limit_vals = [limit_res.kernel(j, x, l, y) for j, x, l, y in probes]
    rows = []
    for eps, g, spec in zip(epsilons, approx_graphs, approx_specs):
        energies = sorted(e for ev in spec.eigenvalues for e in [ev.energy] * ev.multiplicity)
        limit_expanded = sorted(e for ev in limit_spec.eigenvalues for e in [ev.energy] * ev.multiplicity)
        errors = [abs(a - b) for a, b in zip(energies, limit_expanded)] if limit_e else []
        if len(energies) != len(limit_expanded):
            flags.append(f"COUNT_MISMATCH@{eps!r}")
        try:
            res = StarResolvent(g, kappa0)
            kerr = [abs(res.kernel(j, x, l, y) - lv) for (j, x, l, y), lv in zip(probes, limit_vals)]
        except (AtEigenvalueError, PoleError):
            flags.append(f"KERNEL_UNAVAILABLE@{eps!r}")
            kerr = []
        rows.append(SqueezeRow(float(eps), energies, errors, kerr))
    return SqueezeReport(float(limit.alpha), kappa0, limit_e, rows, list(probes), flags)

"""Negative spectrum of the star operator from the secular equation M(kappa) = alpha.

``M(kappa) = sum_j v_j'(0) / v_j(0)`` is strictly decreasing in kappa between
its poles, which are the Dirichlet levels of the decoupled edges.  Each
pole-free interval therefore holds at most one simple root, found by a
uniform pre-scan followed by bracketing with ``brentq``.  A pole shared by
``m`` edges is itself an eigenvalue of multiplicity ``m - 1``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .edge_solver import KAPPA_FLOOR, POLE_TOL, boundary_values
from .errors import PoleError, WindowTooCoarseError
from .graph import Edge, StarGraph

KAPPA_MIN = 1e-6
SCAN_SAMPLES = 2000
SHARED_POLE_TOL = 1e-9
ROOT_XTOL = 1e-14


@dataclass(frozen=True)
class SecularSample:
    kappa: float
    m_value: float | None  # None marks a pole
    per_edge: tuple[float | None, ...]

    @property
    def pole_edges(self) -> tuple[int, ...]:
        return tuple(j for j, val in enumerate(self.per_edge) if val is None)

    @property
    def is_pole(self) -> bool:
        return self.m_value is None


@dataclass(frozen=True)
class Eigenvalue:
    kappa: float
    multiplicity: int = 1

    @property
    def energy(self) -> float:
        return -self.kappa * self.kappa


@dataclass
class SpectralResult:
    eigenvalues: list[Eigenvalue]
    poles: list[tuple[float, tuple[int, ...]]]
    search_window: tuple[float, float]
    notes: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        """Number of eigenvalues counted with multiplicity."""
        return sum(e.multiplicity for e in self.eigenvalues)

    @property
    def kappas(self) -> list[float]:
        return [e.kappa for e in self.eigenvalues]

    @property
    def energies(self) -> list[float]:
        return [e.energy for e in self.eigenvalues]

    def ground_state(self) -> Eigenvalue | None:
        return max(self.eigenvalues, key=lambda e: e.kappa, default=None)


def default_window(graph: StarGraph) -> tuple[float, float]:
    alpha = 0.0 if graph.decoupled else abs(graph.alpha)
    return KAPPA_MIN, math.sqrt(graph.max_depth()) + alpha + 1.0


def _v0(edge: Edge, kappa: float, step) -> float:
    return float(boundary_values(edge, np.array([kappa]), step)[0][0])


def _unique_edges(graph: StarGraph):
    # identical edges share one solve; results are bit-identical by construction
    index: dict[Edge, int] = {}
    owner = []
    for e in graph.edges:
        owner.append(index.setdefault(e, len(index)))
    return list(index), owner


def secular_value(graph: StarGraph, kappa: float, step: float | None = None) -> SecularSample:
    """M(kappa) with per-edge log-derivatives; poles are marked with ``None``."""
    kappa = float(kappa)
    per_edge = []
    for e in graph.edges:
        v0, dv0, vmax = (float(a[0]) for a in boundary_values(e, np.array([kappa]), step))
        if abs(v0) < POLE_TOL * vmax:
            per_edge.append(None)
        else:
            per_edge.append(dv0 / v0)
    m = None if any(p is None for p in per_edge) else math.fsum(per_edge)
    return SecularSample(kappa, m, tuple(per_edge))


def secular_function(graph: StarGraph, kappa: float, step: float | None = None) -> float:
    s = secular_value(graph, kappa, step)
    if s.is_pole:
        raise PoleError(kappa, s.pole_edges)
    return s.m_value


def _raw_m(edges, owner, kappa, step) -> float:
    vals = []
    for e in edges:
        v0, dv0, _ = boundary_values(e, np.array([kappa]), step)
        vals.append(dv0[0] / v0[0] if v0[0] != 0.0 else math.inf)
    return math.fsum(vals[o] for o in owner)


def dirichlet_edge_spectrum(
    edge: Edge,
    window: tuple[float, float],
    samples: int = SCAN_SAMPLES,
    step: float | None = None,
) -> list[float]:
    """kappa values in ``window`` where ``v(0; kappa) = 0``."""
    lo, hi = window
    if not (KAPPA_FLOOR <= lo < hi):
        raise ValueError(f"invalid window {window}")
    grid = np.linspace(lo, hi, samples)
    v0 = boundary_values(edge, grid, step)[0]
    roots = []
    for i in range(samples - 1):
        a, b = v0[i], v0[i + 1]
        if a == 0.0:
            roots.append(float(grid[i]))
        elif a * b < 0.0:
            roots.append(
                brentq(lambda k: _v0(edge, k, step), grid[i], grid[i + 1], xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)
            )
    if v0[-1] == 0.0:
        roots.append(float(grid[-1]))
    return roots


def _group_poles(per_edge_poles: list[list[float]]) -> list[tuple[float, tuple[int, ...]]]:
    flat = sorted((k, j) for j, ks in enumerate(per_edge_poles) for k in ks)
    groups: list[tuple[float, list[int]]] = []
    for k, j in flat:
        if groups and k - groups[-1][0] <= SHARED_POLE_TOL:
            groups[-1][1].append(j)
        else:
            groups.append((k, [j]))
    return [(k, tuple(js)) for k, js in groups]


def find_eigenvalues(
    graph: StarGraph,
    window: tuple[float, float] | None = None,
    samples: int = SCAN_SAMPLES,
    xtol: float = ROOT_XTOL,
    step: float | None = None,
) -> SpectralResult:
    """All eigenvalues ``-kappa**2`` with kappa in ``window``."""
    if window is None:
        window = default_window(graph)
    lo, hi = float(window[0]), float(window[1])
    if not (KAPPA_FLOOR <= lo < hi):
        raise ValueError(f"invalid window {window}")

    edges, owner = _unique_edges(graph)
    grid = np.linspace(lo, hi, samples)
    scans = [boundary_values(e, grid, step) for e in edges]

    unique_poles = [dirichlet_edge_spectrum(e, (lo, hi), samples, step) for e in edges]
    poles = _group_poles([unique_poles[o] for o in owner])

    if graph.decoupled:
        eigs = [Eigenvalue(k, len(js)) for k, js in poles]
        return SpectralResult(eigs, poles, (lo, hi))

    alpha = graph.alpha
    with np.errstate(divide="ignore", invalid="ignore"):
        m_scan = sum(scans[o][1] / scans[o][0] for o in owner)
    f_scan = m_scan - alpha

    def f(k: float) -> float:
        return _raw_m(edges, owner, k, step) - alpha

    eigs = [Eigenvalue(k, len(js) - 1) for k, js in poles if len(js) > 1]

    bounds = [(lo, False)] + [(k, True) for k, _ in poles] + [(hi, False)]
    for (left, left_pole), (right, right_pole) in zip(bounds, bounds[1:]):
        if right - left <= 0:
            continue
        inside = (grid > left) & (grid < right)
        if not left_pole:
            inside |= grid == left
        if not right_pole:
            inside |= grid == right
        ks, fs = grid[inside], f_scan[inside]
        ok = np.isfinite(fs)
        ks, fs = ks[ok], fs[ok]

        exact = ks[fs == 0.0]
        if exact.size:
            eigs.append(Eigenvalue(float(exact[0])))
            continue

        pos = np.nonzero(fs > 0)[0]
        neg = np.nonzero(fs < 0)[0]
        if pos.size and neg.size and neg[0] > pos[-1]:
            a, b = ks[pos[-1]], ks[neg[0]]
        elif pos.size and neg.size:
            # non-monotone samples; fall back to the first sign change
            i = int(np.nonzero((fs[:-1] > 0) & (fs[1:] < 0))[0][0])
            a, b = ks[i], ks[i + 1]
        else:
            ref = 0.5 * (left + right)
            if pos.size:
                a = ks[pos[-1]]
                if not right_pole:
                    continue
                b = _approach(f, right, ks[pos[-1]] if ks.size else ref, want_positive=False)
            elif neg.size:
                b = ks[neg[0]]
                if not left_pole:
                    continue
                a = _approach(f, left, ks[neg[0]], want_positive=True)
            else:
                if not (left_pole and right_pole):
                    continue
                a = _approach(f, left, ref, want_positive=True)
                b = _approach(f, right, ref, want_positive=False)
        root = brentq(f, a, b, xtol=xtol, rtol=4 * np.finfo(float).eps)
        eigs.append(Eigenvalue(float(root)))

    eigs.sort(key=lambda e: e.kappa)
    return SpectralResult(eigs, poles, (lo, hi))


def _approach(f, pole: float, start: float, want_positive: bool) -> float:
    """Walk geometrically from ``start`` toward ``pole`` until f has the wanted sign."""
    for k in range(1, 80):
        x = pole + (start - pole) * 0.5**k
        if x == pole:
            break
        val = f(x)
        if (val > 0) if want_positive else (val < 0):
            return x
    raise WindowTooCoarseError(f"cannot bracket the secular root next to the pole at kappa={pole!r}")


def coupling_at(graph: StarGraph, kappa: float, lam_max: float = 1e3, step: float | None = None) -> float:
    """Smallest lam > 0 for which ``-kappa**2`` is an eigenvalue of the graph with ``lam * V``.

    Solves ``M(kappa; lam V) = alpha`` in lam.  This inverts the curve
    lam -> kappa(lam) of the ground state for attractive V.
    """
    if graph.decoupled:
        raise ValueError("coupling_at needs a finite alpha")
    alpha = graph.alpha

    def g(lam: float) -> float:
        return _raw_m(*_unique_edges(graph.scaled(lam)), kappa, step) - alpha

    lam, g_prev = 0.0, g(0.0)
    if g_prev > 0:
        raise ValueError("-kappa^2 lies above the ground state already at lam = 0")
    nxt = max(kappa, 1e-6) * 1e-2
    while nxt <= lam_max:
        g_next = g(nxt)
        if g_next >= 0:
            return brentq(g, lam, nxt, xtol=1e-15, rtol=4 * np.finfo(float).eps)
        lam, g_prev = nxt, g_next
        nxt *= 1.1
    raise ValueError(f"no coupling below {lam_max} places an eigenvalue at kappa={kappa!r}")

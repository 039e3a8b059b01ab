"""Solutions of ``-psi'' + V psi = -kappa**2 psi`` on a single edge.

Two solutions are produced on a shared node grid:

* ``u`` with ``u(0) = 0``, ``u'(0) = 1`` (regular at the vertex);
* ``v`` decaying at infinity, or satisfying
  ``psi(l) cos(omega) + psi'(l) sin(omega) = 0`` on a finite edge.

Potentials have compact support, so on an infinite edge ``v`` equals
``exp(-kappa x)`` beyond the support and is seeded there without truncation
error.  Inside the support the ODE is integrated with classical fixed-step
RK4; steps never straddle a segment breakpoint.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numba import njit
from scipy.interpolate import CubicHermiteSpline

from .errors import PoleError, StiffnessError
from .graph import Edge

KAPPA_FLOOR = 1e-8
POLE_TOL = 1e-10
MAX_STEP = 2e-3
# bound on h * sqrt(max|V|); keeps RK4 local error far below 1e-10
STEP_THETA = 0.01


# grid ------------------------------------------------------------------------


@dataclass(frozen=True)
class EdgeGrid:
    nodes: np.ndarray  # x_0 = 0 < ... < x_n = end
    piece: np.ndarray  # piece index of step i (nodes[i] -> nodes[i+1])
    coeffs: np.ndarray  # (n_pieces, deg+1), zero rows on gaps
    end: float


def _step_for(edge: Edge, step: float | None) -> float:
    if step is not None:
        return float(step)
    vmax = edge.potential.max_abs
    h = MAX_STEP
    if vmax > 0:
        h = min(h, STEP_THETA / math.sqrt(vmax))
    return h


@lru_cache(maxsize=512)
def edge_grid(edge: Edge, step: float | None = None) -> EdgeGrid:
    V = edge.potential
    end = edge.length if not edge.is_infinite else V.support_end
    h = _step_for(edge, step)
    cuts = sorted({0.0, end} | {p for a, b, _ in V.segments for p in (a, b) if p <= end})
    deg = V.degree
    rows, nodes, piece = [], [np.zeros(1)], []
    for k, (lo, hi) in enumerate(zip(cuts, cuts[1:])):
        row = np.zeros(deg + 1)
        mid = 0.5 * (lo + hi)
        for a, b, c in V.segments:
            if a <= mid < b:
                row[: len(c)] = c
        rows.append(row)
        n = max(1, math.ceil((hi - lo) / h - 1e-9))
        nodes.append(np.linspace(lo, hi, n + 1)[1:])
        piece.append(np.full(n, k, dtype=np.int64))
    coeffs = np.array(rows) if rows else np.zeros((1, deg + 1))
    return EdgeGrid(
        np.concatenate(nodes),
        np.concatenate(piece) if piece else np.zeros(0, dtype=np.int64),
        coeffs,
        float(end),
    )


# RK4 kernels -----------------------------------------------------------------


@njit(cache=True)
def _q(c, x, kappa2):
    acc = 0.0
    for m in range(c.shape[0] - 1, -1, -1):
        acc = acc * x + c[m]
    return acc + kappa2


@njit(cache=True)
def _rk4_step(c, x, h, y, z, kappa2):
    qm = _q(c, x + 0.5 * h, kappa2)
    k1y = z
    k1z = _q(c, x, kappa2) * y
    k2y = z + 0.5 * h * k1z
    k2z = qm * (y + 0.5 * h * k1y)
    k3y = z + 0.5 * h * k2z
    k3z = qm * (y + 0.5 * h * k2y)
    k4y = z + h * k3z
    k4z = _q(c, x + h, kappa2) * (y + h * k3y)
    y1 = y + h * (k1y + 2.0 * k2y + 2.0 * k3y + k4y) / 6.0
    z1 = z + h * (k1z + 2.0 * k2z + 2.0 * k3z + k4z) / 6.0
    return y1, z1


@njit(cache=True)
def _rk4_path(nodes, piece, coeffs, kappa2, y0, z0, forward):
    n = nodes.shape[0]
    ys = np.empty(n)
    zs = np.empty(n)
    if forward:
        ys[0] = y0
        zs[0] = z0
        for i in range(n - 1):
            ys[i + 1], zs[i + 1] = _rk4_step(
                coeffs[piece[i]], nodes[i], nodes[i + 1] - nodes[i], ys[i], zs[i], kappa2
            )
    else:
        ys[n - 1] = y0
        zs[n - 1] = z0
        for i in range(n - 1, 0, -1):
            ys[i - 1], zs[i - 1] = _rk4_step(
                coeffs[piece[i - 1]], nodes[i], nodes[i - 1] - nodes[i], ys[i], zs[i], kappa2
            )
    return ys, zs


@njit(cache=True)
def _rk4_inward_many(nodes, piece, coeffs, kappas, infinite, seed_y, seed_z):
    # v(0), v'(0) and max|v| for each kappa; seeds are per-kappa for infinite edges
    m = kappas.shape[0]
    n = nodes.shape[0]
    v0 = np.empty(m)
    dv0 = np.empty(m)
    vmax = np.empty(m)
    end = nodes[n - 1]
    for k in range(m):
        kap = kappas[k]
        if infinite:
            y = math.exp(-kap * end)
            z = -kap * y
        else:
            y = seed_y
            z = seed_z
        big = abs(y)
        for i in range(n - 1, 0, -1):
            y, z = _rk4_step(coeffs[piece[i - 1]], nodes[i], nodes[i - 1] - nodes[i], y, z, kap * kap)
            if abs(y) > big:
                big = abs(y)
        v0[k] = y
        dv0[k] = z
        vmax[k] = big
    return v0, dv0, vmax


# solution pair ---------------------------------------------------------------


def _check_kappa(kappa: float) -> float:
    kappa = float(kappa)
    if not kappa >= KAPPA_FLOOR:
        raise ValueError(f"kappa must be >= {KAPPA_FLOOR}, got {kappa}")
    return kappa


def _far_seed(edge: Edge, kappa: float, end: float) -> tuple[float, float]:
    if edge.is_infinite:
        y = math.exp(-kappa * end)
        return y, -kappa * y
    return math.sin(edge.omega), -math.cos(edge.omega)


@dataclass(frozen=True, eq=False)
class EdgeSolutionPair:
    """u and v on a common grid, with analytic continuation past an infinite edge's support."""

    edge: Edge
    kappa: float
    x: np.ndarray
    u: np.ndarray
    du: np.ndarray
    v: np.ndarray
    dv: np.ndarray
    _splines: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def u0prime(self) -> float:
        return float(self.du[0])

    @property
    def v0(self) -> float:
        return float(self.v[0])

    @property
    def v0prime(self) -> float:
        return float(self.dv[0])

    @property
    def wronskian(self) -> float:
        # u(0) = 0, so W = u v' - u' v collapses to -u'(0) v(0)
        return -self.u0prime * self.v0

    @property
    def support_end(self) -> float:
        return float(self.x[-1])

    @property
    def cutoff(self) -> float:
        """Sampling cutoff: one unit past the support on infinite edges."""
        return self.support_end + 1.0 if self.edge.is_infinite else self.edge.length

    @property
    def trajectory(self) -> np.ndarray:
        return np.column_stack([self.x, self.v, self.dv])

    @property
    def is_pole(self) -> bool:
        return abs(self.v0) < POLE_TOL * float(np.max(np.abs(self.v)))

    def wronskian_profile(self) -> np.ndarray:
        return self.u * self.dv - self.du * self.v

    def _spline(self, which: str) -> CubicHermiteSpline:
        if which not in self._splines:
            y, dy = (self.u, self.du) if which == "u" else (self.v, self.dv)
            self._splines[which] = CubicHermiteSpline(self.x, y, dy)
        return self._splines[which]

    def _eval(self, which: str, x, derivative: bool):
        xa = np.asarray(x, dtype=float)
        out = np.empty_like(xa)
        end = self.support_end
        inner = xa <= end
        if np.any(inner):
            if self.x.size > 1:
                s = self._spline(which)
                out[inner] = s(xa[inner], 1) if derivative else s(xa[inner])
            else:
                out[inner] = (self.du if which == "u" else self.dv)[0] if derivative else (
                    self.u if which == "u" else self.v
                )[0]
        tail = ~inner
        if np.any(tail):
            if not self.edge.is_infinite:
                raise ValueError("evaluation point beyond the end of a finite edge")
            t = xa[tail] - end
            k = self.kappa
            if which == "v":
                val = self.v[-1] * np.exp(-k * t)
                out[tail] = -k * val if derivative else val
            else:
                y, z = self.u[-1], self.du[-1]
                if derivative:
                    out[tail] = y * k * np.sinh(k * t) + z * np.cosh(k * t)
                else:
                    out[tail] = y * np.cosh(k * t) + z * np.sinh(k * t) / k
        if np.ndim(x) == 0:
            return float(out)
        return out

    def u_at(self, x):
        return self._eval("u", x, False)

    def du_at(self, x):
        return self._eval("u", x, True)

    def v_at(self, x):
        return self._eval("v", x, False)

    def dv_at(self, x):
        return self._eval("v", x, True)


@lru_cache(maxsize=2048)
def _solve_cached(edge: Edge, kappa: float, step: float | None, seed_scale: float) -> EdgeSolutionPair:
    g = edge_grid(edge, step)
    k2 = kappa * kappa
    vy, vz = _far_seed(edge, kappa, g.end)
    vy, vz = seed_scale * vy, seed_scale * vz
    v, dv = _rk4_path(g.nodes, g.piece, g.coeffs, k2, vy, vz, False)
    u, du = _rk4_path(g.nodes, g.piece, g.coeffs, k2, 0.0, 1.0, True)
    if not (np.all(np.isfinite(v)) and np.all(np.isfinite(u))):
        raise StiffnessError(f"edge integration overflowed at kappa={kappa!r}")
    for arr in (g.nodes, u, du, v, dv):
        arr.setflags(write=False)
    return EdgeSolutionPair(edge, kappa, g.nodes, u, du, v, dv)


def solve_edge(
    edge: Edge, kappa: float, step: float | None = None, seed_scale: float = 1.0
) -> EdgeSolutionPair:
    """Both solutions of the edge problem at ``E = -kappa**2``.

    ``step`` overrides the automatic RK4 step; ``seed_scale`` multiplies the
    far-end data of ``v`` (useful only for testing scale invariance).
    """
    if seed_scale == 0.0:
        raise ValueError("seed_scale must be nonzero")
    return _solve_cached(edge, _check_kappa(kappa), step, float(seed_scale))


def solve_decaying(edge: Edge, kappa: float, step: float | None = None) -> EdgeSolutionPair:
    return solve_edge(edge, kappa, step)


def solve_regular(edge: Edge, kappa: float, step: float | None = None) -> EdgeSolutionPair:
    return solve_edge(edge, kappa, step)


def log_derivative(
    edge: Edge, kappa: float, step: float | None = None, seed_scale: float = 1.0
) -> float:
    """``v'(0) / v(0)``; raises PoleError at Dirichlet levels of the edge."""
    pair = solve_edge(edge, kappa, step, seed_scale)
    if pair.is_pole:
        raise PoleError(pair.kappa)
    return pair.v0prime / pair.v0


def boundary_values(edge: Edge, kappas, step: float | None = None):
    """Vectorized ``(v(0), v'(0), max|v|)`` over an array of kappa values."""
    kappas = np.asarray(kappas, dtype=float)
    if np.any(kappas < KAPPA_FLOOR):
        raise ValueError(f"kappa must be >= {KAPPA_FLOOR}")
    g = edge_grid(edge, step)
    if edge.is_infinite and g.nodes.size == 1:
        ones = np.ones_like(kappas)
        return ones, -kappas.copy(), ones
    sy, sz = (0.0, 0.0) if edge.is_infinite else _far_seed(edge, 0.0, g.end)
    v0, dv0, vmax = _rk4_inward_many(
        g.nodes, g.piece, g.coeffs, kappas, edge.is_infinite, sy, sz
    )
    if not np.all(np.isfinite(v0)):
        raise StiffnessError("edge integration overflowed during kappa scan")
    return v0, dv0, vmax


def check_wronskian(pair: EdgeSolutionPair) -> float:
    """Largest relative deviation of W(x) from W(0) over the grid."""
    w = pair.wronskian_profile()
    return float(np.max(np.abs(w - w[0])) / abs(w[0]))

"""Resolvent kernels of the decoupled edges and of the coupled star (Krein's formula).

For ``E = -kappa**2`` outside the spectrum::

    g_j(x, y)      = -u_j(min) v_j(max) / W(u_j, v_j)
    G_jl(x, y)     = delta_jl g_j(x, y)
                     + v_j(x) v_l(y) / (v_j(0) v_l(0) (alpha - M(kappa)))
"""
from __future__ import annotations

import math
from typing import Callable, Sequence

import numpy as np
from scipy.interpolate import CubicSpline

from .edge_solver import EdgeSolutionPair, solve_edge
from .errors import AtEigenvalueError, PoleError
from .graph import Edge, StarGraph

EIGEN_GAP_TOL = 1e-9


def edge_green(edge: Edge, kappa: float, x, y, step: float | None = None):
    pair = solve_edge(edge, kappa, step)
    if pair.is_pole:
        raise PoleError(kappa)
    return _edge_green(pair, x, y)


def _edge_green(pair: EdgeSolutionPair, x, y):
    x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    out = -pair.u_at(lo) * pair.v_at(hi) / pair.wronskian
    return float(out) if np.ndim(out) == 0 else out


class StarResolvent:
    """Green's kernel of the star operator at one spectral parameter.

    Edge solutions are computed once at construction; kernel evaluation
    afterwards only reads them.
    """

    def __init__(self, graph: StarGraph, kappa: float, step: float | None = None):
        self.graph = graph
        self.kappa = float(kappa)
        self.pairs = [solve_edge(e, self.kappa, step) for e in graph.edges]
        poles = tuple(j for j, p in enumerate(self.pairs) if p.is_pole)
        if poles:
            raise PoleError(self.kappa, poles)
        self.m_value = math.fsum(p.v0prime / p.v0 for p in self.pairs)
        if graph.decoupled:
            self.gap = math.inf
        else:
            alpha = graph.alpha
            self.gap = alpha - self.m_value
            if abs(self.gap) < EIGEN_GAP_TOL * (1.0 + abs(alpha)):
                raise AtEigenvalueError(self.kappa, abs(self.gap))

    def kernel(self, j: int, x, ell: int, y):
        """``G_{j ell}(x, y)``; x on edge j, y on edge ell."""
        pj, pl = self.pairs[j], self.pairs[ell]
        x, y = np.asarray(x, dtype=float), np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        if j == ell:
            out = out + _edge_green(pj, x, y)
        if not self.graph.decoupled:
            out = out + pj.v_at(x) * pl.v_at(y) / (pj.v0 * pl.v0 * self.gap)
        return float(out) if out.ndim == 0 else out

    def apply(self, grids: Sequence[np.ndarray], phi: Sequence[Callable | np.ndarray]):
        """``psi = (H - E)^{-1} phi`` sampled on ``grids``; also returns ``psi'``.

        ``phi[j]`` is a callable on edge j or an array sampled on ``grids[j]``;
        it must vanish beyond the end of its grid.  Cell integrals use
        three-point Gauss-Legendre on every grid cell, so the result is smooth
        in x up to rounding.
        """
        gl_x, gl_w = np.polynomial.legendre.leggauss(3)
        n = self.graph.n
        inner_u, inner_v, totals = [], [], []
        for j in range(n):
            x = np.asarray(grids[j], dtype=float)
            if x[0] != 0.0 or np.any(np.diff(x) <= 0):
                raise ValueError("grids must start at the vertex and increase")
            f = phi[j]
            if not callable(f):
                f = CubicSpline(x, np.asarray(f, dtype=float))
            a, b = x[:-1, None], x[1:, None]
            pts = 0.5 * (a + b) + 0.5 * (b - a) * gl_x[None, :]
            wts = 0.5 * (b - a) * gl_w[None, :]
            fp = f(pts)
            pair = self.pairs[j]
            cu = np.sum(wts * pair.u_at(pts) * fp, axis=1)
            cv = np.sum(wts * pair.v_at(pts) * fp, axis=1)
            # int_0^x u phi and int_x^end v phi at every node
            iu = np.concatenate([[0.0], np.cumsum(cu)])
            iv = np.concatenate([np.cumsum(cv[::-1])[::-1], [0.0]])
            inner_u.append(iu)
            inner_v.append(iv)
            totals.append(iv[0])
        psi, dpsi = [], []
        coupled = 0.0
        if not self.graph.decoupled:
            coupled = math.fsum(t / p.v0 for t, p in zip(totals, self.pairs)) / self.gap
        for j in range(n):
            x = np.asarray(grids[j], dtype=float)
            pair = self.pairs[j]
            u, du, v, dv = pair.u_at(x), pair.du_at(x), pair.v_at(x), pair.dv_at(x)
            w = pair.wronskian
            p = -(v * inner_u[j] + u * inner_v[j]) / w + v / pair.v0 * coupled
            dp = -(dv * inner_u[j] + du * inner_v[j]) / w + dv / pair.v0 * coupled
            psi.append(p)
            dpsi.append(dp)
        return psi, dpsi


def star_green(graph: StarGraph, kappa: float, j: int, x, ell: int, y, step: float | None = None):
    return StarResolvent(graph, kappa, step).kernel(j, x, ell, y)


def apply_resolvent(graph: StarGraph, kappa: float, grids, phi, step: float | None = None):
    """Apply the star resolvent at ``E = -kappa**2``; returns ``(psi, psi')`` per edge."""
    return StarResolvent(graph, kappa, step).apply(grids, phi)


def uniform_grids(graph: StarGraph, h: float, lengths: Sequence[float] | None = None):
    """Per-edge uniform grids from the vertex; default extent is each edge's cutoff."""
    out = []
    for j, e in enumerate(graph.edges):
        if lengths is not None:
            end = lengths[j]
        elif e.is_infinite:
            end = e.potential.support_end + 1.0
        else:
            end = e.length
        n = max(2, int(round(end / h)))
        out.append(np.linspace(0.0, end, n + 1))
    return out

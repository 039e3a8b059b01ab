"""Finite-difference oracle for the star operator on a truncated graph.

Unknowns are the shared vertex value psi_0 plus the nodes ``x_i = i h_j`` of
every edge.  The scheme is the vertex-centred finite-volume form of
``-psi'' + V psi = E psi``: each node owns a dual cell of width ``h_j`` (the
vertex owns ``h_j / 2`` on every edge), the potential enters as its exact
average over the dual cell and the vertex flux balance is
``sum_j (psi_0 - psi_{j,1}) / h_j + alpha psi_0``.  This gives a symmetric
stiffness matrix A and a diagonal mass B; the returned operator is
``B^{-1/2} A B^{-1/2}``, assembled entrywise so it is exactly symmetric.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from numpy.polynomial import Polynomial
from scipy.sparse.linalg import ArpackNoConvergence, eigsh

from .errors import GridTooCoarseError, NoConvergenceError
from .graph import Edge, StarGraph
from .potential import EdgePotential

MAX_STEP = 0.01
MAX_EIGENVALUES = 10
DIRICHLET_SIN_TOL = 1e-12
MAX_ITER = 20000


@dataclass(frozen=True, eq=False)
class FDGrid:
    h: float
    L: float
    steps: tuple[float, ...]  # per-edge step actually used
    nodes: tuple[np.ndarray, ...]  # interior/Robin node positions per edge
    offsets: tuple[int, ...]  # index of each edge's first node in the unknown vector
    has_vertex: bool
    matrix: sp.csr_matrix  # symmetric B^{-1/2} A B^{-1/2}
    mass: np.ndarray
    shift: float  # proven lower bound for the spectrum, used by shift-invert

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def _cell_average(V: EdgePotential, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    """Exact mean of V over ``[lo, hi]``."""
    total = np.zeros_like(lo)
    for a, b, c in V.segments:
        anti = Polynomial(c).integ()
        left = np.clip(lo, a, b)
        right = np.clip(hi, a, b)
        total += anti(right) - anti(left)
    return total / (hi - lo)


def _edge_layout(edge: Edge, h: float, L: float):
    """``(step, nodes, robin)`` for one edge; nodes exclude the vertex."""
    if edge.is_infinite:
        m = int(round(L / h))
        return h, h * np.arange(1, m), None
    m = max(2, int(math.ceil(edge.length / h - 1e-9)))
    step = edge.length / m
    s, c = math.sin(edge.omega), math.cos(edge.omega)
    if abs(s) < DIRICHLET_SIN_TOL:
        return step, step * np.arange(1, m), None
    x = step * np.arange(1, m + 1)
    x[-1] = edge.length
    return step, x, c / s


def _spectrum_floor(graph: StarGraph) -> float:
    bound = math.sqrt(graph.max_depth()) + 1.0
    if not graph.decoupled:
        bound += abs(graph.alpha)
    for e in graph.edges:
        if not e.is_infinite and abs(math.sin(e.omega)) >= DIRICHLET_SIN_TOL:
            bound += abs(math.cos(e.omega) / math.sin(e.omega))
    return -bound * bound - 1.0


def build_matrix(graph: StarGraph, h: float, L: float) -> FDGrid:
    if not 0.0 < h <= MAX_STEP:
        raise GridTooCoarseError(f"step h={h!r} must lie in (0, {MAX_STEP}]")
    for j, e in enumerate(graph.edges):
        if e.is_infinite and not L > e.potential.support_end + h:
            raise GridTooCoarseError(
                f"truncation L={L!r} does not clear the support of edge {j} ({e.potential.support_end!r})"
            )
    has_vertex = not graph.decoupled
    rows, cols, vals = [], [], []
    mass_parts = []
    steps, nodes, offsets = [], [], []
    vertex_diag = 0.0
    vertex_mass = 0.0
    pos = 1 if has_vertex else 0
    for e in graph.edges:
        step, x, robin = _edge_layout(e, h, L)
        n = x.size
        steps.append(step)
        nodes.append(x)
        offsets.append(pos)
        idx = pos + np.arange(n)
        inv = 1.0 / step
        lo = x - 0.5 * step
        hi = x + 0.5 * step
        if robin is not None:
            hi[-1] = x[-1]
        vbar = _cell_average(e.potential, lo, hi)
        m = hi - lo
        diag = 2.0 * inv + m * vbar
        if robin is not None:
            diag[-1] = inv + robin + m[-1] * vbar[-1]
        rows.append(idx)
        cols.append(idx)
        vals.append(diag)
        off = np.full(n - 1, -inv)
        rows += [idx[:-1], idx[1:]]
        cols += [idx[1:], idx[:-1]]
        vals += [off, off]
        mass_parts.append(m)
        if has_vertex:
            vertex_diag += inv + 0.5 * step * _cell_average(e.potential, np.zeros(1), np.array([0.5 * step]))[0]
            vertex_mass += 0.5 * step
            if n:
                rows += [np.array([0]), np.array([idx[0]])]
                cols += [np.array([idx[0]]), np.array([0])]
                vals += [np.array([-inv]), np.array([-inv])]
        pos += n
    if has_vertex:
        rows.insert(0, np.array([0]))
        cols.insert(0, np.array([0]))
        vals.insert(0, np.array([vertex_diag + graph.alpha]))
        mass_parts.insert(0, np.array([vertex_mass]))
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    a = np.concatenate(vals)
    mass = np.concatenate(mass_parts)
    d = 1.0 / np.sqrt(mass)
    # d[r] * d[c] is commutative per entry, so the result is exactly symmetric
    mat = sp.csr_matrix((a * (d[r] * d[c]), (r, c)), shape=(pos, pos))
    return FDGrid(float(h), float(L), tuple(steps), tuple(nodes), tuple(offsets), has_vertex, mat, mass, _spectrum_floor(graph))


def lowest_eigenvalues(grid: FDGrid, m: int) -> list[float]:
    """The ``m`` smallest eigenvalues, ascending (shift-invert Lanczos)."""
    if not 1 <= m <= MAX_EIGENVALUES:
        raise ValueError(f"m must lie in [1, {MAX_EIGENVALUES}]")
    if m >= grid.size - 1:
        return sorted(np.linalg.eigvalsh(grid.matrix.toarray()))[:m]
    # a non-symmetric start vector so that modes odd under edge permutations are reached
    v0 = np.random.default_rng(0).standard_normal(grid.size)
    try:
        vals = eigsh(grid.matrix, k=m, sigma=grid.shift, which="LM", v0=v0, maxiter=MAX_ITER, return_eigenvectors=False)
    except ArpackNoConvergence as exc:
        raise NoConvergenceError(f"shift-invert Lanczos did not converge: {exc}") from exc
    return sorted(float(v) for v in vals)


def count_below(grid: FDGrid, lam: float) -> int:
    """Number of eigenvalues below ``lam`` by Sylvester inertia.

    Each edge block is tridiagonal and couples to the vertex only through its
    first node, so eliminating every edge from its far end toward the vertex
    is an exact LDL^T factorization of ``matrix - lam``.
    """
    mat = grid.matrix
    diag = (mat.diagonal() - lam).tolist()
    sup = mat.diagonal(1).tolist()
    ends = list(grid.offsets[1:]) + [grid.size]
    negative = 0
    vertex = diag[0] if grid.has_vertex else 0.0
    for start, stop in zip(grid.offsets, ends):
        if stop == start:
            continue
        d = diag[stop - 1]
        for i in range(stop - 2, start - 1, -1):
            if d == 0.0:
                d = 1e-300
            if d < 0.0:
                negative += 1
            d = diag[i] - sup[i] * sup[i] / d
        if d == 0.0:
            d = 1e-300
        if d < 0.0:
            negative += 1
        if grid.has_vertex:
            c = mat[0, start]
            vertex -= c * c / d
    if grid.has_vertex and vertex < 0.0:
        negative += 1
    return negative


def fd_eigenvalues(graph: StarGraph, h: float, L: float, m: int) -> list[float]:
    return lowest_eigenvalues(build_matrix(graph, h, L), m)


def fd_bound_states(graph: StarGraph, h: float, L: float, m: int = MAX_EIGENVALUES) -> list[float]:
    """Negative FD eigenvalues, at most ``m`` of them, ascending."""
    grid = build_matrix(graph, h, L)
    k = min(count_below(grid, 0.0), m)
    if k == 0:
        return []
    return [e for e in lowest_eigenvalues(grid, k) if e < 0.0]

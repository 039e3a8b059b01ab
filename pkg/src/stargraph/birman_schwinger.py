"""Birman-Schwinger kernel of H_0(lam V) on a star of semi-infinite edges.

``-kappa**2`` is an eigenvalue of ``H_0(lam V)`` exactly when ``lam K(kappa)``
has eigenvalue -1, with

    K_jl(x, y) = |V_j(x)|^(1/2) [delta_jl sinh(kappa x<) exp(-kappa x>) / kappa
                                 + exp(-kappa (x + y)) / (kappa N)] V_l(y)^(1/2)

and ``V^(1/2) = sign(V) |V|^(1/2)``.  K is discretized by Nystrom on
Gauss-Legendre nodes over each potential segment with symmetric weights.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import EigenFailureError, NoThresholdError, ZeroNegativePartError
from .potential import EdgePotential, abs_distance_integral, sum_distance_integral

DEFAULT_NODES = 64
IMAG_TOL = 1e-10


def _signed_sqrt(v):
    return np.sign(v) * np.sqrt(np.abs(v))


def _free_kernel(kappa: float, n: int, same_edge, x, y):
    lo, hi = np.minimum(x, y), np.maximum(x, y)
    # sinh(k lo) exp(-k hi) / k without cancellation for small k
    diag = -np.expm1(-2.0 * kappa * lo) * np.exp(-kappa * (hi - lo)) / (2.0 * kappa)
    return np.where(same_edge, diag, 0.0) + np.exp(-kappa * (x + y)) / (kappa * n)


def bs_kernel(potentials: Sequence[EdgePotential], kappa: float, j: int, x, ell: int, y):
    n = len(potentials)
    vx = np.asarray(potentials[j](x))
    vy = np.asarray(potentials[ell](y))
    out = np.sqrt(np.abs(vx)) * _free_kernel(kappa, n, j == ell, np.asarray(x, float), np.asarray(y, float)) * _signed_sqrt(vy)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True, eq=False)
class BSKernelGrid:
    kappa: float
    nodes: np.ndarray
    weights: np.ndarray
    edge: np.ndarray  # edge index of every node
    matrix: np.ndarray

    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.matrix, self.matrix.T))


def _nodes(potentials: Sequence[EdgePotential], nodes_per_edge: int):
    gx, gw = np.polynomial.legendre.leggauss(nodes_per_edge)
    xs, ws, es = [], [], []
    for j, V in enumerate(potentials):
        for a, b, c in V.segments:
            if all(v == 0.0 for v in c):
                continue
            xs.append(0.5 * (a + b) + 0.5 * (b - a) * gx)
            ws.append(0.5 * (b - a) * gw)
            es.append(np.full(nodes_per_edge, j))
    if not xs:
        return np.zeros(0), np.zeros(0), np.zeros(0, dtype=int)
    return np.concatenate(xs), np.concatenate(ws), np.concatenate(es)


def bs_matrix(
    potentials: Sequence[EdgePotential], kappa: float, nodes_per_edge: int = DEFAULT_NODES
) -> BSKernelGrid:
    """Nystrom matrix ``sqrt(w_a) K(x_a, x_b) sqrt(w_b)``.

    Every non-trivial segment of every edge receives ``nodes_per_edge`` nodes.
    """
    if nodes_per_edge < 8:
        raise ValueError("nodes_per_edge must be at least 8")
    if not kappa > 0:
        raise ValueError("kappa must be positive")
    x, w, e = _nodes(potentials, nodes_per_edge)
    vals = np.concatenate([potentials[j](x[e == j]) for j in range(len(potentials))]) if x.size else x
    # nodes are grouped by edge in order, so the per-edge concatenation lines up
    root = np.sqrt(np.abs(vals) * w)
    free = _free_kernel(kappa, len(potentials), e[:, None] == e[None, :], x[:, None], x[None, :])
    # outer(root, root) and free are symmetric entrywise, so a sign-definite V
    # gives a bit-for-bit symmetric matrix
    return BSKernelGrid(kappa, x, w, e, free * np.outer(root, root) * np.sign(vals)[None, :])


def bs_spectrum(
    potentials: Sequence[EdgePotential], kappa: float, nodes_per_edge: int = DEFAULT_NODES
) -> np.ndarray:
    """Real eigenvalues of the discretized K, largest magnitude first."""
    grid = bs_matrix(potentials, kappa, nodes_per_edge)
    mat = grid.matrix
    if mat.size == 0:
        return np.zeros(0)
    try:
        if grid.symmetric:
            vals = np.linalg.eigvalsh(mat)
        else:
            # mixed-sign V: real spectrum in exact arithmetic, not after rounding
            full = np.linalg.eigvals(mat)
            vals = full.real[np.abs(full.imag) <= IMAG_TOL * max(1.0, np.max(np.abs(full)))]
    except np.linalg.LinAlgError as exc:
        raise EigenFailureError(str(exc)) from exc
    return vals[np.argsort(-np.abs(vals), kind="stable")]


def principal_eigenvalue(potentials, kappa: float, nodes_per_edge: int = DEFAULT_NODES) -> float:
    """Most negative eigenvalue of K, or +inf when there is none."""
    vals = bs_spectrum(potentials, kappa, nodes_per_edge)
    neg = vals[vals < 0]
    return float(neg.min()) if neg.size else float("inf")


def coupling_threshold(potentials, kappa: float, nodes_per_edge: int = DEFAULT_NODES) -> float:
    """Coupling lam at which ``-kappa**2`` becomes an eigenvalue of H_0(lam V)."""
    mu = principal_eigenvalue(potentials, kappa, nodes_per_edge)
    if not mu < 0:
        raise NoThresholdError(f"K has no negative eigenvalue at kappa={kappa!r}")
    return -1.0 / mu


@dataclass(frozen=True)
class CountBound:
    mean_negative: float
    diag_term: float
    cross_term: float
    bound: float


def count_bound(potentials: Sequence[EdgePotential]) -> CountBound:
    """Upper bound on the number of negative eigenvalues of H_0(V).

    Only the negative parts ``max(0, -V_j)`` enter.  The braced term is
    reported as computed, even when it is negative.
    """
    neg = [V.negative_part() for V in potentials]
    n = len(neg)
    mean = sum(v.moment(0) for v in neg)
    if mean <= 0.0:
        raise ZeroNegativePartError("the potential has no negative part")
    diag = sum(abs_distance_integral(v, v) for v in neg)
    cross = 0.0
    for j in range(n):
        for ell in range(n):
            weight = 2.0 / n - (1.0 if j == ell else 0.0)
            cross += weight * sum_distance_integral(neg[j], neg[ell])
    return CountBound(mean, diag, cross, 1.0 + (diag + cross) / (2.0 * mean))

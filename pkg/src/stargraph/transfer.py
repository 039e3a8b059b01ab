"""Exact transfer matrices for piecewise-constant potentials.

This path shares no code with the RK4 integrator and serves as the
reference it is checked against.
"""
from __future__ import annotations

import math

from .graph import Edge


def propagate(y: float, dy: float, q: float, length: float) -> tuple[float, float]:
    """Carry ``(psi, psi')`` across ``length`` (may be negative) under ``psi'' = q psi``."""
    if q > 0:
        s = math.sqrt(q)
        c, sh = math.cosh(s * length), math.sinh(s * length)
        return c * y + sh / s * dy, s * sh * y + c * dy
    if q < 0:
        s = math.sqrt(-q)
        c, sn = math.cos(s * length), math.sin(s * length)
        return c * y + sn / s * dy, -s * sn * y + c * dy
    return y + length * dy, dy


def _pieces(edge: Edge):
    V = edge.potential
    if not V.is_piecewise_constant:
        raise ValueError("transfer matrices need a piecewise-constant potential")
    end = edge.length if not edge.is_infinite else V.support_end
    cuts = sorted({0.0, end} | {p for a, b, _ in V.segments for p in (a, b) if p <= end})
    out = []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        out.append((lo, hi, float(V(mid))))
    return out, end


def decaying_boundary(edge: Edge, kappa: float) -> tuple[float, float]:
    """``(v(0), v'(0))`` with the same normalization as the RK4 solver."""
    pieces, end = _pieces(edge)
    if edge.is_infinite:
        y = math.exp(-kappa * end)
        dy = -kappa * y
    else:
        y, dy = math.sin(edge.omega), -math.cos(edge.omega)
    for lo, hi, val in reversed(pieces):
        y, dy = propagate(y, dy, val + kappa * kappa, lo - hi)
    return y, dy


def decaying_at(edge: Edge, kappa: float, x: float) -> tuple[float, float]:
    pieces, end = _pieces(edge)
    if edge.is_infinite and x >= end:
        y = math.exp(-kappa * x)
        return y, -kappa * y
    if edge.is_infinite:
        y = math.exp(-kappa * end)
        dy = -kappa * y
    else:
        y, dy = math.sin(edge.omega), -math.cos(edge.omega)
    for lo, hi, val in reversed(pieces):
        if hi <= x:
            break
        stop = max(lo, x)
        y, dy = propagate(y, dy, val + kappa * kappa, stop - hi)
    return y, dy


def regular_at(edge: Edge, kappa: float, x: float) -> tuple[float, float]:
    """``(u(x), u'(x))`` with ``u(0) = 0``, ``u'(0) = 1``."""
    pieces, end = _pieces(edge)
    y, dy = 0.0, 1.0
    pos = 0.0
    for lo, hi, val in pieces:
        if lo >= x:
            break
        stop = min(hi, x)
        y, dy = propagate(y, dy, val + kappa * kappa, stop - lo)
        pos = stop
    if x > pos:
        y, dy = propagate(y, dy, kappa * kappa, x - pos)
    return y, dy


def log_derivative(edge: Edge, kappa: float) -> float:
    y, dy = decaying_boundary(edge, kappa)
    return dy / y

"""Piecewise-polynomial edge potentials and their exact integrals.

A potential is a sorted list of disjoint segments ``(a, b, coeffs)`` with
``V(x) = sum(c[m] * x**m)`` on ``[a, b)`` and zero elsewhere.  Coefficients
are in the global coordinate ``x`` measured from the vertex, not local to
the segment.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from numpy.polynomial import Polynomial

Segment = tuple[float, float, tuple[float, ...]]

MAX_MOMENT = 4


def _normalize_coeffs(coeffs: Iterable[float]) -> tuple[float, ...]:
    c = [float(v) for v in coeffs]
    if not c:
        c = [0.0]
    # trailing zeros carry no information; keep at least the constant term
    while len(c) > 1 and c[-1] == 0.0:
        c.pop()
    return tuple(c)


@dataclass(frozen=True)
class EdgePotential:
    segments: tuple[Segment, ...] = ()

    def __post_init__(self):
        segs = []
        for seg in self.segments:
            a, b, coeffs = seg
            a, b = float(a), float(b)
            c = _normalize_coeffs(coeffs)
            if not (math.isfinite(a) and math.isfinite(b)):
                raise ValueError(f"segment endpoints must be finite, got [{a}, {b})")
            if a < 0.0 or not a < b:
                raise ValueError(f"segment [{a}, {b}) must satisfy 0 <= a < b")
            if not all(math.isfinite(v) for v in c):
                raise ValueError("segment coefficients must be finite")
            segs.append((a, b, c))
        for (a0, b0, _), (a1, b1, _) in zip(segs, segs[1:]):
            if a1 < b0:
                raise ValueError(
                    f"segments [{a0}, {b0}) and [{a1}, {b1}) overlap or are not sorted"
                )
        object.__setattr__(self, "segments", tuple(segs))

    # construction helpers

    @classmethod
    def zero(cls) -> "EdgePotential":
        return cls(())

    @classmethod
    def well(cls, depth: float, start: float, end: float) -> "EdgePotential":
        """Constant value ``depth`` on ``[start, end)``."""
        return cls(((start, end, (depth,)),))

    @classmethod
    def poly(cls, a: float, b: float, coeffs: Sequence[float]) -> "EdgePotential":
        return cls(((a, b, tuple(coeffs)),))

    # basic queries

    @property
    def is_zero(self) -> bool:
        return all(all(c == 0.0 for c in coeffs) for _, _, coeffs in self.segments)

    @property
    def support_end(self) -> float:
        """Right end of the last non-trivial segment (0 for the zero potential)."""
        ends = [b for _, b, c in self.segments if any(v != 0.0 for v in c)]
        return max(ends) if ends else 0.0

    @property
    def is_piecewise_constant(self) -> bool:
        return all(len(c) == 1 for _, _, c in self.segments)

    @property
    def degree(self) -> int:
        return max((len(c) - 1 for _, _, c in self.segments), default=0)

    def __call__(self, x):
        return evaluate_potential(self, x)

    def left_limit(self, x):
        """Values ``V(x-0)``; differs from ``V(x)`` only at segment breakpoints."""
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b, c in self.segments:
            mask = (x > a) & (x <= b)
            if np.any(mask):
                out[mask] = np.polynomial.polynomial.polyval(x[mask], c)
        return out

    def extrema(self) -> tuple[float, float]:
        """``(min V, max V)`` over the half-line, zero included when V has gaps."""
        lo, hi = 0.0, 0.0
        for a, b, c in self.segments:
            p = Polynomial(c)
            pts = [a, b]
            if len(c) > 2:
                for r in p.deriv().roots():
                    if abs(r.imag) < 1e-12 and a < r.real < b:
                        pts.append(r.real)
            vals = p(np.array(pts))
            lo, hi = min(lo, float(vals.min())), max(hi, float(vals.max()))
        return lo, hi

    @property
    def max_abs(self) -> float:
        lo, hi = self.extrema()
        return max(-lo, hi)

    @property
    def max_depth(self) -> float:
        return max(0.0, -self.extrema()[0])

    # algebra

    def __add__(self, other: "EdgePotential") -> "EdgePotential":
        """Pointwise sum; overlapping segments are merged by adding coefficients."""
        if not isinstance(other, EdgePotential):
            return NotImplemented
        cuts = sorted({p for a, b, _ in self.segments + other.segments for p in (a, b)})
        segs = []
        for a, b in zip(cuts, cuts[1:]):
            mid = 0.5 * (a + b)
            c = np.zeros(1)
            covered = False
            for pot in (self, other):
                for sa, sb, sc in pot.segments:
                    if sa <= mid < sb:
                        c = np.polynomial.polynomial.polyadd(c, sc)
                        covered = True
            if covered:
                segs.append((a, b, tuple(c)))
        return EdgePotential(tuple(segs))

    def __mul__(self, factor: float) -> "EdgePotential":
        f = float(factor)
        return EdgePotential(tuple((a, b, tuple(f * v for v in c)) for a, b, c in self.segments))

    __rmul__ = __mul__

    def __neg__(self) -> "EdgePotential":
        return self * -1.0

    def moment(self, n: int) -> float:
        return potential_moment(self, n)

    def negative_part(self) -> "EdgePotential":
        """``max(0, -V)``, splitting segments at sign changes of each polynomial."""
        segs = []
        for a, b, c in self.segments:
            p = Polynomial(c)
            pts = [a, b]
            if len(c) > 1:
                for r in p.roots():
                    if abs(r.imag) < 1e-12 and a < r.real < b:
                        pts.append(float(r.real))
            pts = sorted(set(pts))
            for lo, hi in zip(pts, pts[1:]):
                if p(0.5 * (lo + hi)) < 0.0:
                    segs.append((lo, hi, tuple(-v for v in c)))
        return EdgePotential(tuple(segs))

    def scaled(self, epsilon: float) -> "EdgePotential":
        return scale_potential(self, epsilon)


ZERO = EdgePotential()


def evaluate_potential(V: EdgePotential, x):
    """Pointwise value of V; zero outside all segments.  Accepts scalars or arrays."""
    xa = np.asarray(x, dtype=float)
    out = np.zeros_like(xa)
    for a, b, c in V.segments:
        mask = (xa >= a) & (xa < b)
        if np.any(mask):
            out[mask] = np.polynomial.polynomial.polyval(xa[mask], c)
    if np.ndim(x) == 0:
        return float(out)
    return out


def _raw_moment(a: float, b: float, coeffs: Sequence[float], n: int) -> float:
    total = 0.0
    for m, cm in enumerate(coeffs):
        k = n + m + 1
        total += cm * (b**k - a**k) / k
    return float(total)


def potential_moment(V: EdgePotential, n: int) -> float:
    """Exact ``int_0^inf x**n V(x) dx``."""
    if not 0 <= n <= MAX_MOMENT:
        raise ValueError(f"moment order must lie in [0, {MAX_MOMENT}], got {n}")
    return sum(_raw_moment(a, b, c, n) for a, b, c in V.segments)


def scale_potential(W: EdgePotential, epsilon: float) -> EdgePotential:
    """The squeezed potential ``x -> W(x / epsilon) / epsilon``, exactly."""
    eps = float(epsilon)
    if not eps > 0.0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    segs = tuple(
        (eps * a, eps * b, tuple(cm * eps ** (-m - 1) for m, cm in enumerate(c)))
        for a, b, c in W.segments
    )
    return EdgePotential(segs)


# double integrals over pairs of piecewise polynomials -------------------------


def _segments_of(f) -> list[Segment]:
    return list(f.segments) if isinstance(f, EdgePotential) else list(f)


def _same_interval_abs(a: float, b: float, p: Polynomial, q: Polynomial) -> float:
    # int_a^b int_a^b |x-y| p(x) q(y) = sum over the two triangles x>y and y>x
    x = Polynomial([0.0, 1.0])

    def lower_triangle(f, g):
        # int_a^b f(x) int_a^x (x-y) g(y) dy dx
        g0 = g.integ(lbnd=a)
        g1 = (x * g).integ(lbnd=a)
        inner = x * g0 - g1
        outer = (f * inner).integ(lbnd=a)
        return outer(b)

    return float(lower_triangle(p, q) + lower_triangle(q, p))


def abs_distance_integral(f, g) -> float:
    """Exact ``int int f(x) |x - y| g(y) dx dy`` for piecewise polynomials.

    ``f`` and ``g`` are EdgePotentials or raw segment lists; raw segments may
    sit on negative x, which the odd-extension formula relies on.
    """
    fs, gs = _segments_of(f), _segments_of(g)
    cuts = sorted({p for a, b, _ in fs + gs for p in (a, b)})
    pieces_f, pieces_g = [], []
    for lo, hi in zip(cuts, cuts[1:]):
        mid = 0.5 * (lo + hi)
        for segs, pieces in ((fs, pieces_f), (gs, pieces_g)):
            for a, b, c in segs:
                if a <= mid < b:
                    pieces.append((lo, hi, Polynomial(c)))
    total = 0.0
    for a1, b1, p in pieces_f:
        m0p, m1p = _raw_moment(a1, b1, p.coef, 0), _raw_moment(a1, b1, p.coef, 1)
        for a2, b2, q in pieces_g:
            if a1 == a2:
                total += _same_interval_abs(a1, b1, p, q)
                continue
            m0q, m1q = _raw_moment(a2, b2, q.coef, 0), _raw_moment(a2, b2, q.coef, 1)
            if b1 <= a2:
                total += m1q * m0p - m1p * m0q
            else:
                total += m1p * m0q - m1q * m0p
    return float(total)


def sum_distance_integral(f: EdgePotential, g: EdgePotential) -> float:
    """Exact ``int int f(x) (x + y) g(y) dx dy``."""
    return potential_moment(f, 1) * potential_moment(g, 0) + potential_moment(
        f, 0
    ) * potential_moment(g, 1)


def odd_extension_segments(V: EdgePotential) -> list[Segment]:
    """Segments of the odd extension ``V(-x) = -V(x)`` on the whole line."""
    mirrored = []
    for a, b, c in V.segments:
        # -p(-x) has coefficients -(-1)^m c_m
        cm = tuple(-((-1) ** m) * v for m, v in enumerate(c))
        mirrored.append((-b, -a, cm))
    return sorted(mirrored) + list(V.segments)

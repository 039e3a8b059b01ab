"""Weak-coupling bound state of H_0(lam V) on a star of semi-infinite edges.

For small lam > 0 a single negative eigenvalue ``-kappa(lam)**2`` exists iff
``sum_j int V_j <= 0``, and

    kappa(lam) = c1 lam + c2 lam**2 + O(lam**3)
    c1 = -(1/N) sum_j int V_j
    c2 = -(1/2N) [ sum_j intint V_j(x) |x-y| V_j(y)
                   + sum_{j,l} (2/N - delta_jl) intint V_j(x) (x+y) V_l(y) ]

With zero mean, c2 also equals ``-(1/4N) sum_j intint Vo_j |x-y| Vo_j`` over
the line, ``Vo_j`` being the odd extension of ``V_j``.  All integrals are
closed-form piecewise-polynomial integrals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import NumericalError
from .graph import StarGraph
from .potential import (
    EdgePotential,
    abs_distance_integral,
    odd_extension_segments,
    sum_distance_integral,
)
from .secular import KAPPA_MIN, default_window, find_eigenvalues

ZERO_MEAN_RTOL = 1e-13
DEFAULT_LAMBDA_MAX = 0.1


class Existence(NamedTuple):
    exists: bool
    mean: float


@dataclass(frozen=True)
class AsymptoticCoefficients:
    c1: float
    c2: float
    zero_mean: bool


def potential_mean(potentials: Sequence[EdgePotential]) -> float:
    return math.fsum(V.moment(0) for V in potentials)


def _is_zero_mean(potentials) -> bool:
    scale = math.fsum(abs(V.moment(0)) for V in potentials)
    return abs(potential_mean(potentials)) <= ZERO_MEAN_RTOL * scale


def existence_condition(potentials: Sequence[EdgePotential]) -> Existence:
    mean = potential_mean(potentials)
    return Existence(mean <= 0.0 or _is_zero_mean(potentials), mean)


def quadratic_coefficient(potentials: Sequence[EdgePotential]) -> float:
    """c2 from the general two-term formula."""
    n = len(potentials)
    diag = math.fsum(abs_distance_integral(V, V) for V in potentials)
    cross = math.fsum(
        (2.0 / n - (1.0 if j == ell else 0.0)) * sum_distance_integral(potentials[j], potentials[ell])
        for j in range(n)
        for ell in range(n)
    )
    return -(diag + cross) / (2.0 * n)


def odd_extension_coefficient(potentials: Sequence[EdgePotential]) -> float:
    """c2 for zero-mean V via the odd extension of every edge potential."""
    n = len(potentials)
    total = 0.0
    for V in potentials:
        odd = odd_extension_segments(V)
        total += abs_distance_integral(odd, odd)
    return -total / (4.0 * n)


def asymptotic_coefficients(potentials: Sequence[EdgePotential]) -> AsymptoticCoefficients:
    n = len(potentials)
    if _is_zero_mean(potentials):
        return AsymptoticCoefficients(0.0, odd_extension_coefficient(potentials), True)
    return AsymptoticCoefficients(-potential_mean(potentials) / n, quadratic_coefficient(potentials), False)


def kappa_asymptotic(potentials: Sequence[EdgePotential], lam: float):
    """Two-term approximation of kappa(lam) and the coefficients used."""
    c = asymptotic_coefficients(potentials)
    return c.c1 * lam + c.c2 * lam * lam, c


@dataclass(frozen=True)
class WeakRow:
    lam: float
    kappa_numeric: float  # nan when no state was found
    kappa_asym1: float
    kappa_asym2: float
    residual: float
    residual_over_lambda3: float
    flags: tuple[str, ...] = ()


def weak_scan(
    potentials: Sequence[EdgePotential],
    lambdas: Sequence[float],
    lambda_max: float = DEFAULT_LAMBDA_MAX,
    samples: int | None = None,
    kappa_max: float | None = None,
    xtol: float | None = None,
) -> list[WeakRow]:
    """Compare the exact bound state of H_0(lam V) with the two-term expansion."""
    coeffs = asymptotic_coefficients(potentials)
    exists = existence_condition(potentials).exists
    base = StarGraph.from_potentials(potentials, 0.0)
    rows = []
    for lam in lambdas:
        if not lam > 0:
            raise ValueError("lambda values must be positive")
        asym1 = coeffs.c1 * lam
        asym2 = asym1 + coeffs.c2 * lam * lam
        flags = []
        graph = base.scaled(lam)
        window = default_window(graph)
        if kappa_max is not None:
            window = (window[0], kappa_max)
        kwargs = {}
        if samples is not None:
            kwargs["samples"] = samples
        if xtol is not None:
            kwargs["xtol"] = xtol
        try:
            result = find_eigenvalues(graph, window, **kwargs)
        except NumericalError as exc:
            rows.append(WeakRow(lam, math.nan, asym1, asym2, math.nan, math.nan, (type(exc).__name__,)))
            continue
        if result.count == 0:
            flags.append("MISSING_STATE")
            knum = math.nan
        else:
            knum = result.ground_state().kappa
            if lam <= lambda_max and result.count != 1:
                flags.append("NOT_SINGLE")
        if exists and asym2 < 10.0 * KAPPA_MIN:
            flags.append("UNRELIABLE")
        resid = knum - asym2
        rows.append(WeakRow(lam, knum, asym1, asym2, resid, resid / lam**3, tuple(flags)))
    return rows

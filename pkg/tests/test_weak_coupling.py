import math

import numpy as np
import pytest

from stargraph import EdgePotential, StarGraph, find_eigenvalues
from stargraph.potential import abs_distance_integral
from stargraph.weak_coupling import (
    asymptotic_coefficients,
    existence_condition,
    kappa_asymptotic,
    odd_extension_coefficient,
    quadratic_coefficient,
    weak_scan,
)

from conftest import gl_double, wells

ZERO_MEAN = [EdgePotential.well(-1.0, 0.0, 1.0) + EdgePotential.well(1.0, 1.0, 2.0)] * 2


def test_existence_examples():
    assert existence_condition(wells(3)) == (True, -3.0)
    assert existence_condition(wells(3, 1.0)) == (False, 3.0)
    assert existence_condition([EdgePotential.well(-1.0, 0.0, 1.0), EdgePotential.well(1.0, 0.0, 1.0)]) == (True, 0.0)


@pytest.mark.parametrize("lam", [0.01, 0.05])
def test_repulsive_family_has_no_state(lam):
    g = StarGraph.from_potentials(wells(3, 1.0)).scaled(lam)
    assert find_eigenvalues(g).count == 0


@pytest.mark.parametrize("n", [2, 3, 5])
def test_identical_unit_wells_coefficients(n):
    value, c = kappa_asymptotic(wells(n), 0.01)
    assert c.c1 == pytest.approx(1.0, abs=1e-15)
    assert c.c2 == pytest.approx(-2.0 / 3.0, abs=1e-14)
    assert value == pytest.approx(0.01 - (2.0 / 3.0) * 1e-4, abs=1e-16)


def _quadrature_c2(pots):
    n = len(pots)
    diag = sum(gl_double(V, V, lambda x, y: np.abs(x - y)) for V in pots)
    cross = sum(
        (2.0 / n - (j == l)) * gl_double(pots[j], pots[l], lambda x, y: x + y) for j in range(n) for l in range(n)
    )
    return -(diag + cross) / (2 * n)


def test_general_coefficient_against_numerical_quadrature():
    pots = [EdgePotential.poly(0.0, 1.5, [-1.0, 0.5]), EdgePotential.well(-2.0, 0.3, 0.9), EdgePotential.poly(0.5, 2.0, [0.0, -1.0, 0.25])]
    assert quadratic_coefficient(pots) == pytest.approx(_quadrature_c2(pots), rel=1e-9)


def test_two_edges_reduce_to_line_formula():
    # glue the edges into a line: edge 0 becomes x < 0 with the reflected polynomial
    v1 = EdgePotential.poly(0.0, 1.2, [-1.0, 0.4])
    v2 = EdgePotential.well(-0.7, 0.2, 2.0)
    line = [(-b, -a, tuple(((-1) ** m) * cm for m, cm in enumerate(c))) for a, b, c in v1.segments] + list(v2.segments)
    total = v1.moment(0) + v2.moment(0)
    c1_line = -total / 2
    c2_line = -abs_distance_integral(line, line) / 4
    c = asymptotic_coefficients([v1, v2])
    assert c.c1 == pytest.approx(c1_line, rel=1e-14)
    assert c.c2 == pytest.approx(c2_line, rel=1e-12)


def test_zero_mean_dual_formulas_agree():
    c = asymptotic_coefficients(ZERO_MEAN)
    assert c.zero_mean and c.c1 == 0.0
    assert odd_extension_coefficient(ZERO_MEAN) == pytest.approx(quadratic_coefficient(ZERO_MEAN), abs=1e-12)
    assert c.c2 > 0


def test_zero_mean_quadratic_onset():
    c2 = asymptotic_coefficients(ZERO_MEAN).c2
    (row,) = weak_scan(ZERO_MEAN, [0.005])
    assert abs(row.kappa_numeric / 0.005**2 - c2) <= 0.05 * abs(c2)
    assert row.kappa_asym1 == 0.0


def test_scan_residual_is_third_order():
    rows = weak_scan(wells(3), [0.02, 0.01, 0.005, 0.0025])
    ratios = [abs(a.residual_over_lambda3 / b.residual_over_lambda3) for a, b in zip(rows, rows[1:])]
    assert all(0.5 <= r <= 2.0 for r in ratios)
    assert all(r.flags == () for r in rows)


@pytest.mark.parametrize("lam", [0.1, 0.05, 0.01])
def test_single_negative_eigenvalue(lam):
    assert find_eigenvalues(StarGraph.from_potentials(wells(3)).scaled(lam)).count == 1


def test_repulsive_scan_rows_are_flagged():
    rows = weak_scan(wells(3, 1.0), [0.05, 0.01])
    assert all(r.flags == ("MISSING_STATE",) for r in rows)
    assert all(math.isnan(r.kappa_numeric) for r in rows)


def test_large_coupling_is_reported_not_fatal():
    (row,) = weak_scan(wells(3, -10.0), [5.0])
    assert not math.isnan(row.kappa_numeric)
    assert "NOT_SINGLE" not in row.flags  # above lambda_max the single-state check is not applied
    (row,) = weak_scan(wells(3, -10.0), [5.0], lambda_max=10.0)
    assert "NOT_SINGLE" in row.flags


def test_negative_lambda_rejected():
    with pytest.raises(ValueError):
        weak_scan(wells(2), [-0.1])

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from conftest import gl_double
from stargraph.potential import (
    EdgePotential,
    abs_distance_integral,
    odd_extension_segments,
    potential_moment,
    scale_potential,
    sum_distance_integral,
)


@st.composite
def potentials(draw, max_segments=3, max_degree=3):
    k = draw(st.integers(0, max_segments))
    cuts = sorted(draw(st.lists(st.floats(0.0, 4.0), min_size=2 * k, max_size=2 * k, unique=True)))
    segs = []
    coef = st.floats(-5.0, 5.0, allow_nan=False, allow_infinity=False)
    for i in range(k):
        a, b = cuts[2 * i], cuts[2 * i + 1]
        if b - a < 1e-3:
            continue
        segs.append((a, b, tuple(draw(st.lists(coef, min_size=1, max_size=max_degree + 1)))))
    return EdgePotential(tuple(segs))


def quad_moment(V, n):
    total = 0.0
    for a, b, _ in V.segments:
        val, _ = quad(lambda x: x**n * V(x), a, b, epsabs=1e-15, epsrel=1e-13, limit=200)
        total += val
    return total


def test_moment_examples():
    V = EdgePotential.well(-1.0, 0.0, 1.0)
    assert potential_moment(V, 0) == -1.0
    assert potential_moment(V, 1) == -0.5


def test_moment_of_linear_potential_pinned_by_quadrature():
    V = EdgePotential.poly(0.0, 2.0, [-1.0, 1.0])
    gx, gw = np.polynomial.legendre.leggauss(10)
    x = 1.0 + gx
    oracle = float(np.sum(gw * x * (x - 1.0)))
    assert oracle == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert potential_moment(V, 1) == pytest.approx(oracle, abs=1e-14)


@settings(max_examples=60, deadline=None)
@given(potentials(), st.integers(0, 4))
def test_moments_match_adaptive_quadrature(V, n):
    exact = potential_moment(V, n)
    oracle = quad_moment(V, n)
    scale = sum(quad(lambda x: abs(x**n * V(x)), a, b, limit=200)[0] for a, b, _ in V.segments)
    assert abs(exact - oracle) <= 1e-12 * max(scale, 1e-300) + 1e-300


def test_moment_order_limit():
    with pytest.raises(ValueError):
        potential_moment(EdgePotential.zero(), 5)


def test_evaluate_inside_and_outside_support():
    V = EdgePotential.poly(1.0, 2.0, [1.0, 2.0])
    assert V(0.5) == 0.0
    assert V(1.5) == 4.0
    assert V(2.0) == 0.0
    np.testing.assert_array_equal(V(np.array([0.0, 1.0, 3.0])), [0.0, 3.0, 0.0])


@pytest.mark.parametrize(
    "segments",
    [((0.0, 1.0, (1.0,)), (0.5, 2.0, (1.0,))), ((1.0, 0.5, (1.0,)),), ((-1.0, 1.0, (1.0,)),), ((0.0, 1.0, (math.nan,)),)],
)
def test_invalid_segments_rejected(segments):
    with pytest.raises(ValueError):
        EdgePotential(segments)


def test_scale_examples():
    W = EdgePotential.well(-3.0, 0.0, 1.0)
    assert scale_potential(W, 0.5) == EdgePotential.well(-6.0, 0.0, 0.5)
    with pytest.raises(ValueError):
        scale_potential(W, 0.0)


@settings(max_examples=40, deadline=None)
@given(potentials(), st.floats(0.01, 2.0))
def test_scaling_preserves_integral_and_scales_first_moment(W, eps):
    Ws = scale_potential(W, eps)
    scale = sum(abs(v) for _, _, c in W.segments for v in c) * 50 + 1.0
    assert potential_moment(Ws, 0) == pytest.approx(potential_moment(W, 0), abs=1e-12 * scale)
    assert potential_moment(Ws, 1) == pytest.approx(eps * potential_moment(W, 1), abs=1e-12 * scale)
    for a, b, _ in W.segments:
        x = 0.5 * (a + b)
        assert Ws(eps * x) == pytest.approx(W(x) / eps, rel=1e-12, abs=1e-9)


def test_unit_square_closed_forms():
    V = EdgePotential.well(1.0, 0.0, 1.0)
    assert abs_distance_integral(V, V) == pytest.approx(1.0 / 3.0, abs=1e-15)
    assert sum_distance_integral(V, V) == pytest.approx(1.0, abs=1e-15)


@settings(max_examples=25, deadline=None)
@given(potentials(max_segments=2, max_degree=2), potentials(max_segments=2, max_degree=2))
def test_abs_distance_integral_against_product_quadrature(f, g):
    exact = abs_distance_integral(f, g)
    oracle = gl_double(f, g, lambda x, y: np.abs(x - y))
    assert exact == pytest.approx(oracle, rel=1e-10, abs=1e-10)
    oracle_sum = gl_double(f, g, lambda x, y: x + y)
    assert sum_distance_integral(f, g) == pytest.approx(oracle_sum, rel=1e-10, abs=1e-10)


def test_odd_extension_is_odd():
    V = EdgePotential.poly(0.5, 2.0, [1.0, -2.0, 0.5])
    segs = odd_extension_segments(V)
    for x in (0.7, 1.3, 1.9):
        left = [np.polynomial.polynomial.polyval(-x, c) for a, b, c in segs if a <= -x < b]
        assert left[0] == pytest.approx(-V(x), rel=1e-14)


def test_negative_part_splits_at_roots():
    V = EdgePotential.poly(0.0, 2.0, [-1.0, 1.0])  # x - 1
    neg = V.negative_part()
    assert neg.segments == ((0.0, 1.0, (1.0, -1.0)),)
    assert potential_moment(neg, 0) == pytest.approx(0.5, abs=1e-15)


def test_sum_merges_overlaps():
    V = EdgePotential.well(-1.0, 0.0, 2.0) + EdgePotential.well(3.0, 1.0, 3.0)
    assert V(0.5) == -1.0 and V(1.5) == 2.0 and V(2.5) == 3.0
    assert potential_moment(V, 0) == pytest.approx(-2.0 + 6.0)


def test_extrema_and_depth():
    V = EdgePotential.poly(0.0, 2.0, [0.0, -2.0, 1.0])  # min -1 at x = 1
    assert V.extrema() == pytest.approx((-1.0, 0.0))
    assert V.max_depth == pytest.approx(1.0)

import math

import numpy as np
import pytest

from stargraph import EdgePotential, NoThresholdError, StarGraph, ZeroNegativePartError
from stargraph.birman_schwinger import (
    bs_kernel,
    bs_matrix,
    bs_spectrum,
    count_bound,
    coupling_threshold,
    principal_eigenvalue,
)
from stargraph.green import star_green
from stargraph.secular import coupling_at

from conftest import wells


def test_zero_potential_kernel():
    pots = [EdgePotential()] * 2
    assert bs_kernel(pots, 1.0, 0, 0.3, 1, 0.5) == 0.0
    assert bs_spectrum(pots, 1.0).size == 0


def test_pointwise_example():
    pots = wells(2)
    want = -(math.sinh(0.2) * math.exp(-0.5) + math.exp(-0.7) / 2)
    assert bs_kernel(pots, 1.0, 0, 0.2, 0, 0.5) == pytest.approx(want, rel=1e-14)


def test_kernel_equals_free_green_times_root_factors():
    pots = [EdgePotential.well(-2.0, 0.0, 1.0), EdgePotential.poly(0.0, 1.5, [-1.0, -1.0]), EdgePotential.well(-0.5, 0.5, 2.0)]
    k = 0.8
    g = StarGraph.free(3, 0.0)
    rng = np.random.default_rng(2)
    for _ in range(30):
        j, l = rng.integers(0, 3, 2)
        x, y = rng.uniform(0, 1.0, 2)
        root = math.sqrt(abs(pots[j](x))) * -math.sqrt(abs(pots[l](y)))
        assert bs_kernel(pots, k, j, x, l, y) == pytest.approx(root * star_green(g, k, j, x, l, y), rel=1e-12, abs=1e-15)


def test_sign_definite_matrix_is_symmetric():
    grid = bs_matrix(wells(3, -2.0), 0.4, 32)
    assert grid.symmetric
    assert grid.matrix.shape == (96, 96)
    vals = bs_spectrum(wells(3, -2.0), 0.4, 32)
    assert np.all(np.isreal(vals))
    assert np.all(np.diff(np.abs(vals)) <= 0)


def test_mixed_sign_uses_general_solver():
    pots = [EdgePotential.well(-1.0, 0.0, 1.0) + EdgePotential.well(1.0, 1.0, 2.0)] * 2
    assert not bs_matrix(pots, 0.5, 16).symmetric
    vals = bs_spectrum(pots, 0.5, 16)
    assert vals.size > 0 and np.all(np.isfinite(vals))


def test_node_count_guard():
    with pytest.raises(ValueError):
        bs_matrix(wells(2), 1.0, 4)


def test_threshold_matches_secular_inverse():
    pots = wells(2)
    g = StarGraph.from_potentials(pots)
    k = 0.05
    assert coupling_threshold(pots, k) == pytest.approx(coupling_at(g, k), abs=1e-6)
    assert principal_eigenvalue(pots, k) == pytest.approx(-1.0 / coupling_at(g, k), rel=1e-5)


def test_repulsive_has_no_threshold():
    with pytest.raises(NoThresholdError):
        coupling_threshold(wells(3, 1.0), 0.3)


@pytest.mark.parametrize("c", [0.5, 3.0])
def test_threshold_scales_inversely(c):
    pots = wells(3, -1.5)
    scaled = [c * p for p in pots]
    assert coupling_threshold(scaled, 0.2) == pytest.approx(coupling_threshold(pots, 0.2) / c, rel=1e-12)


def test_nystrom_converges_at_second_order():
    # the same-edge kernel has a derivative jump on the diagonal, so plain Gauss nodes give O(n^-2)
    pots = wells(3)
    ref = principal_eigenvalue(pots, 0.2, 1024)
    errs = [abs(principal_eigenvalue(pots, 0.2, n) - ref) for n in (32, 64, 128)]
    orders = [math.log2(a / b) for a, b in zip(errs, errs[1:])]
    assert all(1.7 <= o <= 2.5 for o in orders)


def test_count_bound_unit_wells():
    b = count_bound(wells(2))
    assert b.mean_negative == 2.0
    assert b.diag_term == pytest.approx(2.0 / 3.0, abs=1e-15)
    assert b.cross_term == pytest.approx(2.0, abs=1e-15)
    assert b.bound == pytest.approx(5.0 / 3.0, abs=1e-12)


def test_count_bound_ignores_positive_part():
    base = [EdgePotential.well(-0.01, 0.0, 1.0)] * 2
    bumped = [EdgePotential.well(-0.01, 0.0, 1.0) + EdgePotential.well(500.0, 1.0, 3.0)] * 2
    assert count_bound(bumped) == count_bound(base)


def test_count_bound_needs_negative_part():
    with pytest.raises(ZeroNegativePartError):
        count_bound([EdgePotential(), EdgePotential.well(2.0, 0.0, 1.0)])


def test_count_bound_reports_raw_braced_term():
    # a single well on one of four edges: the cross term outweighs the diagonal one
    pots = [EdgePotential.well(-1.0, 0.0, 1.0)] + [EdgePotential()] * 3
    b = count_bound(pots)
    assert b.bound == pytest.approx(1.0 - 1.0 / 12.0, abs=1e-14)

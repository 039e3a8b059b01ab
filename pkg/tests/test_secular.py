import math

import numpy as np
import pytest
from scipy.optimize import brentq

from stargraph import INFINITY, Edge, EdgePotential, PoleError, StarGraph, find_eigenvalues
from stargraph import transfer
from stargraph.secular import coupling_at, default_window, dirichlet_edge_spectrum, secular_function, secular_value

from conftest import wells


def half_line_dirichlet_levels(depth):
    """Roots of sqrt(V0 - k^2) cot sqrt(V0 - k^2) = -k, written as a sine form to avoid cot poles."""
    def f(k):
        q = math.sqrt(depth - k * k)
        return q * math.cos(q) + k * math.sin(q)

    ks = np.linspace(1e-6, math.sqrt(depth) - 1e-9, 20001)
    vals = [f(k) for k in ks]
    return [brentq(f, a, b, xtol=1e-15) for a, b, fa, fb in zip(ks, ks[1:], vals, vals[1:]) if fa * fb < 0]


def test_free_graph_secular_values():
    assert secular_function(StarGraph.free(3), 2.0) == -6.0
    assert secular_function(StarGraph.free(2), 1.0) == -2.0


def test_mixed_graph_against_transfer_matrix():
    well = Edge(EdgePotential.well(-4.0, 0.0, 1.0))
    g = StarGraph((Edge(), well))
    assert secular_function(g, 1.0) == pytest.approx(-1.0 + transfer.log_derivative(well, 1.0), rel=1e-11)


def test_secular_value_marks_pole_edges():
    well = Edge(EdgePotential.well(-4.0, 0.0, 1.0))
    pole = half_line_dirichlet_levels(4.0)[0]
    s = secular_value(StarGraph((Edge(), well, well)), pole)
    assert s.is_pole and s.pole_edges == (1, 2)
    with pytest.raises(PoleError) as info:
        secular_function(StarGraph((Edge(), well)), pole)
    assert info.value.edges == (1,)


@pytest.mark.parametrize("depth", [4.0, 20.0, 60.0])
def test_dirichlet_spectrum_matches_closed_form(depth):
    edge = Edge(EdgePotential.well(-depth, 0.0, 1.0))
    got = dirichlet_edge_spectrum(edge, (1e-6, math.sqrt(depth) + 1))
    want = half_line_dirichlet_levels(depth)
    assert len(got) == len(want)
    np.testing.assert_allclose(got, want, rtol=0, atol=1e-10)


def test_dirichlet_spectrum_empty_for_free_edges():
    assert dirichlet_edge_spectrum(Edge(), (1e-6, 10.0)) == []
    assert dirichlet_edge_spectrum(Edge(EdgePotential(), 1.0, 0.0), (1e-6, 10.0)) == []


@pytest.mark.parametrize("n", [2, 3, 4, 5])
@pytest.mark.parametrize("alpha", [-0.5, -2.0, -7.0])
def test_free_star_closed_form(n, alpha):
    res = find_eigenvalues(StarGraph.free(n, alpha))
    assert res.count == 1
    assert abs(res.kappas[0] + alpha / n) <= 1e-10
    assert res.eigenvalues[0].energy == -res.kappas[0] ** 2


def test_free_star_without_bound_state():
    assert find_eigenvalues(StarGraph.free(3, 0.0)).count == 0
    assert find_eigenvalues(StarGraph.free(3, 1.0)).count == 0


def test_deep_wells_degenerate_level(deep_wells):
    res = find_eigenvalues(deep_wells)
    (level,) = half_line_dirichlet_levels(20.0)
    degenerate = [e for e in res.eigenvalues if e.multiplicity > 1]
    assert len(degenerate) == 1
    assert degenerate[0].multiplicity == deep_wells.n - 1
    assert degenerate[0].kappa == pytest.approx(level, abs=1e-10)
    assert [e.multiplicity for e in res.eigenvalues] == [1, 2, 1]
    assert res.count == 4


@pytest.mark.parametrize("alpha", [-5.0, -1.0, 0.0, 1.0, 5.0])
def test_interlacing_one_root_between_poles(alpha):
    pots = [EdgePotential.well(-9.0, 0.0, 1.0), EdgePotential.well(-25.0, 0.0, 0.8), EdgePotential.well(-14.0, 0.2, 1.5)]
    g = StarGraph.from_potentials(pots, alpha)
    res = find_eigenvalues(g)
    poles = [k for k, _ in res.poles]
    lo, hi = res.search_window
    bounds = [lo] + poles + [hi]
    roots = res.kappas
    for a, b in zip(bounds[1:-1], bounds[2:-1]):
        inside = [k for k in roots if a < k < b]
        assert len(inside) == 1
        # one sign change of M - alpha strictly between the poles
        ks = np.linspace(a, b, 402)[1:-1]
        vals = np.array([secular_value(g, k).m_value for k in ks]) - alpha
        assert np.count_nonzero(np.diff(np.sign(vals))) == 1
    for k in roots:
        assert secular_function(g, k) == pytest.approx(alpha, abs=1e-6 * (1 + abs(alpha)))


def test_ground_state_energy_nondecreasing_in_alpha():
    pots = [EdgePotential.well(-3.0, 0.0, 1.0), EdgePotential.poly(0.0, 2.0, [-2.0, 1.0]), EdgePotential()]
    energies = []
    for alpha in np.linspace(-4, 4, 17):
        res = find_eigenvalues(StarGraph.from_potentials(pots, float(alpha)))
        energies.append(min(res.energies) if res.count else 0.0)
    assert np.all(np.diff(energies) >= -1e-12)


def test_infinite_alpha_pools_edge_levels():
    pots = [EdgePotential.well(-20.0, 0.0, 1.0), EdgePotential.well(-9.0, 0.0, 1.2), EdgePotential.well(-20.0, 0.0, 1.0)]
    g = StarGraph.from_potentials(pots, INFINITY)
    res = find_eigenvalues(g)
    window = default_window(g)
    pooled = sorted(k for p in pots for k in dirichlet_edge_spectrum(Edge(p), window))
    expanded = sorted(e.kappa for e in res.eigenvalues for _ in range(e.multiplicity))
    assert expanded == pooled


def test_finite_edges_supported():
    # Dirichlet far ends on two free edges of length 1: k = -alpha / 2 ... solved by tanh form
    g = StarGraph((Edge(EdgePotential(), 1.0, 0.0), Edge(EdgePotential(), 1.0, 0.0)), -3.0)
    res = find_eigenvalues(g)
    assert res.count == 1
    k = res.kappas[0]
    assert -2.0 * k / math.tanh(k) == pytest.approx(-3.0, abs=1e-10)


def test_coupling_at_inverts_ground_state():
    g = StarGraph.from_potentials(wells(3), 0.0)
    lam = coupling_at(g, 0.3)
    res = find_eigenvalues(g.scaled(lam))
    assert res.ground_state().kappa == pytest.approx(0.3, abs=1e-10)

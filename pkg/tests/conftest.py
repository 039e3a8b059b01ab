import numpy as np
import pytest

from stargraph import EdgePotential, StarGraph


def wells(n, depth=-1.0, a=0.0, b=1.0):
    return [EdgePotential.well(depth, a, b)] * n


def random_attractive_family(rng):
    """One well per edge; depth in [0.1, 20], support inside [0, 3]."""
    n = int(rng.integers(2, 5))
    pots = []
    for _ in range(n):
        depth = rng.uniform(0.1, 20.0)
        a, b = np.sort(rng.uniform(0.0, 3.0, 2))
        pots.append(EdgePotential.well(-depth, a, b))
    return pots


def gl_double(f, g, kernel, order=40):
    """Product Gauss-Legendre on every pair of segments; the diagonal is split so the kink is a cell edge."""
    gx, gw = np.polynomial.legendre.leggauss(order)
    total = 0.0
    for a1, b1, _ in f.segments:
        for a2, b2, _ in g.segments:
            cuts = sorted({a1, b1, a2, b2})
            xs_cells = [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if a1 <= lo and hi <= b1]
            ys_cells = [(lo, hi) for lo, hi in zip(cuts, cuts[1:]) if a2 <= lo and hi <= b2]
            for xl, xh in xs_cells:
                for yl, yh in ys_cells:
                    if (xl, xh) == (yl, yh):
                        # triangle split: integrate y over [xl, x] and [x, xh] for each x node
                        x = 0.5 * (xl + xh) + 0.5 * (xh - xl) * gx
                        wx = 0.5 * (xh - xl) * gw
                        for xi, wi in zip(x, wx):
                            for lo, hi in ((xl, xi), (xi, xh)):
                                y = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gx
                                wy = 0.5 * (hi - lo) * gw
                                total += wi * np.sum(wy * f(xi) * kernel(xi, y) * g(y))
                    else:
                        x = 0.5 * (xl + xh) + 0.5 * (xh - xl) * gx
                        y = 0.5 * (yl + yh) + 0.5 * (yh - yl) * gx
                        w = np.outer(0.5 * (xh - xl) * gw, 0.5 * (yh - yl) * gw)
                        X, Y = np.meshgrid(x, y, indexing="ij")
                        total += np.sum(w * f(X) * kernel(X, Y) * g(Y))
    return total


@pytest.fixture
def deep_wells():
    return StarGraph.from_potentials(wells(3, -20.0), 0.0)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for number in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[number])

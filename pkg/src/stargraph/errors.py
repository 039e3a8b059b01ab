"""Exception hierarchy.

``ConfigError`` covers user input problems; everything deriving from
``NumericalError`` is a failure of a numerical procedure on valid input.
"""
from __future__ import annotations


class StarGraphError(Exception):
    pass


class ConfigError(StarGraphError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)


class NumericalError(StarGraphError, ArithmeticError):
    pass


class PoleError(NumericalError):
    """v_j(0; kappa) vanishes: kappa is a Dirichlet level of the listed edges."""

    def __init__(self, kappa: float, edges: tuple[int, ...] = ()):
        self.kappa = kappa
        self.edges = tuple(edges)
        super().__init__(f"POLE at kappa={kappa!r} on edges {list(self.edges)}")


class AtEigenvalueError(NumericalError):
    def __init__(self, kappa: float, gap: float):
        self.kappa = kappa
        self.gap = gap
        super().__init__(f"AT_EIGENVALUE: |alpha - M(kappa)| = {gap:.3e} at kappa={kappa!r}")


class StiffnessError(NumericalError):
    pass


class WindowTooCoarseError(NumericalError):
    pass


class EigenFailureError(NumericalError):
    pass


class NoThresholdError(NumericalError):
    pass


class ZeroNegativePartError(NumericalError):
    pass


class GridTooCoarseError(NumericalError):
    pass


class NoConvergenceError(NumericalError):
    pass

"""Star graph: N edges glued at one vertex with a delta-type coupling.

On every edge the coordinate starts at the vertex (x = 0) and increases
outward.  The vertex condition is continuity plus
``sum_j psi_j'(0+) = alpha * psi(0)``; ``alpha = INFINITY`` means Dirichlet
at the vertex, i.e. the edges decouple.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace
from typing import Sequence, Union

from .potential import ZERO, EdgePotential


class Coupling(enum.Enum):
    INFINITY = "infinity"

    def __repr__(self):
        return "INFINITY"


INFINITY = Coupling.INFINITY

Alpha = Union[float, Coupling]


@dataclass(frozen=True)
class Edge:
    potential: EdgePotential = ZERO
    length: float = math.inf
    omega: float | None = None

    def __post_init__(self):
        length = float(self.length)
        object.__setattr__(self, "length", length)
        if not length > 0.0:
            raise ValueError(f"edge length must be positive, got {length}")
        if math.isinf(length):
            if self.omega is not None:
                raise ValueError("omega is only meaningful on finite edges")
        else:
            if self.omega is None:
                raise ValueError("finite edges need a far-end angle omega")
            object.__setattr__(self, "omega", float(self.omega))
        if self.potential.segments and self.potential.segments[-1][1] > length:
            raise ValueError(
                f"potential support ends at {self.potential.segments[-1][1]} beyond edge length {length}"
            )

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.length)

    def with_potential(self, potential: EdgePotential) -> "Edge":
        return replace(self, potential=potential)


@dataclass(frozen=True)
class StarGraph:
    edges: tuple[Edge, ...]
    alpha: Alpha = 0.0

    def __post_init__(self):
        edges = tuple(self.edges)
        object.__setattr__(self, "edges", edges)
        if len(edges) < 2:
            raise ValueError(f"a star graph needs at least 2 edges, got {len(edges)}")
        if self.alpha is not INFINITY:
            a = float(self.alpha)
            if not math.isfinite(a):
                raise ValueError("use INFINITY, not a float, for the decoupled case")
            object.__setattr__(self, "alpha", a)

    @classmethod
    def free(cls, n: int, alpha: Alpha = 0.0) -> "StarGraph":
        return cls(tuple(Edge() for _ in range(n)), alpha)

    @classmethod
    def from_potentials(cls, potentials: Sequence[EdgePotential], alpha: Alpha = 0.0) -> "StarGraph":
        """Star of semi-infinite edges carrying the given potentials."""
        return cls(tuple(Edge(p) for p in potentials), alpha)

    @property
    def n(self) -> int:
        return len(self.edges)

    @property
    def decoupled(self) -> bool:
        return self.alpha is INFINITY

    @property
    def all_infinite(self) -> bool:
        return all(e.is_infinite for e in self.edges)

    @property
    def potentials(self) -> tuple[EdgePotential, ...]:
        return tuple(e.potential for e in self.edges)

    def with_alpha(self, alpha: Alpha) -> "StarGraph":
        return replace(self, alpha=alpha)

    def with_potentials(self, potentials: Sequence[EdgePotential]) -> "StarGraph":
        if len(potentials) != self.n:
            raise ValueError("need one potential per edge")
        return replace(self, edges=tuple(e.with_potential(p) for e, p in zip(self.edges, potentials)))

    def scaled(self, lam: float) -> "StarGraph":
        """The graph carrying ``lam * V``."""
        return self.with_potentials([lam * p for p in self.potentials])

    def max_depth(self) -> float:
        return max(e.potential.max_depth for e in self.edges)


@dataclass(frozen=True)
class CouplingScale:
    """Coupling constant multiplying V in H_0(lam V)."""

    lam: float = field(default=1.0)

    def __post_init__(self):
        if not float(self.lam) >= 0.0:
            raise ValueError(f"coupling must be nonnegative, got {self.lam}")

    def apply(self, graph: StarGraph) -> StarGraph:
        return graph.scaled(self.lam)

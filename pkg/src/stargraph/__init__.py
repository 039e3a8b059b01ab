"""Spectra of Schroedinger operators on star graphs with delta vertex coupling."""
from __future__ import annotations

__version__ = "0.1.0"

from .birman_schwinger import (
    BSKernelGrid,
    CountBound,
    bs_kernel,
    bs_matrix,
    bs_spectrum,
    count_bound,
    coupling_threshold,
    principal_eigenvalue,
)
from .config import Config, Experiment, SqueezeSpec, parse_config, parse_potential, serialize_config
from .edge_solver import EdgeSolutionPair, solve_edge
from .errors import (
    AtEigenvalueError,
    ConfigError,
    EigenFailureError,
    GridTooCoarseError,
    NoConvergenceError,
    NoThresholdError,
    NumericalError,
    PoleError,
    StarGraphError,
    StiffnessError,
    WindowTooCoarseError,
    ZeroNegativePartError,
)
from .fd_oracle import FDGrid, build_matrix, count_below, fd_bound_states, lowest_eigenvalues
from .graph import INFINITY, Coupling, CouplingScale, Edge, StarGraph
from .green import StarResolvent, apply_resolvent, edge_green, star_green
from .potential import ZERO, EdgePotential, evaluate_potential, potential_moment, scale_potential
from .secular import Eigenvalue, SpectralResult, coupling_at, find_eigenvalues, secular_function
from .squeeze import SqueezeFamily, kernel_probe_error, squeeze_experiment, squeeze_family
from .weak_coupling import asymptotic_coefficients, existence_condition, kappa_asymptotic, weak_scan

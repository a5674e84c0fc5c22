"""Desk-scale experiments on the two-point concentration of the chromatic
number of sparse random graphs."""
from .coloring import (chromatic_number, count_balanced_colorings, count_colorings,
                       find_k_coloring, is_k_colorable)
from .errors import ConvergenceError, HypothesisError, InfeasibleError, SolverTimeout
from .graphs import (Multigraph, SimpleGraph, derive_seed, load_edgelist, sample_gnm,
                     sample_gnp, simplify)
from .moments import expected_Z, expected_Z2, laplace_scaling_probe, second_moment_ratio
from .thresholds import c_k, k_d, predicted_band, threshold_profile, u_k

__version__ = "0.1.0"

__all__ = [
    "chromatic_number", "count_balanced_colorings", "count_colorings", "find_k_coloring",
    "is_k_colorable", "ConvergenceError", "HypothesisError", "InfeasibleError", "SolverTimeout",
    "Multigraph", "SimpleGraph", "derive_seed", "load_edgelist", "sample_gnm", "sample_gnp",
    "simplify", "expected_Z", "expected_Z2", "laplace_scaling_probe", "second_moment_ratio",
    "c_k", "k_d", "predicted_band", "threshold_profile", "u_k",
]

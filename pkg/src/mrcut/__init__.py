"""Multi-route cut solver.

Find a cheap set of edges (or vertices) whose removal leaves every demand
pair with fewer disjoint paths than its threshold.
"""

from .flow import (
    DisjointPathSet,
    Insufficient,
    edge_connectivity,
    max_flow,
    min_cost_k_flow,
    vertex_connectivity,
    verify_cut,
)
from .graph import (
    Demand,
    Graph,
    Instance,
    InstanceFormatError,
    Removal,
    Semantics,
    parse_instance,
    remove_edges,
    serialize_instance,
    vertex_split_transform,
)
from .lp import FracSolution, Tolerances, separate, solve_lp, solve_restricted_master
from .oracle import brute_force_opt, enumerate_disjoint_path_sets
from .rounding import choose_radius, prune_cut, region_sweep, round_exact

__version__ = "0.1.0"

__all__ = [
    "Demand",
    "DisjointPathSet",
    "FracSolution",
    "Graph",
    "Insufficient",
    "Instance",
    "InstanceFormatError",
    "Removal",
    "Semantics",
    "Tolerances",
    "brute_force_opt",
    "choose_radius",
    "edge_connectivity",
    "enumerate_disjoint_path_sets",
    "max_flow",
    "min_cost_k_flow",
    "parse_instance",
    "prune_cut",
    "region_sweep",
    "remove_edges",
    "round_exact",
    "separate",
    "serialize_instance",
    "solve_lp",
    "solve_restricted_master",
    "verify_cut",
    "vertex_connectivity",
    "vertex_split_transform",
]

"""Optimal binary differentially private mechanisms on dataset graphs."""
from .bounds import (TOL, BoundPair, ClosedFormBound, DpPair, DpParams, FunctionPair,
                     check_suitable, compose_l, compose_u, l_dp, p, tau, u_dp)
from .graph import (Color, DatasetGraph, HittingSet, boundary, default_hitting_set,
                    distance, distances_from, load_graph, validate_hitting_set)
from .synth import (Mechanism, NoExtensionError, PartialMechanism, balanced_value,
                    check_extensible, evaluate, extend, extend_homogeneous)
from .verify import (audit, compare, edge_private, maximality_probe, pairwise_private,
                     random_feasible_search)

__version__ = "0.1.0"

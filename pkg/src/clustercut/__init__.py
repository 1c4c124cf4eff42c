"""Exact 2-means / 2-min-sum solvers via weighted 2-CSP, with hardness-reduction generators."""
from .config import Caps
from .core import (Clustering, Cnf, Graph, PointSet, SymbolicSum, WeightedGraph,
                   count_bad_edges, cut_weight, kmeans_cost, kmeans_cost_centroid, minsum_cost)
from .csp import (Csp2Instance, group_into_three, solve_exact_target, solve_exact_target_naive,
                  triangle_detect)
from .matmul import Kernel, OpCounter, matmul
from .oracles import (SolveReport, Verdict, brute_balanced_maxcut, brute_coloring, brute_kmeans,
                      brute_maxcut, brute_minsum, brute_nae_sat)
from .reductions import (EmbeddedInstance, GadgetGraph, coloring_to_kmeans, conservation_terms,
                         maxcut_to_2means, maxcut_to_2minsum, minsum_to_maxcut, nae3sat_to_maxcut,
                         predicted_2means_cost, predicted_2minsum_cost, predicted_kmeans_cost,
                         verify_badedge_bound)
from .solvers import solve_2means_exact, solve_2minsum_exact, solve_maxcut_fast

__version__ = "0.1.0"

__all__ = [
    "Caps", "Clustering", "Cnf", "Graph", "PointSet", "SymbolicSum", "WeightedGraph",
    "count_bad_edges", "cut_weight", "kmeans_cost", "kmeans_cost_centroid", "minsum_cost",
    "Csp2Instance", "group_into_three", "solve_exact_target", "solve_exact_target_naive",
    "triangle_detect", "Kernel", "OpCounter", "matmul", "SolveReport", "Verdict",
    "brute_balanced_maxcut", "brute_coloring", "brute_kmeans", "brute_maxcut", "brute_minsum",
    "brute_nae_sat", "EmbeddedInstance", "GadgetGraph", "coloring_to_kmeans", "conservation_terms",
    "maxcut_to_2means", "maxcut_to_2minsum", "minsum_to_maxcut", "nae3sat_to_maxcut",
    "predicted_2means_cost", "predicted_2minsum_cost", "predicted_kmeans_cost",
    "verify_badedge_bound", "solve_2means_exact", "solve_2minsum_exact", "solve_maxcut_fast",
]

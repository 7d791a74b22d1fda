"""Graph linearization toolkit: importance-ordered, relabeled edge-list
encodings of graphs plus the synthetic benchmark and evaluation pipeline
built on top of them."""

from .graph import (Graph, build_graph, diameter, linegraph,
                    shortest_path_len)
from .linearize import (Labeling, LinearizationSpec, LinearizedGraph,
                        Ordering, linearize, linearize_via_linegraph,
                        parse_edge_list, random_baseline, render_edge_list)
from .measures import (Method, NodeRanking, PageRankParams, core_numbers,
                       degree_centrality, pagerank, rank_nodes)

__all__ = [
    "Graph", "build_graph", "diameter", "linegraph", "shortest_path_len",
    "Labeling", "LinearizationSpec", "LinearizedGraph", "Ordering",
    "linearize", "linearize_via_linegraph", "parse_edge_list",
    "random_baseline", "render_edge_list",
    "Method", "NodeRanking", "PageRankParams", "core_numbers",
    "degree_centrality", "pagerank", "rank_nodes",
]

__version__ = "0.1.0"

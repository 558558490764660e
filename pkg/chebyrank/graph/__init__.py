"""Graph representation, loaders and generators"""

from chebyrank.graph.core import (
    GraphStats,
    UndirectedGraph,
    build_graph,
    transition_apply,
    validate,
)
from chebyrank.graph.io import load_edge_list, load_graph, load_matrix_market

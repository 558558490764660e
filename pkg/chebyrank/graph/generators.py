"""
Seeded desk-scale graph generators.
Every model returns the same edge set for the same parameters and seed.
"""

import logging

import networkx as nx
import numpy as np

from chebyrank.errors import DomainError
from chebyrank.graph.core import build_graph

logger = logging.getLogger(__name__)

MODELS = ("ring", "star", "regular", "gnp")


def _edge_array(graph):
    edges = np.array(list(graph.edges()), dtype=np.int64).reshape(-1, 2)
    edges = np.sort(edges, axis=1)
    return np.unique(edges, axis=0)


def _rewire_isolated(graph, n, seed):
    """Join every isolated vertex to one uniformly drawn other vertex"""
    rng = np.random.default_rng(seed)
    rewired = 0
    for v in range(n):
        if graph.degree(v) == 0:
            w = int(rng.integers(n - 1))
            if w >= v:
                w += 1
            graph.add_edge(v, w)
            rewired += 1
    if rewired:
        logger.info("gnp: joined %d isolated vertices to random neighbors", rewired)


def generate_edges(model, n, seed=0, k=None, p=None, avg_degree=None):
    """
    Generate the edges of a synthetic undirected graph.

    Arguments
    ---------
    model : str
        "ring", "star", "regular" or "gnp".
    n : int
        number of vertices (at least 2).
    seed : int
        seed of the random models.
    k : int
        degree of the "regular" model.
    p : float
        edge probability of the "gnp" model.
    avg_degree : float
        alternative to p for "gnp": p = avg_degree / (n - 1).

    Returns
    -------
    numpy.ndarray
        (E, 2) array of edges with u < v, sorted.
    """
    if n < 2:
        raise DomainError("graphs need at least 2 vertices, got n=%d" % n)
    if model == "ring":
        if n < 3:
            raise DomainError("rings need at least 3 vertices, got n=%d" % n)
        graph = nx.cycle_graph(n)
    elif model == "star":
        graph = nx.star_graph(n - 1)
    elif model == "regular":
        if k is None or not 1 <= k < n or (n * k) % 2:
            raise DomainError("regular graphs need 1 <= k < n and n*k even (k=%s, n=%d)" % (k, n))
        graph = nx.random_regular_graph(k, n, seed=seed)
    elif model == "gnp":
        if p is None and avg_degree is not None:
            p = avg_degree / (n - 1)
        if p is None or not 0.0 < p <= 1.0:
            raise DomainError("gnp needs an edge probability in (0, 1], got %s" % p)
        graph = nx.fast_gnp_random_graph(n, p, seed=seed)
        _rewire_isolated(graph, n, seed)
    else:
        raise DomainError("unknown graph model %r, expected one of %s" % (model, MODELS))
    return _edge_array(graph)


def generate_graph(model, n, seed=0, k=None, p=None, avg_degree=None):
    """Same as generate_edges, assembled into an UndirectedGraph"""
    edges = generate_edges(model, n, seed=seed, k=k, p=p, avg_degree=avg_degree)
    return build_graph(n, edges[:, 0], edges[:, 1])

import numpy as np
import pytest

from chebyrank.graph.core import build_graph


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run desk-scale tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


def edges_graph(n, pairs, **kwargs):
    pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return build_graph(n, pairs[:, 0], pairs[:, 1], **kwargs)


def random_connected_graph(n, extra_edges, rng):
    """A random spanning tree plus extra_edges random edges"""
    order = rng.permutation(n)
    parents = [order[rng.integers(i)] for i in range(1, n)]
    pairs = list(zip(order[1:], parents))
    pairs += [tuple(rng.integers(n, size=2)) for _ in range(extra_edges)]
    return edges_graph(n, pairs)


@pytest.fixture
def k2():
    return edges_graph(2, [(0, 1)])


@pytest.fixture
def path3():
    return edges_graph(3, [(0, 1), (1, 2)])


@pytest.fixture
def star4():
    return edges_graph(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def cycle4():
    return edges_graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])


@pytest.fixture
def lollipop():
    """Triangle with a two-vertex tail and a self-loop: irregular, not bipartite"""
    return edges_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 5)])


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture
def random_graphs(rng):
    graphs = []
    for _ in range(50):
        n = int(rng.integers(2, 201))
        graphs.append(random_connected_graph(n, int(rng.integers(0, 3 * n)), rng))
    return graphs

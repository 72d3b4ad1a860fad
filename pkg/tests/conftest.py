import numpy as np
import pytest

from arcwalk.graphs import Graph, _arcs_head_sorted, _graph_from_arcs

# 20-vertex heterogeneous graph (degrees 2..4, power-law-ish) whose Fourier
# walk unitary has a fully non-degenerate spectrum (min circular eigenphase
# gap 7.3e-3).  Frozen so the spectral convergence tests are deterministic;
# the scale-free builder itself refuses n < 50.
SMALL_SF_EDGES = [
    (0, 2), (0, 13), (0, 16), (1, 11), (1, 18), (2, 19), (3, 7), (3, 14),
    (4, 5), (4, 7), (4, 15), (5, 10), (5, 14), (5, 16), (6, 12), (6, 13),
    (7, 19), (8, 9), (8, 17), (9, 14), (9, 15), (9, 17), (10, 16), (11, 12),
    (12, 18),
]


def graph_from_edges(n: int, edges) -> Graph:
    adjacency = [[] for _ in range(n)]
    for u, v in edges:
        adjacency[u].append(v)
        adjacency[v].append(u)
    return _graph_from_arcs(n, _arcs_head_sorted(n, adjacency))


@pytest.fixture(scope="session")
def sf20() -> Graph:
    return graph_from_edges(20, SMALL_SF_EDGES)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)

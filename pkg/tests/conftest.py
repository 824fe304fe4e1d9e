import itertools
import random

import networkx as nx
import pytest

from boxperfect.graph import Graph


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    return h


def random_graph(rng: random.Random, n: int, p: float = 0.5) -> Graph:
    edges = [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p]
    return Graph.from_edges(n, edges)


def atlas(max_n: int) -> list[Graph]:
    out = []
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() > max_n:
            break
        out.append(Graph.from_edges(h.number_of_nodes(), list(h.edges())))
    return out


@pytest.fixture
def rng():
    return random.Random(20240611)

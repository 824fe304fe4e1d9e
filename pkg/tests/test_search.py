import random

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher

from boxperfect.constructions import build_named
from boxperfect.graph import Graph, induced_subgraph
from boxperfect.search import (canonical_form, canonical_graph, canonical_hash,
                               canonical_labelling, contains_induced, is_free_of,
                               is_isomorphic)

from conftest import atlas, random_graph, to_nx


def _permuted(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])


def test_contains_induced_against_graphmatcher(rng):
    patterns = [build_named("Pn", [4]), build_named("Cn", [4]), build_named("Kmn", [1, 3]),
                build_named("Cn", [5])]
    for _ in range(40):
        g = random_graph(rng, rng.randint(4, 8))
        for p in patterns:
            emb = contains_induced(g, p)
            expect = GraphMatcher(to_nx(g), to_nx(p)).subgraph_is_isomorphic()
            assert (emb is not None) == expect
            if emb is not None:
                assert len(set(emb)) == p.n
                for a in range(p.n):
                    for b in range(a + 1, p.n):
                        assert p.has_edge(a, b) == g.has_edge(emb[a], emb[b])


def test_contains_induced_is_lexicographically_least():
    g = build_named("Cn", [6])
    assert contains_induced(g, build_named("Pn", [3])) == (0, 1, 2)
    assert contains_induced(g, build_named("Kn", [3])) is None


def test_is_free_of():
    claw = build_named("Kmn", [1, 3])
    assert is_free_of(build_named("Cn", [7]), [claw])
    assert not is_free_of(build_named("Kmn", [1, 4]), [claw])


def test_canonical_form_on_atlas():
    graphs = atlas(6)
    forms = [canonical_form(g) for g in graphs]
    assert len(set(forms)) == len(graphs)


def test_canonical_invariant_under_permutation(rng):
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 9))
        h = _permuted(g, rng)
        assert canonical_form(g) == canonical_form(h)
        assert canonical_hash(g) == canonical_hash(h)
        assert canonical_graph(g) == canonical_graph(h)
        assert is_isomorphic(g, h)


def test_canonical_labelling_is_permutation(rng):
    g = random_graph(rng, 8)
    pos = canonical_labelling(g)
    assert sorted(pos) == list(range(8))
    c = canonical_graph(g)
    assert nx.is_isomorphic(to_nx(c), to_nx(g))


def test_isomorphism_against_networkx(rng):
    for _ in range(60):
        n = rng.randint(1, 7)
        g, h = random_graph(rng, n), random_graph(rng, n)
        assert is_isomorphic(g, h) == nx.is_isomorphic(to_nx(g), to_nx(h))


def test_regular_graphs_distinguished():
    # C6 and two disjoint triangles share the degree sequence
    c6 = build_named("Cn", [6])
    tt = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert canonical_form(c6) != canonical_form(tt)


def test_coloured_forms():
    g = build_named("Pn", [2])
    assert canonical_form(g, [0, 1]) == canonical_form(g, [1, 0])
    k = build_named("Kmn", [1, 2])
    assert canonical_form(k, [0, 1, 1]) != canonical_form(k, [1, 0, 0])


def test_induced_subgraph_embedding_consistency(rng):
    g = random_graph(rng, 8)
    sub = induced_subgraph(g, [1, 3, 4, 6])
    assert contains_induced(g, sub) is not None

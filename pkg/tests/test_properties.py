from hypothesis import given, settings, strategies as st

from boxperfect.cliques import IntMatrix
from boxperfect.graph import Graph, dumps, loads
from boxperfect.search import canonical_form
from boxperfect.tu import is_totally_unimodular, is_tu_bruteforce


@st.composite
def graphs(draw, max_n=8):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, c in zip(pairs, chosen) if c])


@given(graphs())
def test_text_round_trip(g):
    assert loads(dumps(g))[1] == g


@given(graphs(), st.randoms())
def test_canonical_form_ignores_labels(g, rnd):
    perm = list(range(g.n))
    rnd.shuffle(perm)
    h = Graph.from_edges(g.n, [(perm[u], perm[v]) for u, v in g.edges()])
    assert canonical_form(g) == canonical_form(h)


@settings(max_examples=150)
@given(st.integers(1, 5), st.integers(1, 5), st.data())
def test_tu_matches_bruteforce(r, c, data):
    rows = data.draw(st.lists(st.lists(st.sampled_from((-1, 0, 1)), min_size=c, max_size=c),
                              min_size=r, max_size=r))
    m = IntMatrix.of(rows, c)
    fast, slow = is_totally_unimodular(m), is_tu_bruteforce(m)
    assert fast.is_tu == slow.is_tu
    if not fast.is_tu:
        assert len(fast.violator[0]) == len(slow.violator[0])

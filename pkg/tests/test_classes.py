import itertools

import pytest

from boxperfect.boxtdi import RRecord, make_R_certificate, verify_certificate
from boxperfect.classes import (ClassCatalog, contains_q1, enumerate_Q, enumerate_S,
                                minimality_check, q_tags, split_box_perfect_test, split_graphs)
from boxperfect.cliques import IntMatrix
from boxperfect.constructions import build_named
from boxperfect.errors import BudgetExceeded, PreconditionError
from boxperfect.graph import Graph, delete_vertices
from boxperfect.invariants import is_split_bruteforce
from boxperfect.search import canonical_form, is_isomorphic
from boxperfect.tu import is_minimally_non_tu, is_tu_graph

from conftest import atlas


def _q_brute(n: int) -> set:
    forms = set()
    for bits in itertools.product((0, 1), repeat=n * n):
        rows = [bits[i * n:(i + 1) * n] for i in range(n)]
        if not is_minimally_non_tu(IntMatrix.of(rows, n)):
            continue
        edges = [(i, n + j) for i in range(n) for j in range(n) if rows[i][j]]
        forms.add(canonical_form(Graph.from_edges(2 * n, edges), [0] * n + [1] * n))
    return forms


def test_q_small_sides():
    cat = enumerate_Q(3)
    assert len(cat) == 1
    (entry,) = cat
    assert is_isomorphic(entry.graph, build_named("Cn", [6]))
    assert entry.tags == ("Q2",)
    assert len(enumerate_Q(2)) == 0


@pytest.mark.parametrize("n", [3, 4])
def test_q_against_bruteforce(n):
    ours = {canonical_form(e.graph, [0] * n + [1] * n)
            for e in enumerate_Q(n) if len(e.record["U"]) == n}
    assert ours == _q_brute(n)


def test_q_members_satisfy_necessary_conditions():
    for e in enumerate_Q(5):
        g = e.graph
        assert all(g.degree(v) % 2 == 0 for v in range(g.n))
        assert g.m % 4 == 2
        assert is_minimally_non_tu(IntMatrix.of(e.record["M"]))


def test_q_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_Q(6)


def test_q_tags():
    c6 = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    assert q_tags(c6) == ("Q2",)
    full = next(e.record["M"] for e in enumerate_Q(4) if e.tags == ("Q1",))
    assert q_tags(full) == ("Q1",)
    assert contains_q1(c6) is None
    assert contains_q1(c6 + [[1, 1, 1]]) is None
    assert contains_q1(full) == ((0, 1, 2, 3), (0, 1, 2, 3))


def test_catalog_round_trip():
    cat = enumerate_Q(4)
    again = ClassCatalog.loads("Q", cat.dumps())
    assert [e.to_json() for e in again] == [e.to_json() for e in cat]
    assert cat.dumps() == enumerate_Q(4).dumps()


def test_s_members():
    cat = enumerate_S(10)
    sizes = [(e.graph.n, e.graph.m) for e in cat]
    assert sizes[0] == (6, 9)
    assert len(set(e.hash for e in cat)) == len(cat)
    assert any(is_isomorphic(e.graph, build_named("S_n", [3])) for e in cat)
    assert any(is_isomorphic(e.graph, build_named("S_n", [5])) for e in cat)
    for e in cat:
        assert is_split_bruteforce(e.graph)
        assert e.tags in (("Q1",), ("Q2",))
        assert RRecord.from_json(e.record["R"]).m >= 1
    with pytest.raises(BudgetExceeded):
        enumerate_S(12)


def test_split_graph_counts():
    graphs = split_graphs(7)
    counts = [sum(1 for g in graphs if g.n == k) for k in range(1, 8)]
    assert counts == [1, 2, 4, 9, 21, 56, 164]
    assert len(graphs) == 257
    assert all(is_split_bruteforce(g) for g in graphs)


def test_split_graphs_cover_atlas():
    forms = {canonical_form(g) for g in split_graphs(6)}
    for g in atlas(6):
        assert (canonical_form(g) in forms) == is_split_bruteforce(g)


def test_split_box_perfect_test():
    cat = enumerate_S(8)
    rep = split_box_perfect_test(build_named("S_n", [3]), cat, with_esp=True)
    assert rep == {"tu": False, "s_free": False, "s_witness": rep["s_witness"], "esp": False,
                   "divergence": False}
    rep = split_box_perfect_test(build_named("Kn", [4]), cat, with_esp=True)
    assert rep["tu"] and rep["s_free"] and rep["esp"] and not rep["divergence"]
    with pytest.raises(PreconditionError):
        split_box_perfect_test(build_named("Cn", [5]), cat)


def test_split_tu_matches_s_freeness():
    cat = enumerate_S(8)
    for g in split_graphs(7):
        rep = split_box_perfect_test(g, cat)
        assert not rep["divergence"], rep


def test_minimality():
    assert minimality_check(build_named("S_n", [3]))
    assert minimality_check(build_named("barS3plus"))
    assert not minimality_check(build_named("C10C5e"))
    e = next(e for e in enumerate_S(6))
    assert minimality_check(e.graph, RRecord.from_json(e.record["R"]))


def test_s_members_certified_and_minimal():
    for e in enumerate_S(10):
        g = e.graph
        rec = RRecord.from_json(e.record["R"])
        assert verify_certificate(g, make_R_certificate(g, rec), exhaustive_dual=True).passed
        assert all(is_tu_graph(delete_vertices(g, [v])).is_tu for v in range(g.n))


def test_q2_readings_agree_at_desk_scale():
    strict = [(e.hash, e.tags) for e in enumerate_Q(5)]
    loose = [(e.hash, e.tags) for e in enumerate_Q(5, side_respecting=False)]
    assert strict == loose

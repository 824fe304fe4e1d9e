import itertools

import networkx as nx
import pytest

from boxperfect.config import Budgets
from boxperfect.constructions import build_named
from boxperfect.errors import BudgetExceeded, PreconditionError
from boxperfect.graph import Graph, complement, induced_subgraph
from boxperfect.invariants import (chromatic_number, clique_cover_number, clique_number,
                                   is_claw_free, is_comparability, is_incomparability,
                                   is_parity, is_perfect, is_perfect_bruteforce,
                                   is_q_perfect, is_split, is_split_bruteforce,
                                   is_totally_perfect, max_weight_stable_set, parameters,
                                   q_perfect_report, stability_number,
                                   transitive_orientation)

from conftest import atlas, random_graph, to_nx


def _omega_nx(g: Graph) -> int:
    return max((len(c) for c in nx.find_cliques(to_nx(g))), default=0)


def _chi_brute(g: Graph) -> int:
    for k in range(g.n + 1):
        for col in itertools.product(range(k), repeat=g.n):
            if all(col[u] != col[v] for u, v in g.edges()):
                return k
    return g.n


def _split_degree_test(g: Graph) -> bool:
    # degree-sequence characterisation of split graphs
    d = sorted((g.degree(v) for v in range(g.n)), reverse=True)
    if not d:
        return True
    m = max(i + 1 for i in range(g.n) if d[i] >= i)
    return sum(d[:m]) == m * (m - 1) + sum(d[m:])


def test_stability_against_networkx(rng):
    for _ in range(60):
        g = random_graph(rng, rng.randint(0, 11), rng.random())
        alpha = stability_number(g)
        assert alpha == _omega_nx(complement(g))
        assert clique_number(g) == _omega_nx(g)


def test_weighted_stable_set(rng):
    for _ in range(40):
        g = random_graph(rng, rng.randint(1, 8))
        w = [rng.randint(0, 5) for _ in range(g.n)]
        best, wit = max_weight_stable_set(g, w)
        brute = max(sum(w[v] for v in s) for k in range(g.n + 1)
                    for s in itertools.combinations(range(g.n), k)
                    if all(not g.has_edge(a, b) for a, b in itertools.combinations(s, 2)))
        assert best == brute == sum(w[v] for v in wit)
    with pytest.raises(PreconditionError):
        max_weight_stable_set(build_named("Pn", [3]), [1])


def test_chromatic_against_bruteforce(rng):
    for _ in range(40):
        g = random_graph(rng, rng.randint(0, 7))
        assert chromatic_number(g) == _chi_brute(g)
        assert clique_cover_number(g) == _chi_brute(complement(g))


def test_parameters_named():
    p = parameters(build_named("Cn", [5]))
    assert p.to_dict() == {"alpha": 2, "omega": 2, "chi": 3, "chibar": 3}


def test_chromatic_budget():
    with pytest.raises(BudgetExceeded):
        chromatic_number(build_named("Cn", [9]), Budgets(chi_max_n=5))


def test_perfect_on_atlas():
    for g in atlas(7):
        ok, wit = is_perfect(g)
        assert ok == is_perfect_bruteforce(g)
        if not ok:
            h = induced_subgraph(g, wit["cycle"])
            if wit["kind"] == "antihole":
                h = complement(h)
            assert h.n >= 5 and h.n % 2 == 1 and all(h.degree(v) == 2 for v in range(h.n))


def test_split_on_atlas():
    for g in atlas(7):
        res = is_split(g)
        assert (res is not None) == is_split_bruteforce(g) == _split_degree_test(g)
        if res is not None:
            k, s = res
            assert sorted(k + s) == list(range(g.n))
            assert g.is_clique(sum(1 << v for v in k)) and g.is_stable(sum(1 << v for v in s))


def test_claw_free():
    assert not is_claw_free(build_named("Kmn", [1, 3]))
    assert is_claw_free(build_named("Cn", [6]))
    for g in atlas(6):
        expect = not any(
            all(g.has_edge(c, x) for x in leaves) and
            all(not g.has_edge(a, b) for a, b in itertools.combinations(leaves, 2))
            for c in range(g.n) for leaves in itertools.combinations(
                [v for v in range(g.n) if v != c], 3))
        assert is_claw_free(g) == expect


def _parity_brute(g: Graph) -> bool:
    h = to_nx(g)
    for u, v in itertools.combinations(range(g.n), 2):
        lens = set()
        for p in nx.all_simple_paths(h, u, v):
            if nx.is_isomorphic(h.subgraph(p), nx.path_graph(len(p))):
                lens.add(len(p) % 2)
        if len(lens) > 1:
            return False
    return True


def test_parity_against_bruteforce():
    for g in atlas(6):
        ok, wit = is_parity(g)
        assert ok == _parity_brute(g)
        if not ok:
            a, b = wit
            assert (len(a) - len(b)) % 2 == 1


def _comparability_brute(g: Graph) -> bool:
    edges = g.edges()
    for dirs in itertools.product((0, 1), repeat=len(edges)):
        arcs = {(u, v) if d == 0 else (v, u) for (u, v), d in zip(edges, dirs)}
        if all((a, c) in arcs for a, b in arcs for b2, c in arcs if b == b2 and a != c):
            return True
    return False


def test_comparability_against_bruteforce():
    for g in atlas(5):
        orient = transitive_orientation(g)
        assert (orient is not None) == _comparability_brute(g)
        if orient is not None:
            assert orient.is_transitive_for(g)
        assert is_incomparability(g) == is_comparability(complement(g))


def test_comparability_named():
    assert not is_comparability(build_named("Cn", [5]))
    assert is_comparability(build_named("Cn", [6]))


def _q_brute(g: Graph, q: int) -> tuple[int, int]:
    alpha_q = max(len(x) for k in range(g.n + 1) for x in itertools.combinations(range(g.n), k)
                  if _chi_brute(induced_subgraph(g, x)) <= q)
    chibar_q = min(q * _chi_brute(complement(induced_subgraph(g, [v for v in range(g.n) if v not in x])))
                   + len(x) for k in range(g.n + 1) for x in itertools.combinations(range(g.n), k))
    return alpha_q, chibar_q


def test_q_perfect_report_against_bruteforce(rng):
    for _ in range(12):
        g = random_graph(rng, rng.randint(1, 6))
        for q in (1, 2):
            rep = q_perfect_report(g, q)
            assert (rep.alpha_q, rep.chibar_q) == _q_brute(g, q)


def test_q_perfect_named():
    c5 = build_named("Cn", [5])
    assert not is_q_perfect(c5, 1)[0]
    assert is_q_perfect(build_named("Cn", [6]), 2)[0]
    ok, wit = is_totally_perfect(c5)
    assert not ok and wit[0] == 1
    assert is_totally_perfect(build_named("Kmn", [2, 3]))[0]

import itertools

import pytest

from boxperfect.cliques import clique_matrix, maximal_cliques
from boxperfect.constructions import build_named
from boxperfect.errors import ParseError, PreconditionError
from boxperfect.graph import Digraph, Graph, Multigraph, complement
from boxperfect.esp import (CliqueMultiset, CoverOracle, check_degree_split,
                            check_equitable_subpartition, circulation_split,
                            consecutive_clique_family, find_equitable_subpartition,
                            incomparability_partition, is_circulation, is_esp,
                            is_strong_esp, matching_degree_split)
from boxperfect.invariants import is_perfect, transitive_orientation

from conftest import atlas, random_graph


def _all_cliques(g: Graph) -> list[int]:
    return [m for m in range(1, 1 << g.n) if g.is_clique(m)]


def _multisets(items, k):
    return itertools.combinations_with_replacement(items, k)


def _kappa_brute(g: Graph, t) -> int:
    fam = list(maximal_cliques(g).cliques)
    for k in range(sum(t) + 1):
        for combo in _multisets(fam, k):
            cov = [sum(c >> v & 1 for c in combo) for v in range(g.n)]
            if all(a >= b for a, b in zip(cov, t)):
                return k
    raise AssertionError("no cover")


def _esp_brute(g: Graph, lam: CliqueMultiset) -> bool:
    cl = _all_cliques(g)
    for a in range(lam.size + 1):
        for b in range(lam.size - a + 1):
            for l1 in _multisets(cl, a):
                for l2 in _multisets(cl, b):
                    if check_equitable_subpartition(g, lam, CliqueMultiset.of(l1),
                                                    CliqueMultiset.of(l2))[0]:
                        return True
    return False


def test_kappa_against_bruteforce(rng):
    for _ in range(30):
        g = random_graph(rng, rng.randint(1, 5))
        oracle = CoverOracle(g)
        t = [rng.randint(0, 2) for _ in range(g.n)]
        assert oracle.kappa(t) == _kappa_brute(g, t)
        cover = oracle.cover(t)
        assert len(cover) == oracle.kappa(t)
        assert [sum(c >> v & 1 for c in cover) for v in range(g.n)] == t
        assert all(g.is_clique(c) for c in cover)


def test_equitable_subpartition_against_bruteforce(rng):
    checked = 0
    for _ in range(25):
        g = random_graph(rng, rng.randint(2, 4), 0.6)
        fam = list(maximal_cliques(g).cliques)
        lam = CliqueMultiset.of(rng.choices(fam, k=rng.randint(1, 3)))
        res = find_equitable_subpartition(g, lam)
        assert (res is not None) == _esp_brute(g, lam)
        if res is not None:
            assert check_equitable_subpartition(g, lam, res.part1, res.part2)[0]
        checked += 1
    assert checked == 25


def test_odd_cycle_has_no_subpartition():
    c5 = build_named("Cn", [5])
    lam = CliqueMultiset.of(maximal_cliques(c5).cliques)
    assert find_equitable_subpartition(c5, lam) is None
    assert not is_esp(c5)[0]


def test_check_conditions_named():
    g = build_named("Kn", [2])
    lam = CliqueMultiset.of([[0, 1], [0, 1]])
    one = CliqueMultiset.of([[0, 1]])
    assert check_equitable_subpartition(g, lam, one, one) == (True, None)
    assert check_equitable_subpartition(g, lam, one, CliqueMultiset.of([])) == (False, ("ii", 0))
    two = CliqueMultiset.of([[0, 1], [0, 1]])
    assert check_equitable_subpartition(g, lam, two, one) == (False, ("i", None))
    assert check_equitable_subpartition(g, lam, two, CliqueMultiset.of([]))[1] == ("iii", 0)


def test_clique_multiset_round_trip():
    lam = CliqueMultiset.of([[0, 1], [2], [0, 1]])
    assert lam.size == 3 and lam.entries == ((0b11, 2), (0b100, 1))
    assert CliqueMultiset.loads(lam.dumps()) == lam
    with pytest.raises(ParseError) as exc:
        CliqueMultiset.loads("k 1 0\nx 2\n")
    assert exc.value.line == 2
    with pytest.raises(PreconditionError):
        CliqueMultiset.of([[0, 2]]).check_cliques(build_named("Pn", [3]))


def test_direct_and_reform_agree():
    for g in atlas(5):
        if not is_perfect(g)[0]:
            continue
        assert is_esp(g, "direct")[0] == is_esp(g, "perfect-reform")[0]


def test_reform_needs_perfect():
    with pytest.raises(PreconditionError):
        is_esp(build_named("Cn", [5]), "perfect-reform")
    with pytest.raises(PreconditionError):
        is_esp(build_named("Cn", [5]), "nope")


def test_known_esp_verdicts():
    assert is_esp(build_named("Cn", [6]))[0]
    assert is_esp(build_named("Kmn", [2, 3]))[0]
    ok, wit = is_esp(build_named("S_n", [3]))
    assert not ok and wit["Lambda"]
    assert not is_esp(build_named("barS3plus", []))[0]


def test_strong_implies_esp():
    for g in atlas(5):
        if is_strong_esp(g)[0]:
            assert is_esp(g)[0]


def test_incomparability_partition(rng):
    done = 0
    for g in atlas(6):
        orient = transitive_orientation(complement(g))
        if orient is None:
            continue
        _, c = clique_matrix(g)
        d = [rng.randint(0, x) for x in c]
        d1, d2 = incomparability_partition(g, orient, d)
        assert [a + b for a, b in zip(d1, d2)] == d
        assert all(x // 2 <= a <= (x + 1) // 2 for a, x in zip(d1, d))
        done += 1
    assert done > 50
    g = build_named("Pn", [3])
    orient = transitive_orientation(complement(g))
    with pytest.raises(PreconditionError):
        incomparability_partition(g, orient, [5, 0, 0])


def test_consecutive_clique_family():
    # two cliques {0,1,2} and {3,4} with a few edges between them
    g = Graph.from_edges(5, [(0, 1), (0, 2), (1, 2), (3, 4), (0, 3), (0, 4), (1, 3)])
    lam = CliqueMultiset.of([[0, 1, 3], [0, 3, 4], [0, 1, 2]])
    fam = consecutive_clique_family(g, lam, [0, 1, 2], [3, 4])
    d = lam.degrees(5)
    assert len(fam) == 3 and all(g.is_clique(q) for q in fam)
    assert [sum(q >> v & 1 for q in fam) for v in range(5)] == d
    for v in (0, 1, 2):
        assert all(fam[i] >> v & 1 for i in range(d[v]))
    with pytest.raises(PreconditionError):
        consecutive_clique_family(g, lam, [0, 1], [2, 3, 4])


def _random_circulation(rng, n):
    arcs, f = [], []
    for _ in range(rng.randint(1, 4)):
        cyc = rng.sample(range(n), rng.randint(2, n))
        k = rng.randint(1, 3)
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            arcs.append((a, b, 1))
            f.append(k)
    return Digraph.from_arcs(n, arcs), f


def test_circulation_split(rng):
    for _ in range(40):
        dg, f = _random_circulation(rng, rng.randint(2, 6))
        f1, f2 = circulation_split(dg, f)
        assert is_circulation(dg, f1) and is_circulation(dg, f2)
        assert all(x // 2 <= a <= (x + 1) // 2 for a, x in zip(f1, f))
    dg = Digraph.from_arcs(2, [(0, 1, 1)])
    with pytest.raises(PreconditionError):
        circulation_split(dg, [1])


def test_matching_degree_split(rng):
    for _ in range(40):
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        pairs = [(i, a + j, rng.randint(1, 4)) for i in range(a) for j in range(b)
                 if rng.random() < 0.6]
        if not pairs:
            continue
        h = Multigraph.from_pairs(a + b, pairs)
        res = matching_degree_split(h)
        assert res is not None
        mu = [k for _, k in h.mult]
        assert check_degree_split(h, mu, *res) == (True, None)


def test_matching_degree_split_rejects_odd_cycle():
    tri = Multigraph.from_pairs(3, [(0, 1, 1), (1, 2, 1), (0, 2, 1)])
    with pytest.raises(PreconditionError):
        matching_degree_split(tri)

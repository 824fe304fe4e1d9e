"""Acceptance checks, numbered 1 to 11.

Each check returns a CheckResult. Random corpora are drawn from a seeded
generator, so a given seed always yields the same instances and verdicts.
"""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Callable

import networkx as nx

from .boxtdi import (BoxCertificate, box_tdi_falsify_search, build_R_graph,
                     make_R_certificate, verify_certificate)
from .classes import enumerate_Q, enumerate_S, split_box_perfect_test, split_graphs
from .config import Budgets, DEFAULT
from .constructions import build_named, is_simplicial, simplicial_sum
from .esp import circulation_split, is_esp, is_strong_esp, matching_degree_split
from .graph import Digraph, Graph, Multigraph, duplicate_vertex, induced_subgraph, iter_bits
from .invariants import (is_comparability, is_incomparability, is_perfect,
                         q_perfect_report)
from .search import is_isomorphic
from .tu import is_tu_graph


@dataclass
class CheckResult:
    number: int
    title: str
    ok: bool
    seconds: float
    limit: float
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"[{status}] criterion {self.number}: {self.title} ({self.seconds:.1f}s, limit {self.limit:.0f}s)"
        if self.details:
            text += " | " + "; ".join(self.details)
        return text

    def to_json(self) -> dict:
        return {"number": self.number, "title": self.title, "ok": self.ok,
                "seconds": round(self.seconds, 3), "limit": self.limit, "details": self.details}


def atlas_graphs(max_n: int) -> list[Graph]:
    """Every graph on 1..max_n vertices (max_n <= 7), one per isomorphism class."""
    out = []
    for h in nx.graph_atlas_g()[1:]:
        if h.number_of_nodes() <= max_n:
            out.append(Graph.from_edges(h.number_of_nodes(), h.edges()))
    return out


def _complete(k: int) -> Graph:
    return Graph.from_edges(k, combinations(range(k), 2))


def _cycle_bipartite(k: int) -> tuple[Graph, list[int], list[int]]:
    edges = [(i, k + i) for i in range(k)] + [(i, k + (i + 1) % k) for i in range(k)]
    return Graph.from_edges(2 * k, edges), list(range(k)), list(range(k, 2 * k))


def h_certificate() -> tuple[Graph, BoxCertificate]:
    """The eight-vertex graph H (labels 1..8 at indices 0..7) and its certificate."""
    h = build_named("C10C5e_H")
    half, quarter = Fraction(1, 2), Fraction(1, 4)
    rows = ((0, 1, 2), (0, 1, 5), (1, 2, 6), (2, 3, 7), (3, 4), (0, 4))
    cert = BoxCertificate(
        rows,
        (1, 1, 1, 1, 1, 0, 0, 0),
        (0, 0, 0, 0, 0, half, half, half),
        (quarter, quarter, quarter, quarter, 3 * quarter, half, half, half),
        (Fraction(0), half, half, half, half, half),
        (Fraction(0),) * 5 + (half, half, half),
        Fraction(7, 4),
    )
    return h, cert


def r_pipeline_inputs() -> dict[str, tuple[Graph, list[int], list[int], Graph, Graph]]:
    """(G', U, V, G'', expected graph) for S_3, S_5 and barS3plus."""
    out = {}
    for k in (3, 5):
        gp, us, vs = _cycle_bipartite(k)
        out[f"S_{k}"] = (gp, us, vs, _complete(k), build_named("S_n", [k]))
    gp = Graph.from_edges(8, [(4, 0), (4, 1), (5, 0), (5, 2), (6, 0), (6, 3),
                              (7, 0), (7, 1), (7, 2), (7, 3)])
    out["barS3plus"] = (gp, [4, 5, 6, 7], [0, 1, 2, 3], _complete(4), build_named("barS3plus"))
    return out


# criteria

def check_1(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    h, cert = h_certificate()
    rep = verify_certificate(h, cert, exhaustive_dual=True, budgets=budgets)
    bad = []
    if not rep.passed:
        bad.append(f"failed checks {rep.failed}")
    if rep.value != Fraction(7, 4):
        bad.append(f"value {rep.value}")
    if rep.integral_dual is None or rep.integral_dual < 2:
        bad.append(f"integral dual optimum {rep.integral_dual}")
    return bad, [f"value 7/4, integral dual optimum {rep.integral_dual}"]


def check_2(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad, notes = [], []
    for name, (gp, us, vs, g2, expected) in r_pipeline_inputs().items():
        g, rec = build_R_graph(gp, us, vs, g2, budgets)
        if not is_isomorphic(g, expected):
            bad.append(f"{name}: constructed graph has the wrong isomorphism type")
        p = 5 if name == "S_3" else None
        cert = make_R_certificate(g, rec, p, budgets)
        rep = verify_certificate(g, cert, exhaustive_dual=True, budgets=budgets)
        if not rep.passed:
            bad.append(f"{name}: failed {rep.failed}")
        if name == "S_3" and cert.value != Fraction(3, 10):
            bad.append(f"S_3 value {cert.value} != 3/10")
        notes.append(f"{name} value {cert.value} dual {rep.integral_dual}")
    return bad, notes


def _chi_brute(g: Graph, mask: int) -> int:
    verts = list(iter_bits(mask))
    if not verts:
        return 0
    for k in range(1, len(verts) + 1):
        for colours in product(range(k), repeat=len(verts)):
            col = dict(zip(verts, colours))
            if all(col[u] != col[v] for u in verts for v in iter_bits(g.adj[u] & mask)):
                return k
    return len(verts)


def _q_brute(g: Graph, q: int) -> tuple[int, int]:
    comp = [(((1 << g.n) - 1) & ~g.adj[v] & ~(1 << v)) for v in range(g.n)]
    gbar = Graph(g.n, tuple(comp))
    full = (1 << g.n) - 1
    alpha = max(bin(x).count("1") for x in range(1 << g.n) if _chi_brute(g, x) <= q)
    chibar = min(q * _chi_brute(gbar, full & ~x) + bin(x).count("1") for x in range(1 << g.n))
    return alpha, chibar


def check_3(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    g = build_named("S_n", [3])
    rep = q_perfect_report(g, 2, budgets)
    oracle = _q_brute(g, 2)
    bad = []
    if (rep.alpha_q, rep.chibar_q) != (4, 5):
        bad.append(f"report gives alpha_2={rep.alpha_q}, chibar_2={rep.chibar_q}")
    if oracle != (4, 5):
        bad.append(f"brute force gives {oracle}")
    return bad, ["alpha_2 = 4, chibar_2 = 5 (report and brute force)"]


def check_4(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    cat = enumerate_S(7, budgets)
    graphs = split_graphs(7)
    div = []
    for g in graphs:
        rep = split_box_perfect_test(g, cat, budgets=budgets)
        if rep["divergence"]:
            div.append(str(g.edges()))
    bad = [f"divergence on {len(div)} graphs, first {div[0]}"] if div else []
    return bad, [f"{len(graphs)} split graphs, {len(cat)} members of S"]


def check_5(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad = []
    cat = enumerate_Q(5, budgets)
    for e in cat:
        g = e.graph
        k = len(e.record["U"])
        if len(e.record["V"]) != k:
            bad.append(f"{e.hash}: unequal sides")
        if any(g.degree(v) % 2 for v in range(g.n)):
            bad.append(f"{e.hash}: not Eulerian")
        if g.m % 4 != 2:
            bad.append(f"{e.hash}: {g.m} edges")
    small = enumerate_Q(3, budgets)
    if len(small) != 1 or not is_isomorphic(small.members[0].graph, build_named("Cn", [6])):
        bad.append("enumerate_Q(3) is not exactly {C_6}")
    return bad, [f"{len(cat)} members up to side 5; side <= 3 gives C_6 only"]


def check_6(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad = []
    count = 0
    for g in atlas_graphs(6):
        if not is_perfect(g, budgets)[0]:
            continue
        count += 1
        a = is_esp(g, "direct", budgets)[0]
        b = is_esp(g, "perfect-reform", budgets)[0]
        if a != b:
            bad.append(f"{g.edges()}: direct {a}, reform {b}")
    ok, wit = is_esp(build_named("S_n", [3]), "perfect-reform", budgets)
    if ok or list(wit["d"]) != [1, 2, 1, 2, 1, 2]:
        bad.append(f"S_3 reform verdict {ok} witness {wit}")
    return bad, [f"{count} perfect graphs agree; S_3 fails at d = (1,2,1,2,1,2)"]


def check_7(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    corpus = atlas_graphs(7)
    classes: list[tuple[str, Callable, Callable]] = [
        ("TU", lambda g: is_tu_graph(g, budgets).is_tu, lambda g: is_esp(g, "direct", budgets)[0]),
        ("incomparability", lambda g: is_incomparability(g, budgets), lambda g: is_esp(g, "direct", budgets)[0]),
        ("comparability", lambda g: is_comparability(g, budgets), lambda g: is_strong_esp(g, budgets)[0]),
    ]
    bad, notes = [], []
    for name, member, prop in classes:
        pool = [g for g in corpus if member(g)]
        sample = rng.sample(pool, min(100, len(pool)))
        fails = [g for g in sample if not prop(g)]
        if fails:
            bad.append(f"{name}: {len(fails)} failures, first {fails[0].edges()}")
        notes.append(f"{name} {len(sample)}/{len(pool)}")
    return bad, notes


def _random_circulation(rng: random.Random) -> tuple[Digraph, list[int]]:
    n = rng.randint(2, 8)
    arcs: dict[tuple[int, int], int] = {}
    for _ in range(rng.randint(1, 4)):
        length = rng.randint(2, n)
        cyc = rng.sample(range(n), length)
        k = rng.randint(1, 2)
        for i in range(length):
            a = (cyc[i], cyc[(i + 1) % length])
            arcs[a] = arcs.get(a, 0) + k
    keys = sorted(arcs)
    return Digraph.from_arcs(n, [(u, v, 1) for u, v in keys]), [arcs[a] for a in keys]


def _conserved(n: int, arcs, f) -> bool:
    bal = [0] * n
    for (u, v), x in zip(arcs, f):
        bal[u] -= x
        bal[v] += x
    return not any(bal)


def _random_class_c(rng: random.Random) -> Graph:
    length = rng.choice((4, 6, 8))
    xs = []
    for v in rng.sample(range(length), length):
        if all(abs(v - x) % length not in (1, length - 1) for x in xs) and rng.random() < 0.5:
            xs.append(v)
    xs.sort()
    counts = [rng.randint(0, 2) for _ in xs]
    return build_named("classC", [length, len(xs)] + xs + counts)


def check_8(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad = []
    circ = 0
    while circ < 500:
        dg, f = _random_circulation(rng)
        keys = [(u, v) for u, v, _ in dg.arcs]
        if max(f) > 5:
            continue
        circ += 1
        f1, f2 = circulation_split(dg, f)
        if any(a + b != c for a, b, c in zip(f1, f2, f)):
            bad.append(f"sum fails on {keys} {f}")
        if any(not (c // 2 <= a <= (c + 1) // 2) for a, c in zip(f1 + f2, f + f)):
            bad.append(f"bounds fail on {keys} {f}")
        if not (_conserved(dg.n, keys, f1) and _conserved(dg.n, keys, f2)):
            bad.append(f"conservation fails on {keys} {f}")
    k33 = build_named("Kmn", [3, 3])
    for i in range(200):
        h = k33 if i % 5 == 0 else _random_class_c(rng)
        mg = Multigraph.from_graph(h)
        mu = [rng.randint(0, 3) for _ in mg.mult]
        res = matching_degree_split(mg, mu)
        if res is None:
            bad.append(f"no split for {h.edges()} mu={mu}")
            continue
        mu1, mu2 = res
        why = _degree_clauses(h.n, [p for p, _ in mg.mult], mu, mu1, mu2)
        if why:
            bad.append(f"{why} on {h.edges()} mu={mu}")
    return bad[:5], ["500 circulations and 200 multigraphs split correctly"]


def _degree_clauses(n: int, pairs, mu, mu1, mu2) -> str | None:
    def delta(vec):
        deg = [0] * n
        for (u, v), k in zip(pairs, vec):
            deg[u] += k
            deg[v] += k
        return max(deg, default=0)
    d = delta(mu)
    if any(a + b != c for a, b, c in zip(mu1, mu2, mu)):
        return "mu1 + mu2 != mu"
    if any(min(a, b) < c // 2 for a, b, c in zip(mu1, mu2, mu)):
        return "an edge gets less than floor(mu/2) on one side"
    if delta(mu1) > (d + 1) // 2:
        return "Delta(mu1) too large"
    if delta(mu2) > d // 2:
        return "Delta(mu2) too large"
    return None


def _random_graph(rng: random.Random, lo: int, hi: int) -> Graph:
    n = rng.randint(lo, hi)
    p = rng.choice((0.3, 0.5, 0.7))
    return Graph.from_edges(n, [e for e in combinations(range(n), 2) if rng.random() < p])


def check_9(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad = []
    done = 0
    while done < 100:
        g = _random_graph(rng, 2, 6)
        if not is_esp(g, "direct", budgets)[0]:
            continue
        done += 1
        v = rng.randrange(g.n)
        flag = rng.random() < 0.5
        h = duplicate_vertex(g, v, flag)
        if not is_esp(h, "direct", budgets)[0]:
            bad.append(f"duplication of {v} ({flag}) in {g.edges()}")
    done = 0
    while done < 100:
        g1 = _random_graph(rng, 3, 6)
        g2 = _random_graph(rng, 3, 6)
        s1 = [x for x in range(g1.n) if is_simplicial(g1, x)]
        s2 = [x for x in range(g2.n) if is_simplicial(g2, x)]
        if not s1 or not s2:
            continue
        if not (is_esp(g1, "direct", budgets)[0] and is_esp(g2, "direct", budgets)[0]):
            continue
        done += 1
        x1, x2 = rng.choice(s1), rng.choice(s2)
        h = simplicial_sum(g1, x1, g2, x2)
        if not is_esp(h, "direct", budgets)[0]:
            bad.append(f"simplicial sum of {g1.edges()}@{x1} and {g2.edges()}@{x2}")
    return bad[:5], ["100 duplications and 100 simplicial sums stay ESP"]


def check_10(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad = []
    done = 0
    while done < 100:
        n = rng.randint(2, 9)
        rest = list(range(1, n))
        nb = [v for v in rest if rng.random() < 0.5]
        far = [v for v in rest if v not in nb]
        # G - N(u) edgeless: every edge other than u's touches N(u)
        edges = [(0, v) for v in nb]
        for a, b in combinations(rest, 2):
            if (a in nb or b in nb) and rng.random() < 0.5:
                edges.append((a, b))
        g = Graph.from_edges(n, edges)
        if not induced_subgraph(g, rest).is_bipartite():
            continue
        if any(g.has_edge(a, b) for a, b in combinations([0] + far, 2)):
            continue
        done += 1
        if not is_tu_graph(g, budgets).is_tu:
            bad.append(str(g.edges()))
    return bad[:5], ["100 graphs, all TU"]


def _corrupt(cert: BoxCertificate, field_name: str, index: int, value) -> BoxCertificate:
    vals = list(getattr(cert, field_name))
    vals[index] = value
    data = {f: getattr(cert, f) for f in ("rows", "w", "l", "x", "y", "z", "value")}
    data[field_name] = tuple(vals)
    return BoxCertificate(**data)


def check_11(rng: random.Random, budgets: Budgets) -> tuple[list[str], list[str]]:
    bad = []
    h, cert = h_certificate()
    cases = [
        ("primal_feasibility", _corrupt(cert, "x", 0, Fraction(1, 2))),
        ("dual_feasibility", _corrupt(cert, "y", 1, Fraction(1))),
        ("l_nonnegative", _corrupt(cert, "l", 0, Fraction(-1, 4))),
        ("w_integral", _corrupt(cert, "w", 0, Fraction(1, 2))),
        ("rows", _corrupt(cert, "rows", 4, (3,))),
        ("dimensions", BoxCertificate(cert.rows, cert.w, cert.l, cert.x, cert.y[:-1],
                                      cert.z, cert.value)),
        ("objective", BoxCertificate(cert.rows, cert.w, cert.l, cert.x, cert.y, cert.z,
                                     Fraction(2))),
    ]
    for expected, bad_cert in cases:
        rep = verify_certificate(h, bad_cert, budgets=budgets)
        if rep.passed or expected not in rep.failed:
            bad.append(f"corruption of {expected} gave failures {rep.failed}")
    for name, params in (("Cn", [4]), ("Cn", [6]), ("Kn", [4])):
        hit = box_tdi_falsify_search(build_named(name, params), budgets=budgets)
        if hit is not None:
            bad.append(f"falsifier reports {hit.to_json()} on {name}{params}")
    hit = box_tdi_falsify_search(build_named("barS3plus"), budgets=budgets)
    if hit is None:
        bad.append("falsifier finds nothing on barS3plus")
    note = "7 corruptions rejected by name; falsifier silent on C_4, C_6, K_4"
    if hit is not None:
        note += f"; hit on barS3plus at w={list(hit.w)}"
    return bad, [note]


CHECKS: list[tuple[int, str, Callable, float]] = [
    (1, "eight-vertex certificate H", check_1, 5),
    (2, "R construction certificates for S_3, S_5, barS3plus", check_2, 30),
    (3, "S_3 is not 2-perfect", check_3, 1),
    (4, "split graphs: TU iff S-free", check_4, 600),
    (5, "class Q necessary conditions", check_5, 300),
    (6, "direct ESP equals reform ESP on perfect graphs", check_6, 600),
    (7, "ESP for TU and incomparability, strong ESP for comparability", check_7, 900),
    (8, "circulation and degree splits", check_8, 300),
    (9, "duplication and simplicial sums keep ESP", check_9, 900),
    (10, "G - u bipartite and G - N(u) edgeless implies TU", check_10, 300),
    (11, "negative controls", check_11, 120),
]


def run_check(number: int, seed: int = 0, budgets: Budgets = DEFAULT) -> CheckResult:
    for num, title, fn, limit in CHECKS:
        if num == number:
            rng = random.Random(f"{seed}:{num}")
            start = time.perf_counter()
            try:
                failures, notes = fn(rng, budgets)
                ok = not failures
                details = failures or notes
            except Exception as exc:  # a crash is reported as a failed criterion
                details, ok = [f"{type(exc).__name__}: {exc}"], False
            secs = time.perf_counter() - start
            if secs > limit:
                ok = False
                details = details + [f"over the time limit of {limit}s"]
            return CheckResult(num, title, ok, secs, limit, details)
    raise KeyError(number)


def run_all(seed: int = 0, budgets: Budgets = DEFAULT, only=None) -> list[CheckResult]:
    nums = [c[0] for c in CHECKS] if not only else list(only)
    return [run_check(k, seed, budgets) for k in nums]

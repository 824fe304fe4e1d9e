"""Named graph families and graph-building operations.

Vertex numbering for `build_named` (0-based):

S_n [n]          cycle v1..v2n is 0..2n-1; v_i -> i-1, so the "even" vertices
                 v2, v4, ... are the odd indices 1, 3, ...; evens form a clique.
barS3 []         complement of S_3 (same numbering).
barS3plus []     barS3 plus vertex 6 adjacent to all of 0..5.
Gamma []         6-cycle 0..5 plus chords 0-2 and 0-4.
K4plus []        K4 on 0..3, pendant 4 on 0, pendant 5 on 1.
K2nplus [n]      a=0, b=1 (edge ab), c_i = i+1 for i=1..n adjacent to a and b,
                 pendant n+2 on c_1.
Cn [n]           cycle 0..n-1.
Kn [n], Pn [n]   complete graph, path 0-1-...-n-1.
Kmn [m, n]       sides 0..m-1 and m..m+n-1.
classC [L, k, x1..xk, c1..ck]
                 even cycle 0..L-1; X = {x1..xk} stable; one pendant per vertex
                 of Y = V(C) - X - N(X) in increasing order of y; then c_i extra
                 nonadjacent copies of x_i, in the order given.
C10C5e []        10 vertices labelled 1..9,0 (index = label-1, label 0 -> 9):
                 cycle 1..5 with chord 13 on V = {1..5}, and U-vertices
                 6~{1,2}, 7~{2,3}, 8~{3,4}, 9~{4,5}, 0~{5,1}.
C10C5e_H []      C10C5e minus the vertices labelled 9 and 0.
"""
from __future__ import annotations

from typing import Sequence

import networkx as nx

from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, PreconditionError
from .graph import (Digraph, Graph, Multigraph, bits, complement,
                    delete_vertices, duplicate_vertex, iter_bits, to_mask)


def _cycle_edges(n: int) -> list[tuple[int, int]]:
    return [(i, (i + 1) % n) for i in range(n)]


def s_graph(n: int) -> Graph:
    if n < 2:
        raise PreconditionError("S_n needs n >= 2")
    edges = _cycle_edges(2 * n)
    evens = list(range(1, 2 * n, 2))
    edges += [(a, b) for i, a in enumerate(evens) for b in evens[i + 1:]]
    return Graph.from_edges(2 * n, sorted({tuple(sorted(e)) for e in edges}),
                            [f"v{i + 1}" for i in range(2 * n)])


def _params(name: str, params: Sequence[int], count: int) -> list[int]:
    if len(params) != count:
        raise PreconditionError(f"{name} takes {count} parameter(s), got {len(params)}")
    return [int(p) for p in params]


def build_named(name: str, params: Sequence[int] = ()) -> Graph:
    params = list(params)
    if name == "S_n":
        (n,) = _params(name, params, 1)
        return s_graph(n)
    if name == "barS3":
        _params(name, params, 0)
        return complement(s_graph(3))
    if name == "barS3plus":
        _params(name, params, 0)
        g = complement(s_graph(3))
        adj = [a | 1 << 6 for a in g.adj] + [0b111111]
        return Graph(7, tuple(adj), g.labels + ("v",))
    if name == "Gamma":
        _params(name, params, 0)
        return Graph.from_edges(6, _cycle_edges(6) + [(0, 2), (0, 4)])
    if name == "K4plus":
        _params(name, params, 0)
        edges = [(a, b) for a in range(4) for b in range(a + 1, 4)] + [(0, 4), (1, 5)]
        return Graph.from_edges(6, edges)
    if name == "K2nplus":
        (n,) = _params(name, params, 1)
        if n < 3:
            raise PreconditionError("K2nplus needs n >= 3")
        edges = [(0, 1)] + [(x, c) for c in range(2, n + 2) for x in (0, 1)] + [(2, n + 2)]
        return Graph.from_edges(n + 3, edges)
    if name == "Cn":
        (n,) = _params(name, params, 1)
        if n < 3:
            raise PreconditionError("Cn needs n >= 3")
        return Graph.from_edges(n, _cycle_edges(n))
    if name == "Kn":
        (n,) = _params(name, params, 1)
        if n < 0:
            raise PreconditionError("Kn needs n >= 0")
        return Graph.from_edges(n, [(a, b) for a in range(n) for b in range(a + 1, n)])
    if name == "Pn":
        (n,) = _params(name, params, 1)
        if n < 1:
            raise PreconditionError("Pn needs n >= 1")
        return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])
    if name == "Kmn":
        m, n = _params(name, params, 2)
        if m < 1 or n < 1:
            raise PreconditionError("Kmn needs m, n >= 1")
        return Graph.from_edges(m + n, [(a, m + b) for a in range(m) for b in range(n)])
    if name == "classC":
        return _class_c(params)
    if name in ("C10C5e", "C10C5e_H"):
        _params(name, params, 0)
        labels = [str(i) for i in range(1, 10)] + ["0"]
        idx = {lab: i for i, lab in enumerate(labels)}
        pairs = ["12", "23", "34", "45", "51", "13",
                 "61", "62", "72", "73", "83", "84", "94", "95", "05", "01"]
        g = Graph.from_edges(10, [(idx[p[0]], idx[p[1]]) for p in pairs], labels)
        if name == "C10C5e_H":
            g = delete_vertices(g, [idx["9"], idx["0"]])
        return g
    raise PreconditionError(f"unknown graph family {name!r}")


NAMED_FAMILIES = ("S_n", "barS3", "barS3plus", "Gamma", "K4plus", "K2nplus", "Cn",
                  "Kn", "Pn", "Kmn", "classC", "C10C5e", "C10C5e_H")


def _class_c(params: list[int]) -> Graph:
    if len(params) < 2:
        raise PreconditionError("classC takes [L, k, x1..xk, c1..ck]")
    length, k = params[0], params[1]
    if len(params) != 2 + 2 * k or k < 0:
        raise PreconditionError("classC takes [L, k, x1..xk, c1..ck]")
    if length < 4 or length % 2:
        raise PreconditionError("classC needs an even cycle length >= 4")
    xs, counts = params[2:2 + k], params[2 + k:]
    cyc = Graph.from_edges(length, _cycle_edges(length))
    if len(set(xs)) != k or any(not 0 <= x < length for x in xs):
        raise PreconditionError("classC: X must list distinct cycle vertices")
    xmask = to_mask(xs)
    if not cyc.is_stable(xmask):
        raise PreconditionError("classC: X is not stable in the cycle")
    if any(c < 0 for c in counts):
        raise PreconditionError("classC: duplication counts must be nonnegative")
    closed = xmask
    for x in xs:
        closed |= cyc.adj[x]
    ys = [v for v in range(length) if not closed >> v & 1]
    edges = _cycle_edges(length) + [(y, length + i) for i, y in enumerate(ys)]
    g = Graph.from_edges(length + len(ys), edges)
    for x, c in zip(xs, counts):
        for _ in range(c):
            g = duplicate_vertex(g, x, adjacent=False)
    return g


def line_graph(h: Multigraph) -> tuple[Graph, list[tuple[int, int]]]:
    """L(H). Vertex i of the result is the i-th edge of `h.edge_list()`."""
    if h.has_loops():
        raise PreconditionError("line graph of a multigraph with loops is not supported")
    edges = h.edge_list()
    inc = [0] * h.n
    for i, (u, v) in enumerate(edges):
        inc[u] |= 1 << i
        inc[v] |= 1 << i
    adj = []
    for i, (u, v) in enumerate(edges):
        adj.append((inc[u] | inc[v]) & ~(1 << i))
    return Graph(len(edges), tuple(adj)), edges


def remove_pendant_twins(h: Multigraph) -> Multigraph:
    """Optional normalisation of H that leaves L(H) unchanged up to isomorphism.

    Whenever several vertices have the same single neighbour z, all their
    edges to z are moved onto the smallest of them. The others become isolated.
    """
    nbrs: dict[int, set[int]] = {v: set() for v in range(h.n)}
    for (u, v), k in h.mult:
        if k > 0:
            nbrs[u].add(v)
            nbrs[v].add(u)
    target: dict[int, int] = {}
    for v in range(h.n):
        if len(nbrs[v]) == 1:
            (z,) = nbrs[v]
            if z != v and not (len(nbrs[z]) == 1 and z < v):
                target.setdefault(z, v)
    pairs = []
    for (u, v), k in h.mult:
        if len(nbrs[u]) == 1 and v in target and target[v] != u and nbrs[u] == {v}:
            u = target[v]
        elif len(nbrs[v]) == 1 and u in target and target[u] != v and nbrs[v] == {u}:
            v = target[u]
        pairs.append((u, v, k))
    return Multigraph.from_pairs(h.n, pairs)


def bipartite_extension(h: Graph, s: Sequence[int], b: Graph, t: Sequence[int]) -> Graph:
    """Glue B onto H by identifying s[i] with t[i].

    Result numbering: H's vertices first, then B's vertices outside T in
    increasing order.
    """
    smask = h.check_set(s)
    tmask = b.check_set(t)
    if len(set(s)) != len(s) or len(set(t)) != len(t):
        raise PreconditionError("S and T must not repeat vertices")
    if len(s) != len(t):
        raise PreconditionError("|S| must equal |T|")
    if not h.is_stable(smask):
        raise PreconditionError("S is not stable in H")
    if len({h.adj[v] for v in s}) > 1:
        raise PreconditionError("vertices of S do not share one neighbourhood in H")
    if not _colour_class_ok(b, list(t)):
        raise PreconditionError("B is not bipartite or T is not inside one colour class")
    pos = {}
    for sv, tv in zip(s, t):
        pos[tv] = sv
    nxt = h.n
    for v in range(b.n):
        if not tmask >> v & 1:
            pos[v] = nxt
            nxt += 1
    edges = h.edges() + [(pos[u], pos[v]) for u, v in b.edges()]
    return Graph.from_edges(nxt, edges)


def _colour_class_ok(b: Graph, t: list[int]) -> bool:
    colour = [-1] * b.n
    comp = [-1] * b.n
    for s in range(b.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        comp[s] = s
        stack = [s]
        while stack:
            v = stack.pop()
            for u in iter_bits(b.adj[v]):
                if colour[u] < 0:
                    colour[u] = 1 - colour[v]
                    comp[u] = s
                    stack.append(u)
                elif colour[u] == colour[v]:
                    return False
    by_comp: dict[int, int] = {}
    for v in t:
        if by_comp.setdefault(comp[v], colour[v]) != colour[v]:
            return False
    return True


def is_simplicial(g: Graph, x: int) -> bool:
    return g.adj[x] != 0 and g.is_clique(g.adj[x] | 1 << x)


def simplicial_sum(g1: Graph, x1: int, g2: Graph, x2: int) -> Graph:
    """Numbering: V1 - x1 in order, then V2 - x2 in order."""
    g1.check_vertex(x1)
    g2.check_vertex(x2)
    if g1.n < 3 or g2.n < 3:
        raise PreconditionError("both graphs need at least 3 vertices")
    if not is_simplicial(g1, x1):
        raise PreconditionError(f"vertex {x1} is not simplicial in the first graph")
    if not is_simplicial(g2, x2):
        raise PreconditionError(f"vertex {x2} is not simplicial in the second graph")
    p1 = {v: i for i, v in enumerate(v for v in range(g1.n) if v != x1)}
    off = g1.n - 1
    p2 = {v: off + i for i, v in enumerate(v for v in range(g2.n) if v != x2)}
    edges = [(p1[u], p1[v]) for u, v in g1.edges() if x1 not in (u, v)]
    edges += [(p2[u], p2[v]) for u, v in g2.edges() if x2 not in (u, v)]
    edges += [(p1[a], p2[b]) for a in iter_bits(g1.adj[x1]) for b in iter_bits(g2.adj[x2])]
    return Graph.from_edges(g1.n + g2.n - 2, edges)


def simple_dicycles(d: Digraph, budget: int) -> list[list[int]]:
    """All simple directed cycles (vertex lists), canonically rotated and sorted."""
    dg = nx.DiGraph()
    dg.add_nodes_from(range(d.n))
    dg.add_edges_from((u, v) for u, v, k in d.arcs if k > 0)
    out = []
    for cyc in nx.simple_cycles(dg):
        out.append(cyc)
        if len(out) > budget:
            raise BudgetExceeded("max_dicycles", budget, "too many dicycles")
    canon = []
    for cyc in out:
        i = cyc.index(min(cyc))
        canon.append(cyc[i:] + cyc[:i])
    return sorted(canon)


def p_comparability_graph(d: Digraph, t: Sequence[int],
                          budgets: Budgets = DEFAULT) -> Graph:
    """Add all dicycle chords, delete T, forget directions. Remaining vertices keep their order."""
    tset = set(t)
    if any(not 0 <= v < d.n for v in tset):
        raise PreconditionError("T has a vertex out of range")
    for u, v, k in d.arcs:
        if k > 0 and u == v:
            raise PreconditionError(f"loop arc {u}->{v}")
        if k > 0 and u in tset and v in tset:
            raise PreconditionError(f"arc {u}->{v} joins two vertices of T")
    cycles = simple_dicycles(d, budgets.max_dicycles)
    on_cycle = set()
    for cyc in cycles:
        hits = sum(1 for v in cyc if v in tset)
        if hits != 1:
            raise PreconditionError(f"dicycle {cyc} meets T {hits} times")
        for i, v in enumerate(cyc):
            on_cycle.add((v, cyc[(i + 1) % len(cyc)]))
    for u, v, k in d.arcs:
        if k > 0 and (u, v) not in on_cycle:
            raise PreconditionError(f"arc {u}->{v} lies on no dicycle")
    keep = [v for v in range(d.n) if v not in tset]
    pos = {v: i for i, v in enumerate(keep)}
    edges = set()
    for cyc in cycles:
        rest = [pos[v] for v in cyc if v not in tset]
        for i, a in enumerate(rest):
            for b in rest[i + 1:]:
                edges.add((min(a, b), max(a, b)))
    return Graph.from_edges(len(keep), sorted(edges))


def replicate(g: Graph, d: Sequence[int]) -> tuple[Graph, list[int]]:
    """G^d: vertex v becomes a stable set of d[v] copies. Returns (graph, origin of each new vertex)."""
    if len(d) != g.n:
        raise PreconditionError("d must have one entry per vertex")
    if any(x < 0 for x in d):
        raise PreconditionError("d must be nonnegative")
    origin = [v for v in range(g.n) for _ in range(d[v])]
    copies: list[int] = []
    start = 0
    for v in range(g.n):
        copies.append(((1 << d[v]) - 1) << start)
        start += d[v]
    adj = []
    for v in origin:
        m = 0
        for u in iter_bits(g.adj[v]):
            m |= copies[u]
        adj.append(m)
    labels = None
    if g.labels:
        labels = tuple(g.labels[v] + f"#{i}" for i, v in enumerate(origin))
    return Graph(len(origin), tuple(adj), labels), origin


def collapse_closed_twins(g: Graph) -> tuple[Graph, list[int]]:
    """Merge vertices with equal closed neighbourhoods; returns (graph, kept vertex per class)."""
    seen: dict[int, int] = {}
    keep = []
    for v in range(g.n):
        key = g.adj[v] | 1 << v
        if key not in seen:
            seen[key] = v
            keep.append(v)
    return delete_vertices(g, [v for v in range(g.n) if v not in keep]), keep


__all__ = ["build_named", "NAMED_FAMILIES", "s_graph", "line_graph", "bipartite_extension",
           "simplicial_sum", "is_simplicial", "p_comparability_graph", "replicate",
           "remove_pendant_twins", "simple_dicycles", "collapse_closed_twins", "bits"]

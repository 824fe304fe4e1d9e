"""Induced-subgraph search and canonical labelling."""
from __future__ import annotations

import hashlib
from typing import Sequence

from .graph import Graph, iter_bits


def contains_induced(g: Graph, p: Graph) -> tuple[int, ...] | None:
    """Lexicographically least induced embedding of P into G, or None.

    The result maps pattern vertex i to host vertex result[i].
    """
    k = p.n
    if k == 0:
        return ()
    if k > g.n:
        return None
    gdeg = [g.degree(v) for v in range(g.n)]
    pdeg = [p.degree(v) for v in range(k)]
    # host vertices whose degree can accommodate each pattern vertex
    fit = []
    for i in range(k):
        m = 0
        for v in range(g.n):
            if gdeg[v] >= pdeg[i] and g.n - 1 - gdeg[v] >= k - 1 - pdeg[i]:
                m |= 1 << v
        fit.append(m)
    full = g.full
    emb = [0] * k

    def extend(i: int, used: int) -> bool:
        if i == k:
            return True
        cand = fit[i] & ~used
        for j in range(i):
            h = emb[j]
            if p.adj[i] >> j & 1:
                cand &= g.adj[h]
            else:
                cand &= full & ~g.adj[h]
            if not cand:
                return False
        for v in iter_bits(cand):
            emb[i] = v
            if extend(i + 1, used | 1 << v):
                return True
        return False

    if extend(0, 0):
        return tuple(emb)
    return None


def is_free_of(g: Graph, patterns: Sequence[Graph]) -> bool:
    return all(contains_induced(g, p) is None for p in patterns)


def _refine(g: Graph, colours: list[int]) -> list[int]:
    while True:
        keys = []
        for v in range(g.n):
            nb = sorted(colours[u] for u in iter_bits(g.adj[v]))
            keys.append((colours[v], tuple(nb)))
        order = sorted(set(keys))
        rank = {key: i for i, key in enumerate(order)}
        new = [rank[key] for key in keys]
        if len(order) == len(set(colours)):
            return new
        colours = new


def _rank(values: list) -> list[int]:
    order = sorted(set(values))
    rank = {x: i for i, x in enumerate(order)}
    return [rank[x] for x in values]


def canonical_labelling(g: Graph, colours: Sequence[int] | None = None) -> list[int]:
    """Permutation `pos` (vertex -> new index) giving the canonical form.

    Colour refinement with individualisation; the lexicographically least
    relabelled edge list over the search tree wins. Twins inside a cell are
    tried only once because swapping them is an automorphism.
    """
    if g.n == 0:
        return []
    init = _rank(list(colours) if colours is not None else [0] * g.n)
    best: list = [None, None]

    def leaf_key(pos: list[int]):
        edges = sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges())
        return tuple(edges)

    def search(col: list[int]) -> None:
        col = _refine(g, col)
        if len(set(col)) == g.n:
            key = leaf_key(col)
            if best[0] is None or key < best[0]:
                best[0], best[1] = key, col
            return
        sizes: dict[int, int] = {}
        for c in col:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, s in sizes.items() if s > 1)
        cell = [v for v in range(g.n) if col[v] == target]
        tried: list[int] = []
        for v in cell:
            if any(_twins(g, v, u) for u in tried):
                continue
            tried.append(v)
            nxt = [2 * c + (1 if c == target and u != v else 0) for u, c in enumerate(col)]
            search(_rank(nxt))

    search(init)
    return best[1]


def _twins(g: Graph, a: int, b: int) -> bool:
    ma = g.adj[a] & ~(1 << b)
    mb = g.adj[b] & ~(1 << a)
    return ma == mb


def canonical_form(g: Graph, colours: Sequence[int] | None = None) -> tuple:
    """Hashable isomorphism invariant: equal iff the (coloured) graphs are isomorphic."""
    pos = canonical_labelling(g, colours)
    edges = tuple(sorted((min(pos[u], pos[v]), max(pos[u], pos[v])) for u, v in g.edges()))
    if colours is None:
        return (g.n, edges)
    init = _rank(list(colours))
    placed = [0] * g.n
    for v, p in enumerate(pos):
        placed[p] = init[v]
    return (g.n, edges, tuple(placed))


def canonical_graph(g: Graph, colours: Sequence[int] | None = None) -> Graph:
    pos = canonical_labelling(g, colours)
    return Graph.from_edges(g.n, [(pos[u], pos[v]) for u, v in g.edges()])


def canonical_hash(g: Graph, colours: Sequence[int] | None = None) -> str:
    return hashlib.sha256(repr(canonical_form(g, colours)).encode()).hexdigest()[:16]


def is_isomorphic(g: Graph, h: Graph) -> bool:
    return g.n == h.n and g.m == h.m and canonical_form(g) == canonical_form(h)

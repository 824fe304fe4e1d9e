"""Integral feasible circulations with lower and upper arc bounds.

Reduction to a single max-flow: each arc gets its own middle node so that
parallel arcs stay distinct, lower bounds become node imbalances, and the
circulation is feasible iff the max flow saturates every source arc.
"""
from __future__ import annotations

from typing import Sequence

import networkx as nx

from .errors import InternalCheckError


def feasible_circulation(n: int, arcs: Sequence[tuple[int, int, int, int | None]]
                         ) -> list[int] | None:
    """arcs: (tail, head, low, high); high None means unbounded.

    Returns an integral flow per arc satisfying the bounds and conservation,
    or None when none exists.
    """
    g = nx.DiGraph()
    src, snk = ("s",), ("t",)
    g.add_node(src)
    g.add_node(snk)
    g.add_nodes_from(range(n))
    excess = [0] * n
    for i, (u, v, lo, hi) in enumerate(arcs):
        if hi is not None and hi < lo:
            return None
        if lo < 0:
            raise ValueError("lower bounds must be nonnegative")
        mid = ("a", i)
        if hi is None:
            g.add_edge(u, mid)
            g.add_edge(mid, v)
        else:
            g.add_edge(u, mid, capacity=hi - lo)
            g.add_edge(mid, v, capacity=hi - lo)
        excess[v] += lo
        excess[u] -= lo
    need = 0
    for v in range(n):
        if excess[v] > 0:
            g.add_edge(src, v, capacity=excess[v])
            need += excess[v]
        elif excess[v] < 0:
            g.add_edge(v, snk, capacity=-excess[v])
    if need == 0:
        value, flow = 0, None
    else:
        value, flow = nx.maximum_flow(g, src, snk)
    if value != need:
        return None
    out = []
    for i, (u, v, lo, hi) in enumerate(arcs):
        extra = flow[u][("a", i)] if flow is not None else 0
        out.append(lo + int(extra))
    check = [0] * n
    for (u, v, lo, hi), f in zip(arcs, out):
        check[u] -= f
        check[v] += f
        if f < lo or (hi is not None and f > hi):
            raise InternalCheckError("circulation violates an arc bound")
    if any(check):
        raise InternalCheckError("circulation is not conserved")
    return out

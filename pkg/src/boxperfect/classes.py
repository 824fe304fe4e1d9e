"""Desk-scale enumeration of the classes Q and S, and the split-graph tests.

Q: bipartite graphs (U, V) whose biadjacency matrix is not TU while every
proper submatrix is. Q1: members where some u sees all of V. Q2: members
outside Q1 such that adding a new U vertex adjacent to all of V creates no
induced Q1 member. S: graphs built from Q1 or Q2 members with a complete
graph on V.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from .boxtdi import (RRecord, box_tdi_falsify_search, build_R_graph,
                     make_R_certificate, verify_certificate)
from .cliques import IntMatrix
from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, PreconditionError
from .esp import is_esp
from .graph import Graph, delete_vertices
from .invariants import is_split
from .search import canonical_form, canonical_hash, contains_induced
from .tu import is_minimally_non_tu, is_totally_unimodular, is_tu_graph


@dataclass(frozen=True)
class CatalogEntry:
    graph: Graph
    record: dict
    hash: str
    tags: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {"n": self.graph.n, "edges": [list(e) for e in self.graph.edges()],
                "record": self.record, "hash": self.hash, "tags": list(self.tags)}

    @classmethod
    def from_json(cls, d: dict) -> "CatalogEntry":
        g = Graph.from_edges(int(d["n"]), [tuple(e) for e in d["edges"]])
        return cls(g, d["record"], d["hash"], tuple(d["tags"]))


@dataclass
class ClassCatalog:
    name: str
    members: list[CatalogEntry] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def graphs(self) -> list[Graph]:
        return [e.graph for e in self.members]

    def dumps(self) -> str:
        return "".join(json.dumps(e.to_json(), sort_keys=True) + "\n" for e in self.members)

    @classmethod
    def loads(cls, name: str, text: str) -> "ClassCatalog":
        return cls(name, [CatalogEntry.from_json(json.loads(line))
                          for line in text.splitlines() if line.strip()])


def _bipartite(m: Sequence[Sequence[int]]) -> tuple[Graph, list[int], list[int]]:
    r, c = len(m), len(m[0]) if m else 0
    edges = [(i, r + j) for i in range(r) for j in range(c) if m[i][j]]
    return Graph.from_edges(r + c, edges), list(range(r)), list(range(r, r + c))


def _side_colours(r: int, c: int) -> list[int]:
    return [0] * r + [1] * c


def _columns_sorted(rows: list[tuple[int, ...]], n: int, strict: bool) -> bool:
    cols = list(zip(*rows)) if rows else [()] * n
    for a, b in zip(cols, cols[1:]):
        if a > b or (strict and a == b):
            return False
    return True


def _q_matrices(n: int, budgets: Budgets) -> Iterable[tuple[tuple[int, ...], ...]]:
    """n x n minimally non-TU 0/1 matrices with rows strictly increasing and
    columns strictly increasing (top-down).

    Every matrix can be brought to a form with both rows and columns sorted by
    permuting rows and columns (a doubly lexical ordering), so this loses no
    isomorphism class. Every proper row prefix must be TU, and rows need two
    ones (expanding along a row with one 1 gives a proper minor).
    """
    choices = [r for r in product((0, 1), repeat=n) if sum(r) >= 2]
    out = []

    def go(rows: list[tuple[int, ...]], start: int) -> None:
        k = len(rows)
        if k == n:
            if _columns_sorted(rows, n, True) and is_minimally_non_tu(IntMatrix.of(rows, n), budgets):
                out.append(tuple(rows))
            return
        for idx in range(start, len(choices) - (n - k - 1)):
            nxt = rows + [choices[idx]]
            if not _columns_sorted(nxt, n, False):
                continue
            if k + 1 < n and not is_totally_unimodular(IntMatrix.of(nxt, n), budgets).is_tu:
                continue
            go(nxt, idx + 1)

    go([], 0)
    return out


def contains_q1(m: Sequence[Sequence[int]], side_respecting: bool = True,
                budgets: Budgets = DEFAULT) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """A square submatrix that is minimally non-TU and has an all-ones row
    (or, when not side-respecting, an all-ones row or column). Returns
    (rows, cols) of the first one by size, then lexicographically."""
    r, c = len(m), len(m[0]) if m else 0
    for k in range(2, min(r, c) + 1):
        for rs in combinations(range(r), k):
            for cs in combinations(range(c), k):
                sub = [[m[i][j] for j in cs] for i in rs]
                full_row = any(all(row) for row in sub)
                full_col = any(all(sub[i][j] for i in range(k)) for j in range(k))
                if not (full_row or (not side_respecting and full_col)):
                    continue
                if is_minimally_non_tu(IntMatrix.of(sub, k), budgets):
                    return rs, cs
    return None


def q_tags(m: Sequence[Sequence[int]], side_respecting: bool = True,
           budgets: Budgets = DEFAULT) -> tuple[str, ...]:
    """("Q1",), ("Q2",) or () for a member of Q given by its biadjacency matrix."""
    if any(all(row) for row in m):
        return ("Q1",)
    plus = [list(row) for row in m] + [[1] * len(m[0])]
    if contains_q1(plus, side_respecting, budgets) is None:
        return ("Q2",)
    return ()


def enumerate_Q(max_side: int, budgets: Budgets = DEFAULT,
                side_respecting: bool = True) -> ClassCatalog:
    """All members of Q with |U| = |V| <= max_side up to side-preserving isomorphism."""
    if max_side > budgets.enumerate_q_max_side:
        raise BudgetExceeded("enumerate_q_max_side", budgets.enumerate_q_max_side,
                             f"asked for side {max_side}")
    cat = ClassCatalog("Q")
    seen = set()
    for n in range(1, max_side + 1):
        for rows in _q_matrices(n, budgets):
            g, us, vs = _bipartite(rows)
            colours = _side_colours(n, n)
            key = canonical_form(g, colours)
            if key in seen:
                continue
            seen.add(key)
            record = {"M": [list(r) for r in rows], "U": us, "V": vs}
            cat.members.append(CatalogEntry(g, record, canonical_hash(g, colours),
                                            q_tags(rows, side_respecting, budgets)))
    return cat


def _complete(k: int) -> Graph:
    return Graph.from_edges(k, combinations(range(k), 2))


def enumerate_S(max_n: int, budgets: Budgets = DEFAULT,
                side_respecting: bool = True) -> ClassCatalog:
    """All members of S on at most max_n vertices, up to isomorphism."""
    if max_n > budgets.enumerate_s_max_n:
        raise BudgetExceeded("enumerate_s_max_n", budgets.enumerate_s_max_n, f"asked for {max_n}")
    side = (max_n + 1) // 2
    if side > budgets.enumerate_q_max_side:
        raise BudgetExceeded("enumerate_q_max_side", budgets.enumerate_q_max_side,
                             f"S on {max_n} vertices needs Q with side {side}")
    cat = ClassCatalog("S")
    seen = set()
    for entry in enumerate_Q(side, budgets, side_respecting):
        if not entry.tags:
            continue
        rec = entry.record
        k = len(rec["V"])
        g, rrec = build_R_graph(entry.graph, rec["U"], rec["V"], _complete(k), budgets,
                                check_membership=False)
        if g.n > max_n:
            continue
        if is_split(g) is None:
            raise PreconditionError("member of S is not split")
        key = canonical_form(g)
        if key in seen:
            continue
        seen.add(key)
        record = {"Q": rec, "R": rrec.to_json()}
        cat.members.append(CatalogEntry(g, record, canonical_hash(g), entry.tags))
    cat.members.sort(key=lambda e: (e.graph.n, e.graph.m, e.hash))
    return cat


def split_graphs(max_n: int) -> list[Graph]:
    """All split graphs on 1..max_n vertices up to isomorphism: a clique K on
    0..k-1 and a stable set whose neighbourhoods are a multiset of subsets of K."""
    out = []
    for n in range(1, max_n + 1):
        seen = set()
        found = []
        for k in range(n + 1):
            subsets = list(range(1 << k))
            for nbhd in _multisets(subsets, n - k):
                edges = list(combinations(range(k), 2))
                for i, s in enumerate(nbhd):
                    edges += [(j, k + i) for j in range(k) if s >> j & 1]
                g = Graph.from_edges(n, edges)
                key = canonical_form(g)
                if key not in seen:
                    seen.add(key)
                    found.append((key, g))
        found.sort(key=lambda t: t[0])
        out.extend(g for _, g in found)
    return out


def _multisets(items: list[int], size: int):
    def go(start: int, left: int, acc: list[int]):
        if left == 0:
            yield tuple(acc)
            return
        for i in range(start, len(items)):
            acc.append(items[i])
            yield from go(i, left - 1, acc)
            acc.pop()
    return go(0, size, [])


def split_box_perfect_test(g: Graph, s_catalog: ClassCatalog | None = None,
                           with_esp: bool = False, budgets: Budgets = DEFAULT) -> dict:
    """For a split graph: TU, S-freeness and (optionally) ESP, plus whether TU
    and S-freeness disagree (which would contradict the split-graph characterisation)."""
    if is_split(g) is None:
        raise PreconditionError("not a split graph")
    if s_catalog is None:
        s_catalog = enumerate_S(max(g.n, 1), budgets)
    tu = is_tu_graph(g, budgets).is_tu
    hit = None
    for entry in s_catalog:
        if entry.graph.n <= g.n:
            emb = contains_induced(g, entry.graph)
            if emb is not None:
                hit = {"hash": entry.hash, "embedding": list(emb)}
                break
    report = {"tu": tu, "s_free": hit is None, "s_witness": hit, "esp": None,
              "divergence": tu != (hit is None)}
    if with_esp:
        report["esp"] = is_esp(g, "direct", budgets)[0]
    if report["divergence"]:
        report["finding"] = "high severity: TU and S-freeness disagree"
    return report


def minimality_check(g: Graph, record: RRecord | None = None,
                     budgets: Budgets = DEFAULT) -> bool:
    """G is certified non-box-perfect, while every G - v is TU or ESP.

    With a record the certificate comes from the R construction; without one
    the bounded falsifier has to find a violation. One-vertex deletions are
    checked first, so a graph with a non-box-perfect G - v fails fast.
    """
    for v in range(g.n):
        h = delete_vertices(g, [v])
        if is_tu_graph(h, budgets).is_tu:
            continue
        if not is_esp(h, "direct", budgets)[0]:
            return False
    if record is not None:
        cert = make_R_certificate(g, record, budgets=budgets)
        return verify_certificate(g, cert, exhaustive_dual=True, budgets=budgets).passed
    return box_tdi_falsify_search(g, budgets=budgets) is not None

"""Graph, multigraph and digraph values plus the plain-text file format.

Vertices are always 0..n-1. Adjacency of a simple graph is stored as one
integer bitmask per vertex, so set operations on neighbourhoods are cheap.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import ParseError, PreconditionError


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits(mask: int) -> list[int]:
    return list(iter_bits(mask))


def to_mask(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


@dataclass(frozen=True)
class Graph:
    n: int
    adj: tuple[int, ...]
    labels: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        if len(self.adj) != self.n:
            raise PreconditionError("adjacency length does not match n")
        full = (1 << self.n) - 1
        for v, nb in enumerate(self.adj):
            if nb & ~full:
                raise PreconditionError(f"vertex {v} has a neighbour out of range")
            if nb >> v & 1:
                raise PreconditionError(f"loop at vertex {v}")
            for u in iter_bits(nb):
                if not self.adj[u] >> v & 1:
                    raise PreconditionError(f"edge {v}-{u} is not symmetric")
        if self.labels is not None and len(self.labels) != self.n:
            raise PreconditionError("labels length does not match n")

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   labels: Sequence[str] | None = None) -> "Graph":
        adj = [0] * n
        for u, v in edges:
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"edge {u}-{v} out of range for n={n}")
            if u == v:
                raise PreconditionError(f"loop at vertex {u}")
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return cls(n, tuple(adj), tuple(labels) if labels is not None else None)

    @classmethod
    def empty(cls, n: int = 0) -> "Graph":
        return cls(n, (0,) * n)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    @property
    def m(self) -> int:
        return sum(nb.bit_count() for nb in self.adj) // 2

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in iter_bits(self.adj[u] >> (u + 1) << (u + 1))]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> list[int]:
        return bits(self.adj[v])

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels else str(v)

    def is_clique(self, mask: int) -> bool:
        for v in iter_bits(mask):
            if (mask & ~(1 << v)) & ~self.adj[v]:
                return False
        return True

    def is_stable(self, mask: int) -> bool:
        return all(not (self.adj[v] & mask) for v in iter_bits(mask))

    def check_vertex(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise PreconditionError(f"vertex {v} out of range for n={self.n}")

    def check_set(self, vertices: Iterable[int]) -> int:
        m = 0
        for v in vertices:
            self.check_vertex(v)
            m |= 1 << v
        return m

    def bipartition(self) -> tuple[int, int] | None:
        """Two-colouring as a pair of masks, colour 0 containing the lowest vertex of each component."""
        colour = [-1] * self.n
        for s in range(self.n):
            if colour[s] >= 0:
                continue
            colour[s] = 0
            stack = [s]
            while stack:
                v = stack.pop()
                for u in iter_bits(self.adj[v]):
                    if colour[u] < 0:
                        colour[u] = 1 - colour[v]
                        stack.append(u)
                    elif colour[u] == colour[v]:
                        return None
        a = to_mask(v for v in range(self.n) if colour[v] == 0)
        return a, self.full & ~a

    def is_bipartite(self) -> bool:
        return self.bipartition() is not None

    def relabel(self, labels: Sequence[str] | None) -> "Graph":
        return Graph(self.n, self.adj, tuple(labels) if labels is not None else None)


def induced_subgraph(g: Graph, vertices: Iterable[int]) -> Graph:
    """G[X], re-indexed densely in increasing order of the original indices."""
    mask = g.check_set(vertices)
    keep = bits(mask)
    pos = {v: i for i, v in enumerate(keep)}
    adj = []
    for v in keep:
        adj.append(to_mask(pos[u] for u in iter_bits(g.adj[v] & mask)))
    labels = tuple(g.labels[v] for v in keep) if g.labels else None
    return Graph(len(keep), tuple(adj), labels)


def delete_vertices(g: Graph, vertices: Iterable[int]) -> Graph:
    gone = g.check_set(vertices)
    return induced_subgraph(g, bits(g.full & ~gone))


def duplicate_vertex(g: Graph, v: int, adjacent: bool) -> Graph:
    """Add a copy v' = n of v. v' sees N(v), plus v itself when `adjacent`."""
    g.check_vertex(v)
    nb = g.adj[v] | ((1 << v) if adjacent else 0)
    new = g.n
    adj = [a | (1 << new) if nb >> u & 1 else a for u, a in enumerate(g.adj)]
    adj.append(nb)
    labels = None
    if g.labels:
        labels = g.labels + (g.labels[v] + "'",)
    return Graph(g.n + 1, tuple(adj), labels)


def complement(g: Graph) -> Graph:
    full = g.full
    return Graph(g.n, tuple(full & ~a & ~(1 << v) for v, a in enumerate(g.adj)), g.labels)


def disjoint_union(g: Graph, h: Graph) -> Graph:
    adj = list(g.adj) + [a << g.n for a in h.adj]
    return Graph(g.n + h.n, tuple(adj))


@dataclass(frozen=True)
class Multigraph:
    """Undirected multigraph. `mult` maps sorted pairs (u <= v) to positive multiplicities."""
    n: int
    mult: tuple[tuple[tuple[int, int], int], ...]

    def __post_init__(self):
        seen = set()
        for (u, v), k in self.mult:
            if not (0 <= u <= v < self.n):
                raise PreconditionError(f"pair {u}-{v} invalid for n={self.n}")
            if (u, v) in seen:
                raise PreconditionError(f"pair {u}-{v} listed twice")
            seen.add((u, v))
            if not isinstance(k, int) or k < 0:
                raise PreconditionError(f"multiplicity of {u}-{v} must be a nonnegative integer")

    @classmethod
    def from_pairs(cls, n: int, pairs: Iterable[tuple[int, int, int] | tuple[int, int]]) -> "Multigraph":
        acc: dict[tuple[int, int], int] = {}
        for p in pairs:
            u, v = p[0], p[1]
            k = p[2] if len(p) > 2 else 1
            if not (0 <= u < n and 0 <= v < n):
                raise PreconditionError(f"pair {u}-{v} out of range for n={n}")
            key = (min(u, v), max(u, v))
            acc[key] = acc.get(key, 0) + k
        return cls(n, tuple(sorted((key, k) for key, k in acc.items() if k > 0)))

    @classmethod
    def from_graph(cls, g: Graph) -> "Multigraph":
        return cls.from_pairs(g.n, g.edges())

    def multiplicity(self, u: int, v: int) -> int:
        key = (min(u, v), max(u, v))
        for k, m in self.mult:
            if k == key:
                return m
        return 0

    def edge_list(self) -> list[tuple[int, int]]:
        """Every parallel copy listed separately, in pair order."""
        out = []
        for (u, v), k in self.mult:
            out.extend([(u, v)] * k)
        return out

    def has_loops(self) -> bool:
        return any(u == v and k > 0 for (u, v), k in self.mult)

    def degree(self, v: int) -> int:
        d = 0
        for (a, b), k in self.mult:
            if a == v:
                d += k
            if b == v:
                d += k
        return d

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.n)), default=0)

    def simplify(self) -> Graph:
        return Graph.from_edges(self.n, [(u, v) for (u, v), k in self.mult if k > 0 and u != v])

    def with_multiplicities(self, values: Sequence[int]) -> "Multigraph":
        if len(values) != len(self.mult):
            raise PreconditionError("multiplicity vector has the wrong length")
        return Multigraph(self.n, tuple((p, int(k)) for (p, _), k in zip(self.mult, values)))


@dataclass(frozen=True)
class Digraph:
    """Directed multigraph. Arcs keep their given order; flows are aligned with it."""
    n: int
    arcs: tuple[tuple[int, int, int], ...]

    def __post_init__(self):
        for u, v, k in self.arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise PreconditionError(f"arc {u}->{v} out of range for n={self.n}")
            if not isinstance(k, int) or k < 0:
                raise PreconditionError(f"arc {u}->{v} has negative multiplicity")

    @classmethod
    def from_arcs(cls, n: int, arcs: Iterable[tuple[int, int] | tuple[int, int, int]]) -> "Digraph":
        return cls(n, tuple((a[0], a[1], a[2] if len(a) > 2 else 1) for a in arcs))

    def successors(self, v: int) -> list[int]:
        return sorted({b for a, b, k in self.arcs if a == v and k > 0})


# text format

def dumps(obj: Graph | Multigraph | Digraph, name: str = "G") -> str:
    if isinstance(obj, Graph):
        lines = [f"graph {name}", f"n {obj.n}"]
        lines += [f"e {u} {v}" for u, v in obj.edges()]
    elif isinstance(obj, Multigraph):
        lines = [f"multigraph {name}", f"n {obj.n}"]
        lines += [f"m {u} {v} {k}" for (u, v), k in obj.mult]
    elif isinstance(obj, Digraph):
        lines = [f"digraph {name}", f"n {obj.n}"]
        lines += [f"a {u} {v} {k}" for u, v, k in obj.arcs]
    else:
        raise TypeError(f"cannot serialise {type(obj).__name__}")
    labels = getattr(obj, "labels", None)
    if labels:
        lines += [f"v {i} {lab}" for i, lab in enumerate(labels)]
    return "\n".join(lines) + "\n"


_KINDS = {"graph": "e", "multigraph": "m", "digraph": "a"}


def loads(text: str) -> tuple[str, Graph | Multigraph | Digraph]:
    """Parse the text format. Blank lines and `#` comments are ignored."""
    kind = name = None
    n = None
    items: list[tuple[int, ...]] = []
    labels: dict[int, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        if kind is None:
            if tok[0] not in _KINDS or len(tok) > 2:
                raise ParseError("expected header 'graph <name>', 'multigraph <name>' or 'digraph <name>'", lineno)
            kind = tok[0]
            name = tok[1] if len(tok) == 2 else ""
            continue
        if n is None:
            if tok[0] != "n" or len(tok) != 2:
                raise ParseError("expected 'n <count>'", lineno)
            n = _int(tok[1], lineno)
            if n < 0:
                raise ParseError("vertex count must be nonnegative", lineno)
            continue
        if tok[0] == "v":
            if len(tok) < 3:
                raise ParseError("expected 'v <index> <label>'", lineno)
            idx = _int(tok[1], lineno)
            if not 0 <= idx < n:
                raise ParseError(f"vertex {idx} out of range", lineno)
            labels[idx] = " ".join(tok[2:])
            continue
        want = _KINDS[kind]
        if tok[0] != want:
            raise ParseError(f"unexpected line kind {tok[0]!r} in a {kind} file", lineno)
        arity = 3 if want == "e" else 4
        if len(tok) != arity:
            raise ParseError(f"'{want}' lines take {arity - 1} integers", lineno)
        vals = tuple(_int(t, lineno) for t in tok[1:])
        u, v = vals[0], vals[1]
        if not (0 <= u < n and 0 <= v < n):
            raise ParseError(f"vertex out of range in {line!r}", lineno)
        if want == "e" and u == v:
            raise ParseError("loops are not allowed in a simple graph", lineno)
        if want != "e" and vals[2] < 0:
            raise ParseError("multiplicity must be nonnegative", lineno)
        items.append(vals)
    if kind is None:
        raise ParseError("empty input")
    if n is None:
        raise ParseError("missing 'n <count>' line")
    lab = None
    if labels:
        lab = tuple(labels.get(i, str(i)) for i in range(n))
    if kind == "graph":
        return name, Graph.from_edges(n, [(u, v) for u, v in items], lab)
    if kind == "multigraph":
        return name, Multigraph.from_pairs(n, items)
    return name, Digraph.from_arcs(n, items)


def _int(tok: str, lineno: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise ParseError(f"expected an integer, got {tok!r}", lineno) from None


def read_file(path) -> tuple[str, Graph | Multigraph | Digraph]:
    with open(path, encoding="utf-8") as fh:
        return loads(fh.read())


def write_file(path, obj, name: str = "G") -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj, name))

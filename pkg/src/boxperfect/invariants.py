"""Exact graph parameters and recognition predicates for small graphs."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, InternalCheckError, PreconditionError
from .graph import Graph, bits, complement, iter_bits, to_mask


def _need(n: int, limit: int, key: str) -> None:
    if n > limit:
        raise BudgetExceeded(key, limit, f"graph has {n} vertices")


# stable sets and cliques

def max_weight_stable_set(g: Graph, w: Sequence[int] | None = None) -> tuple[int, tuple[int, ...]]:
    """Maximum total weight of a stable set, with a witness.

    Include-first branch and bound on the lowest remaining vertex; the bound
    is a greedy clique partition of the candidates (each clique contributes
    its heaviest vertex). Only strict improvements replace the incumbent, so
    the witness is the first optimum met in this fixed order.
    """
    if w is None:
        w = [1] * g.n
    if len(w) != g.n:
        raise PreconditionError("weight vector length must equal n")
    if any(x < 0 for x in w):
        raise PreconditionError("weights must be nonnegative")
    adj = g.adj
    best = [-1, 0]

    def bound(cand: int) -> int:
        total = 0
        cliques: list[list[int]] = []  # [mask, max weight]
        for v in iter_bits(cand):
            for c in cliques:
                if c[0] & ~adj[v] == 0:
                    c[0] |= 1 << v
                    if w[v] > c[1]:
                        c[1] = w[v]
                    break
            else:
                cliques.append([1 << v, w[v]])
        for c in cliques:
            total += c[1]
        return total

    def go(cand: int, chosen: int, value: int) -> None:
        if not cand:
            if value > best[0]:
                best[0], best[1] = value, chosen
            return
        if value + bound(cand) <= best[0]:
            return
        v = (cand & -cand).bit_length() - 1
        go(cand & ~adj[v] & ~(1 << v), chosen | 1 << v, value + w[v])
        go(cand & ~(1 << v), chosen, value)

    go(g.full, 0, 0)
    return best[0], tuple(bits(best[1]))


def stability_number(g: Graph) -> int:
    return max_weight_stable_set(g)[0]


def clique_number(g: Graph) -> int:
    return max_weight_stable_set(complement(g))[0]


def chromatic_number(g: Graph, budgets: Budgets = DEFAULT) -> int:
    """Smallest k admitting a proper colouring, by DSATUR-ordered backtracking."""
    _need(g.n, budgets.chi_max_n, "chi_max_n")
    if g.n == 0:
        return 0
    k = max(1, clique_number(g))
    while not _colourable(g, k):
        k += 1
    return k


def _colourable(g: Graph, k: int) -> bool:
    n = g.n
    colour = [-1] * n
    used = [0] * n  # bitmask of colours seen among neighbours

    def pick() -> int:
        best, key = -1, None
        for v in range(n):
            if colour[v] < 0:
                cand = (used[v].bit_count(), g.degree(v), -v)
                if key is None or cand > key:
                    best, key = v, cand
        return best

    def go(done: int, top: int) -> bool:
        if done == n:
            return True
        v = pick()
        # symmetry: a fresh colour only needs trying once
        for c in range(min(k, top + 1)):
            if used[v] >> c & 1:
                continue
            colour[v] = c
            touched = []
            for u in iter_bits(g.adj[v]):
                if not used[u] >> c & 1:
                    used[u] |= 1 << c
                    touched.append(u)
            if go(done + 1, max(top, c + 1)):
                return True
            for u in touched:
                used[u] &= ~(1 << c)
            colour[v] = -1
        return False

    return go(0, 0)


def clique_cover_number(g: Graph, budgets: Budgets = DEFAULT) -> int:
    return chromatic_number(complement(g), budgets)


@dataclass(frozen=True)
class ParamReport:
    alpha: int
    omega: int
    chi: int
    chibar: int

    def to_dict(self) -> dict:
        return {"alpha": self.alpha, "omega": self.omega, "chi": self.chi, "chibar": self.chibar}


def parameters(g: Graph, budgets: Budgets = DEFAULT) -> ParamReport:
    return ParamReport(stability_number(g), clique_number(g),
                       chromatic_number(g, budgets), clique_cover_number(g, budgets))


# subset tables

def _cover_table(g: Graph) -> list[int]:
    """t[X] = minimum number of cliques of G covering X, for every subset X."""
    n = g.n
    t = [0] * (1 << n)
    for x in range(1, 1 << n):
        low = (x & -x).bit_length() - 1
        rest = x & g.adj[low]
        best = n + 1
        # every clique through `low` inside X; sub ranges over subsets of rest
        sub = rest
        while True:
            if g.is_clique(sub):
                val = t[x & ~sub & ~(1 << low)]
                if val < best:
                    best = val
            if sub == 0:
                break
            sub = (sub - 1) & rest
        t[x] = best + 1
    return t


@dataclass(frozen=True)
class QPerfectReport:
    q: int
    alpha_q: int
    chibar_q: int
    witness_X_alpha: tuple[int, ...]
    witness_X_chibar: tuple[int, ...]

    @property
    def holds(self) -> bool:
        return self.alpha_q == self.chibar_q

    def to_dict(self) -> dict:
        return {"q": self.q, "alpha_q": self.alpha_q, "chibar_q": self.chibar_q,
                "witness_X_alpha": list(self.witness_X_alpha),
                "witness_X_chibar": list(self.witness_X_chibar), "holds": self.holds}


class _QTables:
    def __init__(self, g: Graph, budgets: Budgets):
        _need(g.n, budgets.qperfect_max_n, "qperfect_max_n")
        self.g = g
        self.chibar = _cover_table(g)
        self.chi = _cover_table(complement(g))


def _lex_key(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def q_perfect_report(g: Graph, q: int, budgets: Budgets = DEFAULT,
                     tables: _QTables | None = None) -> QPerfectReport:
    """alpha_q = max |X| with chi(G[X]) <= q; chibar_q = min over X of q*chibar(G - X) + |X|.

    Ties are broken by the smaller set, then lexicographically.
    """
    if q < 1:
        raise PreconditionError("q must be a positive integer")
    t = tables or _QTables(g, budgets)
    full = g.full
    a_best, a_wit = -1, 0
    c_best, c_wit = None, 0
    for x in range(1 << g.n):
        size = x.bit_count()
        if t.chi[x] <= q:
            if size > a_best or (size == a_best and _lex_key(x) < _lex_key(a_wit)):
                a_best, a_wit = size, x
        val = q * t.chibar[full & ~x] + size
        if c_best is None or (val, size, _lex_key(x)) < (c_best, c_wit.bit_count(), _lex_key(c_wit)):
            c_best, c_wit = val, x
    return QPerfectReport(q, a_best, c_best, tuple(bits(a_wit)), tuple(bits(c_wit)))


def is_q_perfect(g: Graph, q: int, budgets: Budgets = DEFAULT,
                 tables: _QTables | None = None) -> tuple[bool, tuple[int, ...] | None]:
    """alpha_q = chibar_q on every induced subgraph; witness = first failing X in mask order."""
    if q < 1:
        raise PreconditionError("q must be a positive integer")
    t = tables or _QTables(g, budgets)
    size = 1 << g.n
    f = [0] * size
    h = [0] * size
    for x in range(1, size):
        if t.chi[x] <= q:
            f[x] = x.bit_count()
        else:
            f[x] = max(f[x & ~(1 << v)] for v in iter_bits(x))
        h[x] = min([q * t.chibar[x]] + [h[x & ~(1 << v)] + 1 for v in iter_bits(x)])
        if f[x] != h[x]:
            if f[x] > h[x]:
                raise InternalCheckError("alpha_q exceeded chibar_q")
            return False, tuple(bits(x))
    return True, None


def is_totally_perfect(g: Graph, budgets: Budgets = DEFAULT) -> tuple[bool, tuple[int, tuple[int, ...]] | None]:
    """q-perfect for q = 1..n. Larger q add nothing: once q >= chi(G) both sides equal |X|."""
    t = _QTables(g, budgets)
    for q in range(1, max(1, g.n) + 1):
        ok, wit = is_q_perfect(g, q, budgets, t)
        if not ok:
            return False, (q, wit)
    return True, None


# perfectness

def _odd_hole(g: Graph) -> list[int] | None:
    """First chordless odd cycle of length >= 5, searching from the smallest start vertex."""
    adj = g.adj
    for s in range(g.n):
        allowed = g.full & ~((1 << (s + 1)) - 1)
        path = [s]

        def go(used: int) -> list[int] | None:
            last = path[-1]
            inner = used & ~(1 << s) & ~(1 << last)
            for v in iter_bits(adj[last] & allowed & ~used):
                if adj[v] & inner:
                    continue
                closes = len(path) > 1 and adj[v] >> s & 1
                if closes:
                    if len(path) + 1 >= 5 and (len(path) + 1) % 2 == 1:
                        return path + [v]
                    continue
                path.append(v)
                res = go(used | 1 << v)
                path.pop()
                if res:
                    return res
            return None

        res = go(1 << s)
        if res:
            return res
    return None


def is_perfect(g: Graph, budgets: Budgets = DEFAULT) -> tuple[bool, dict | None]:
    """No odd hole and no odd antihole. Witness: {'kind': 'hole'|'antihole', 'cycle': [...]}."""
    _need(g.n, budgets.perfect_max_n, "perfect_max_n")
    hole = _odd_hole(g)
    if hole:
        return False, {"kind": "hole", "cycle": hole}
    anti = _odd_hole(complement(g))
    if anti:
        return False, {"kind": "antihole", "cycle": anti}
    return True, None


def is_perfect_bruteforce(g: Graph) -> bool:
    """omega = chi on every induced subgraph, from subset tables. Test oracle."""
    chi = _cover_table(complement(g))
    omega = [0] * (1 << g.n)
    for x in range(1, 1 << g.n):
        if g.is_clique(x):
            omega[x] = x.bit_count()
        else:
            omega[x] = max(omega[x & ~(1 << v)] for v in iter_bits(x))
        if omega[x] != chi[x]:
            return False
    return True


# split, parity, claw-free

def is_split(g: Graph) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """(clique part, stable part) or None.

    Degree-sequence test: with degrees sorted in decreasing order (ties by
    index), the top m vertices, m = max{i : d_i >= i - 1}, form the clique.
    """
    if g.n == 0:
        return (), ()
    order = sorted(range(g.n), key=lambda v: (-g.degree(v), v))
    deg = [g.degree(v) for v in order]
    m = max(i for i in range(1, g.n + 1) if deg[i - 1] >= i - 1)
    clique = to_mask(order[:m])
    stable = g.full & ~clique
    if sum(deg[:m]) == m * (m - 1) + sum(deg[m:]):
        if not (g.is_clique(clique) and g.is_stable(stable)):
            raise InternalCheckError("split witness from degree sequence is invalid")
        return tuple(bits(clique)), tuple(bits(stable))
    return None


def is_split_bruteforce(g: Graph) -> bool:
    for x in range(1 << g.n):
        if g.is_clique(x) and g.is_stable(g.full & ~x):
            return True
    return False


def is_claw_free(g: Graph) -> bool:
    for v in range(g.n):
        nb = bits(g.adj[v])
        for i, a in enumerate(nb):
            for j in range(i + 1, len(nb)):
                b = nb[j]
                if g.has_edge(a, b):
                    continue
                for c in nb[j + 1:]:
                    if not g.has_edge(a, c) and not g.has_edge(b, c):
                        return False
    return True


def induced_paths_from(g: Graph, s: int):
    """Yield every induced path starting at s, in DFS order with increasing neighbours."""
    adj = g.adj
    path = [s]

    def go(used: int):
        yield list(path)
        last = path[-1]
        inner = used & ~(1 << last)
        for v in iter_bits(adj[last] & ~used):
            if adj[v] & inner:
                continue
            path.append(v)
            yield from go(used | 1 << v)
            path.pop()

    yield from go(1 << s)


def is_parity(g: Graph, budgets: Budgets = DEFAULT) -> tuple[bool, tuple[list[int], list[int]] | None]:
    """All induced u-v paths have equal length parity, for every pair u < v.

    Witness for failure: the least pair (u, v) and, in DFS order, its first
    induced path and the first one of the other parity.
    """
    _need(g.n, budgets.parity_max_n, "parity_max_n")
    for u in range(g.n):
        first: dict[int, list[int]] = {}
        other: dict[int, list[int]] = {}
        for p in induced_paths_from(g, u):
            v = p[-1]
            if v <= u:
                continue
            if v not in first:
                first[v] = p
            elif (len(p) - len(first[v])) % 2 and v not in other:
                other[v] = p
        if other:
            v = min(other)
            return False, (first[v], other[v])
    return True, None


# comparability

@dataclass(frozen=True)
class Orientation:
    """Edge directions as arcs (u, v) meaning u -> v; one arc per edge of the graph."""
    n: int
    arcs: tuple[tuple[int, int], ...]

    def successors(self) -> list[int]:
        succ = [0] * self.n
        for u, v in self.arcs:
            succ[u] |= 1 << v
        return succ

    def is_transitive_for(self, g: Graph) -> bool:
        if len(self.arcs) != g.m:
            return False
        succ = self.successors()
        for u, v in self.arcs:
            if not g.has_edge(u, v) or succ[v] >> u & 1:
                return False
        for a in range(self.n):
            for b in iter_bits(succ[a]):
                if succ[b] & ~succ[a]:
                    return False
        return True


def transitive_orientation(g: Graph, budgets: Budgets = DEFAULT) -> Orientation | None:
    """A transitive orientation, or None if G is not a comparability graph.

    Edges are fixed one at a time (lowest unoriented edge, low -> high first);
    each choice is propagated through the forcing relation and transitivity,
    and contradictions backtrack.
    """
    _need(g.n, budgets.orientation_max_n, "orientation_max_n")
    n = g.n
    adj = g.adj
    edges = g.edges()

    def propagate(succ: list[int], queue: list[tuple[int, int]]) -> list[int] | None:
        succ = list(succ)
        while queue:
            a, b = queue.pop()
            if succ[a] >> b & 1:
                continue
            if succ[b] >> a & 1:
                return None
            succ[a] |= 1 << b
            # forcing: a->b forces a->c for c ~ a, c !~ b; and c->b for c ~ b, c !~ a
            for c in iter_bits(adj[a] & ~adj[b] & ~(1 << b)):
                queue.append((a, c))
            for c in iter_bits(adj[b] & ~adj[a] & ~(1 << a)):
                queue.append((c, b))
            # transitivity through the new arc
            for c in iter_bits(succ[b]):
                if not adj[a] >> c & 1 or c == a:
                    return None
                queue.append((a, c))
            for c in range(n):
                if succ[c] >> a & 1:
                    if not adj[c] >> b & 1 or c == b:
                        return None
                    queue.append((c, b))
        return succ

    def go(succ: list[int]) -> list[int] | None:
        for u, v in edges:
            if not (succ[u] >> v & 1 or succ[v] >> u & 1):
                break
        else:
            return succ
        for a, b in ((u, v), (v, u)):
            nxt = propagate(succ, [(a, b)])
            if nxt is not None:
                res = go(nxt)
                if res is not None:
                    return res
        return None

    succ = go([0] * n)
    if succ is None:
        return None
    arcs = tuple(sorted((a, b) for a in range(n) for b in iter_bits(succ[a])))
    ori = Orientation(n, arcs)
    if not ori.is_transitive_for(g):
        raise InternalCheckError("orientation search returned a non-transitive orientation")
    return ori


def is_comparability(g: Graph, budgets: Budgets = DEFAULT) -> bool:
    return transitive_orientation(g, budgets) is not None


def is_incomparability(g: Graph, budgets: Budgets = DEFAULT) -> bool:
    return transitive_orientation(complement(g), budgets) is not None

"""Equitable subpartitions of clique families, and the splitting routines behind them.

Notation: for a multiset L of cliques, d_L(v) counts the members containing v.
A pair (L1, L2) is an equitable subpartition of L when
  (i)   |L1| + |L2| <= |L|,
  (ii)  d_L1 + d_L2 >= d_L, and
  (iii) min(d_L1, d_L2) >= floor(d_L / 2) at every vertex.
"""
from __future__ import annotations

import sys
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterable, Sequence

from .cliques import CliqueFamily, clique_matrix, clique_sort_key, maximal_cliques
from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, InternalCheckError, ParseError, PreconditionError
from .flows import feasible_circulation
from .graph import Digraph, Graph, Multigraph, bits, complement, iter_bits, to_mask
from .invariants import Orientation, is_perfect, max_weight_stable_set

sys.setrecursionlimit(max(sys.getrecursionlimit(), 10000))


@dataclass(frozen=True)
class CliqueMultiset:
    """Entries are (clique bitmask, multiplicity), kept sorted and merged."""
    entries: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, cliques: Iterable[int | Sequence[int]]) -> "CliqueMultiset":
        counts: dict[int, int] = {}
        for c in cliques:
            mask = c if isinstance(c, int) else to_mask(c)
            counts[mask] = counts.get(mask, 0) + 1
        return cls.from_counts(counts)

    @classmethod
    def from_counts(cls, counts: dict[int, int]) -> "CliqueMultiset":
        items = [(m, k) for m, k in counts.items() if k > 0]
        return cls(tuple(sorted(items, key=lambda e: (clique_sort_key(e[0]), e[1]))))

    @property
    def size(self) -> int:
        return sum(k for _, k in self.entries)

    def __len__(self) -> int:
        return self.size

    def members(self) -> list[int]:
        return [m for m, k in self.entries for _ in range(k)]

    def degrees(self, n: int) -> list[int]:
        d = [0] * n
        for m, k in self.entries:
            for v in iter_bits(m):
                if v >= n:
                    raise PreconditionError(f"clique vertex {v} out of range")
                d[v] += k
        return d

    def check_cliques(self, g: Graph) -> None:
        for m, _ in self.entries:
            if m & ~g.full:
                raise PreconditionError(f"clique {bits(m)} has a vertex out of range")
            if not g.is_clique(m):
                raise PreconditionError(f"{bits(m)} is not a clique")

    def dumps(self) -> str:
        return "".join(f"k {k} {' '.join(map(str, bits(m)))}".rstrip() + "\n"
                       for m, k in self.entries)

    @classmethod
    def loads(cls, text: str) -> "CliqueMultiset":
        counts: dict[int, int] = {}
        for lineno, raw in enumerate(text.splitlines(), 1):
            tok = raw.split("#", 1)[0].split()
            if not tok:
                continue
            if tok[0] != "k" or len(tok) < 2:
                raise ParseError("expected 'k <mult> v1 v2 ...'", lineno)
            try:
                vals = [int(t) for t in tok[1:]]
            except ValueError:
                raise ParseError("expected integers", lineno) from None
            if vals[0] < 0 or any(v < 0 for v in vals[1:]):
                raise ParseError("negative value", lineno)
            mask = to_mask(vals[1:])
            counts[mask] = counts.get(mask, 0) + vals[0]
        return cls.from_counts(counts)

    def to_json(self) -> list:
        return [{"clique": bits(m), "mult": k} for m, k in self.entries]


@dataclass(frozen=True)
class EquitableSubpartition:
    part1: CliqueMultiset
    part2: CliqueMultiset


def _floor_ceil(d: Sequence[int]) -> tuple[list[int], list[int]]:
    return [x // 2 for x in d], [(x + 1) // 2 for x in d]


def check_equitable_subpartition(g: Graph, lam: CliqueMultiset, lam1: CliqueMultiset,
                                 lam2: CliqueMultiset) -> tuple[bool, tuple[str, int | None] | None]:
    """Returns (ok, None) or (False, (condition, vertex)) for the first failed condition."""
    for fam in (lam, lam1, lam2):
        fam.check_cliques(g)
    if lam1.size + lam2.size > lam.size:
        return False, ("i", None)
    d = lam.degrees(g.n)
    d1 = lam1.degrees(g.n)
    d2 = lam2.degrees(g.n)
    for v in range(g.n):
        if d1[v] + d2[v] < d[v]:
            return False, ("ii", v)
    for v in range(g.n):
        if min(d1[v], d2[v]) < d[v] // 2:
            return False, ("iii", v)
    return True, None


class CoverOracle:
    """kappa(t): fewest cliques of G (with repetition) covering each v at least t[v] times.

    Memoised recursion: some clique of an optimal cover contains the lowest
    vertex with positive demand, and it may be taken maximal.
    """

    def __init__(self, g: Graph, budgets: Budgets = DEFAULT, family: CliqueFamily | None = None):
        self.g = g
        self.budgets = budgets
        fam = family if family is not None else maximal_cliques(g, budgets)
        self.cliques = list(fam.cliques)
        self.through = [[k for k in self.cliques if k >> v & 1] for v in range(g.n)]
        self.memo: dict[tuple[int, ...], int] = {(0,) * g.n: 0}

    def kappa(self, t: Sequence[int]) -> int:
        t = tuple(max(0, x) for x in t)
        memo = self.memo
        if t in memo:
            return memo[t]
        if len(memo) > self.budgets.esp_max_states:
            raise BudgetExceeded("esp_max_states", self.budgets.esp_max_states)
        v = next(i for i, x in enumerate(t) if x > 0)
        best = None
        for k in self.through[v]:
            rest = tuple(x - 1 if (k >> i & 1) and x > 0 else x for i, x in enumerate(t))
            val = self.kappa(rest)
            if best is None or val < best:
                best = val
        memo[t] = best + 1
        return best + 1

    def cover(self, t: Sequence[int]) -> list[int]:
        """An optimal cover trimmed so that v is covered exactly t[v] times."""
        t = tuple(max(0, x) for x in t)
        out = []
        cur = t
        while any(cur):
            v = next(i for i, x in enumerate(cur) if x > 0)
            target = self.kappa(cur) - 1
            for k in self.through[v]:
                rest = tuple(x - 1 if (k >> i & 1) and x > 0 else x for i, x in enumerate(cur))
                if self.kappa(rest) == target:
                    out.append(k)
                    cur = rest
                    break
            else:
                raise InternalCheckError("cover reconstruction failed")
        cov = [0] * self.g.n
        for k in out:
            for v in iter_bits(k):
                cov[v] += 1
        trimmed = []
        for k in out:
            for v in iter_bits(k):
                if cov[v] > t[v]:
                    k &= ~(1 << v)
                    cov[v] -= 1
            trimmed.append(k)
        if cov != list(t):
            raise InternalCheckError("trimmed cover does not meet the demand exactly")
        return trimmed


class _Splitter:
    """Finds the best split d = d1 + d2 with d1 between floor(d/2) and ceil(d/2)."""

    def __init__(self, g: Graph, budgets: Budgets, oracle: CoverOracle | None = None):
        self.oracle = oracle or CoverOracle(g, budgets)
        self.pairs: dict[tuple[int, ...], list[tuple[int, int, tuple[int, ...]]]] = {}

    def options(self, d: tuple[int, ...]) -> list[tuple[int, int, tuple[int, ...]]]:
        """(kappa(d1), kappa(d2), d1) for every d1 in the box, candidates in product order from floor."""
        if d in self.pairs:
            return self.pairs[d]
        lo, _ = _floor_ceil(d)
        odd = [i for i, x in enumerate(d) if x % 2]
        out = []
        for choice in product((0, 1), repeat=len(odd)):
            d1 = list(lo)
            for i, c in zip(odd, choice):
                d1[i] += c
            d2 = [a - b for a, b in zip(d, d1)]
            out.append((self.oracle.kappa(d1), self.oracle.kappa(d2), tuple(d1)))
        self.pairs[d] = out
        return out

    def find(self, d: tuple[int, ...], size: int, strong: bool) -> tuple[int, ...] | None:
        cap = (size + 1) // 2
        for k1, k2, d1 in self.options(d):
            if k1 + k2 <= size and (not strong or (k1 <= cap and k2 <= cap)):
                return d1
        return None


def find_equitable_subpartition(g: Graph, lam: CliqueMultiset, budgets: Budgets = DEFAULT,
                                strong: bool = False, _splitter: _Splitter | None = None
                                ) -> EquitableSubpartition | None:
    """First equitable subpartition in a fixed order, or None when none exists.

    Any solution can be trimmed to d_L1 + d_L2 = d_L with each side between
    floor and ceil of d_L / 2, so it suffices to try each such d1 (starting
    from floor) and ask whether the two demand vectors can be covered by at
    most |L| cliques in total. Minimum covers are exact, so None is a proof.
    With `strong`, each side is also capped at ceil(|L| / 2).
    """
    lam.check_cliques(g)
    sp = _splitter or _Splitter(g, budgets)
    d = tuple(lam.degrees(g.n))
    d1 = sp.find(d, lam.size, strong)
    if d1 is None:
        return None
    d2 = tuple(a - b for a, b in zip(d, d1))
    p1 = CliqueMultiset.of(sp.oracle.cover(d1))
    p2 = CliqueMultiset.of(sp.oracle.cover(d2))
    ok, why = check_equitable_subpartition(g, lam, p1, p2)
    if not ok:
        raise InternalCheckError(f"constructed subpartition fails condition {why}")
    return EquitableSubpartition(p1, p2)


def _clique_sets(cliques: list[int]):
    for size in range(1, len(cliques) + 1):
        for combo in combinations(range(len(cliques)), size):
            yield [cliques[i] for i in combo]


def is_esp(g: Graph, mode: str = "direct", budgets: Budgets = DEFAULT
           ) -> tuple[bool, dict | None]:
    """ESP test.

    direct: every nonempty set of maximal cliques (by size, then index order)
            must admit an equitable subpartition; witness {'Lambda': [...]}.
    perfect-reform: G must be perfect; every d <= c_G (lexicographic order)
            needs d1 in the floor/ceil box with a(d1) + a(d - d1) <= a(d),
            a = maximum d-weight of a stable set; witness {'d': [...]}.
    """
    if mode == "direct":
        return _esp_direct(g, budgets, strong=False)
    if mode in ("perfect-reform", "reform"):
        return _esp_reform(g, budgets)
    raise PreconditionError(f"unknown mode {mode!r}")


def is_strong_esp(g: Graph, budgets: Budgets = DEFAULT) -> tuple[bool, dict | None]:
    return _esp_direct(g, budgets, strong=True)


def _esp_direct(g: Graph, budgets: Budgets, strong: bool) -> tuple[bool, dict | None]:
    fam = maximal_cliques(g, budgets)
    if len(fam) > budgets.esp_max_cliques:
        raise BudgetExceeded("esp_max_cliques", budgets.esp_max_cliques,
                             f"{len(fam)} maximal cliques")
    sp = _Splitter(g, budgets, CoverOracle(g, budgets, fam))
    for lam in _clique_sets(list(fam.cliques)):
        d = [0] * g.n
        for k in lam:
            for v in iter_bits(k):
                d[v] += 1
        if sp.find(tuple(d), len(lam), strong) is None:
            return False, {"Lambda": [bits(k) for k in lam]}
    return True, None


def _esp_reform(g: Graph, budgets: Budgets) -> tuple[bool, dict | None]:
    perfect, _ = is_perfect(g, budgets)
    if not perfect:
        raise PreconditionError("perfect-reform mode needs a perfect graph")
    _, c = clique_matrix(g, budgets)
    points = 1
    for x in c:
        points *= x + 1
    if points > budgets.reform_max_points:
        raise BudgetExceeded("reform_max_points", budgets.reform_max_points, f"{points} vectors d")
    alpha_memo: dict[tuple[int, ...], int] = {}

    def alpha(d: tuple[int, ...]) -> int:
        if d not in alpha_memo:
            alpha_memo[d] = max_weight_stable_set(g, d)[0]
        return alpha_memo[d]

    for d in product(*(range(x + 1) for x in c)):
        target = alpha(d)
        lo, _ = _floor_ceil(d)
        odd = [i for i, x in enumerate(d) if x % 2]
        for choice in product((0, 1), repeat=len(odd)):
            d1 = list(lo)
            for i, ch in zip(odd, choice):
                d1[i] += ch
            d2 = tuple(a - b for a, b in zip(d, d1))
            if alpha(tuple(d1)) + alpha(d2) <= target:
                break
        else:
            return False, {"d": list(d)}
    return True, None


# incomparability graphs

def incomparability_partition(g: Graph, orient: Orientation, d: Sequence[int],
                              budgets: Budgets = DEFAULT) -> tuple[list[int], list[int]]:
    """Split d by peeling the maximal elements of the poset blown up by d.

    `orient` is a transitive orientation of the complement of G; an arc
    u -> v means u lies below v. Each vertex becomes a chain of d[v] copies;
    layers of maximal elements alternate between side 1 (odd layers) and
    side 2. The postconditions are checked before returning.
    """
    d = list(d)
    if len(d) != g.n or any(x < 0 for x in d):
        raise PreconditionError("d must be a nonnegative vector of length n")
    comp = complement(g)
    if orient.n != g.n or not orient.is_transitive_for(comp):
        raise PreconditionError("orientation is not a transitive orientation of the complement")
    _, c = clique_matrix(g, budgets)
    if any(a > b for a, b in zip(d, c)):
        raise PreconditionError("d must satisfy d <= c_G")
    succ = orient.successors()
    rem = list(d)
    d1 = [0] * g.n
    layer = 0
    while any(rem):
        layer += 1
        live = to_mask(v for v in range(g.n) if rem[v])
        top = [v for v in range(g.n) if rem[v] and not succ[v] & live]
        if not top:
            raise InternalCheckError("no maximal element found while peeling")
        for v in top:
            rem[v] -= 1
            if layer % 2:
                d1[v] += 1
    d2 = [a - b for a, b in zip(d, d1)]
    lo, hi = _floor_ceil(d)
    for part in (d1, d2):
        if any(not lo[v] <= part[v] <= hi[v] for v in range(g.n)):
            raise InternalCheckError("peeling produced an unbalanced split")
    a = max_weight_stable_set(g, d)[0]
    if layer != a:
        raise InternalCheckError("layer count differs from the stability number of G^d")
    if max_weight_stable_set(g, d1)[0] + max_weight_stable_set(g, d2)[0] > a:
        raise InternalCheckError("peeled split violates the stability inequality")
    return d1, d2


# two-clique graphs

def consecutive_clique_family(g: Graph, lam: CliqueMultiset, x: int | Sequence[int],
                              y: int | Sequence[int]) -> list[int]:
    """Q_i = X_i | Y_i for i = 1..|L|, with X_i = {x : i <= d(x)} and
    Y_i = {y : i >= |L| - d(y) + 1}. Every x then sits in the first d(x)
    terms and every y in the last d(y)."""
    xm = x if isinstance(x, int) else to_mask(x)
    ym = y if isinstance(y, int) else to_mask(y)
    if xm & ym or (xm | ym) != g.full:
        raise PreconditionError("X and Y must partition the vertex set")
    if not g.is_clique(xm) or not g.is_clique(ym):
        raise PreconditionError("X and Y must both be cliques")
    lam.check_cliques(g)
    size = lam.size
    d = lam.degrees(g.n)
    out = []
    for i in range(1, size + 1):
        q = to_mask(v for v in iter_bits(xm) if i <= d[v])
        q |= to_mask(v for v in iter_bits(ym) if i >= size - d[v] + 1)
        if not g.is_clique(q):
            pair = next((a, b) for a in iter_bits(q & xm) for b in iter_bits(q & ym)
                        if not g.has_edge(a, b))
            raise PreconditionError(
                f"Q_{i} is not a clique: {pair[0]} and {pair[1]} are nonadjacent "
                f"with d({pair[0]}) + d({pair[1]}) = {d[pair[0]] + d[pair[1]]} > {size}")
        out.append(q)
    got = [0] * g.n
    for q in out:
        for v in iter_bits(q):
            got[v] += 1
    if got != d:
        raise InternalCheckError("consecutive family changed a vertex degree")
    return out


# circulations

def is_circulation(dg: Digraph, f: Sequence[int]) -> bool:
    if len(f) != len(dg.arcs) or any(x < 0 for x in f):
        return False
    bal = [0] * dg.n
    for (u, v, _), x in zip(dg.arcs, f):
        bal[u] -= x
        bal[v] += x
    return not any(bal)


def circulation_split(dg: Digraph, f: Sequence[int]) -> tuple[list[int], list[int]]:
    """f = f1 + f2 with both circulations and floor(f/2) <= f_i <= ceil(f/2) per arc.

    Flows are indexed by the entries of `dg.arcs`. Side 1 takes the ceiling on
    the first arc with odd flow; swapping the sides of any split shows this is
    no restriction.
    """
    f = [int(x) for x in f]
    if len(f) != len(dg.arcs):
        raise PreconditionError("f must have one entry per arc")
    if any(x < 0 for x in f):
        raise PreconditionError("f must be nonnegative")
    if not is_circulation(dg, f):
        raise PreconditionError("f is not conserved at every vertex")
    bounds = []
    first_odd = next((i for i, x in enumerate(f) if x % 2), None)
    for i, ((u, v, _), x) in enumerate(zip(dg.arcs, f)):
        lo, hi = x // 2, (x + 1) // 2
        if i == first_odd:
            lo = hi
        bounds.append((u, v, lo, hi))
    f1 = feasible_circulation(dg.n, bounds)
    if f1 is None:
        raise InternalCheckError("no balanced split of a circulation was found")
    f2 = [a - b for a, b in zip(f, f1)]
    if not (is_circulation(dg, f1) and is_circulation(dg, f2)):
        raise InternalCheckError("split parts are not circulations")
    return f1, f2


# degree-balanced multigraph splitting

def matching_degree_split(h: Multigraph, mu: Sequence[int] | None = None
                          ) -> tuple[list[int], list[int]] | None:
    """Split multiplicities mu = mu1 + mu2 (aligned with `h.mult`) so that every
    edge gets at least floor(mu/2) on each side, Delta(mu1) <= ceil(Delta/2) and
    Delta(mu2) <= floor(Delta/2), Delta being the maximum mu-degree.

    After giving floor(mu/2) to each side, the odd edges decide the rest. The
    degree caps become interval bounds on how many odd edges at each vertex go
    to side 1, which is a bipartite flow feasibility problem; None means the
    flow proves no split exists.
    """
    pairs = [p for p, _ in h.mult]
    mu = [k for _, k in h.mult] if mu is None else [int(x) for x in mu]
    if len(mu) != len(pairs) or any(x < 0 for x in mu):
        raise PreconditionError("mu must be nonnegative with one entry per pair")
    simple = Graph.from_edges(h.n, [p for p, k in zip(pairs, mu) if k > 0 and p[0] != p[1]]) \
        if all(p[0] != p[1] for p, k in zip(pairs, mu) if k > 0) else None
    if simple is None:
        raise PreconditionError("multigraph has loops, so it is not bipartite")
    side = simple.bipartition()
    if side is None:
        raise PreconditionError("multigraph is not bipartite")
    left = side[0]
    deg = [0] * h.n
    base = [0] * h.n
    odd_deg = [0] * h.n
    for (u, v), k in zip(pairs, mu):
        for w in (u, v):
            deg[w] += k
            base[w] += k // 2
            odd_deg[w] += k % 2
    delta = max(deg, default=0)
    up, down = (delta + 1) // 2, delta // 2
    n = h.n
    src, snk = n, n + 1
    arcs = []
    odd_edges = []
    for idx, ((u, v), k) in enumerate(zip(pairs, mu)):
        if k % 2:
            a, b = (u, v) if left >> u & 1 else (v, u)
            odd_edges.append(idx)
            arcs.append((a, b, 0, 1))
    for w in range(n):
        lo = max(0, base[w] + odd_deg[w] - down)
        hi = min(odd_deg[w], up - base[w])
        if hi < lo:
            return None
        if left >> w & 1:
            arcs.append((src, w, lo, hi))
        else:
            arcs.append((w, snk, lo, hi))
    arcs.append((snk, src, 0, None))
    flow = feasible_circulation(n + 2, arcs)
    if flow is None:
        return None
    mu1 = [k // 2 for k in mu]
    for j, idx in enumerate(odd_edges):
        mu1[idx] += flow[j]
    mu2 = [a - b for a, b in zip(mu, mu1)]
    ok, why = check_degree_split(h, mu, mu1, mu2)
    if not ok:
        raise InternalCheckError(f"degree split fails: {why}")
    return mu1, mu2


def check_degree_split(h: Multigraph, mu, mu1, mu2) -> tuple[bool, str | None]:
    pairs = [p for p, _ in h.mult]
    if any(a + b != c for a, b, c in zip(mu1, mu2, mu)):
        return False, "sum"
    if any(min(a, b) < c // 2 for a, b, c in zip(mu1, mu2, mu)):
        return False, "edge lower bound"

    def maxdeg(vec):
        deg = [0] * h.n
        for (u, v), k in zip(pairs, vec):
            deg[u] += k
            deg[v] += k
        return max(deg, default=0)

    delta = maxdeg(mu)
    if maxdeg(mu1) > (delta + 1) // 2:
        return False, "side 1 degree cap"
    if maxdeg(mu2) > delta // 2:
        return False, "side 2 degree cap"
    return True, None

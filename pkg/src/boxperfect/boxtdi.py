"""Exact certificates of non-box-perfectness and a bounded search for them.

Certificates live over B_G, the maximal-clique matrix. The full clique matrix
is never needed: every clique sits inside a maximal one, so a primal point
feasible for B_G is feasible for all cliques, and in the integral dual any
weight on a clique C can be moved to a maximal clique containing C without
losing feasibility or raising the objective (the objective coefficient of a
row is 1 - l(C), which only shrinks as C grows because l >= 0).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product
from math import lcm
from typing import Sequence

import numpy as np
import sympy

from .cliques import maximal_cliques
from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, InternalCheckError, PreconditionError
from .esp import CoverOracle
from .graph import Graph, bits, induced_subgraph, iter_bits, to_mask
from .tu import biadjacency, check_sides, class_q_membership

Rational = Fraction


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_frac(s) -> Fraction:
    if isinstance(s, int):
        return Fraction(s)
    return Fraction(str(s))


# construction records

@dataclass(frozen=True)
class RRecord:
    """How a graph was built from a bipartite G' = (U, V) and a graph G'' on V.

    `u_vertices` and `v_vertices` give, in the order of the rows and columns of
    M, the vertex of G representing each u and v (None for a deleted u).
    """
    m_rows: tuple[tuple[int, ...], ...]
    u_vertices: tuple[int | None, ...]
    v_vertices: tuple[int, ...]
    deleted: bool
    m: int

    @property
    def n_side(self) -> int:
        return len(self.v_vertices)

    def to_json(self) -> dict:
        return {"M": [list(r) for r in self.m_rows], "u_vertices": list(self.u_vertices),
                "v_vertices": list(self.v_vertices), "deleted": self.deleted, "m": self.m}

    @classmethod
    def from_json(cls, d: dict) -> "RRecord":
        return cls(tuple(tuple(r) for r in d["M"]), tuple(d["u_vertices"]),
                   tuple(d["v_vertices"]), bool(d["deleted"]), int(d["m"]))


def build_R_graph(gprime: Graph, u_side: Sequence[int], v_side: Sequence[int],
                  gsecond: Graph, budgets: Budgets = DEFAULT,
                  check_membership: bool = True) -> tuple[Graph, RRecord]:
    """G = (U + V, E' + E''). G'' has vertex i standing for v_side[i].

    The result keeps G' numbering; if some u sees all of V, that u is dropped
    and the later indices shift down by one.
    """
    check_sides(gprime, u_side, v_side)
    if gsecond.n != len(v_side):
        raise PreconditionError("G'' must have one vertex per member of V")
    if check_membership:
        member, _ = class_q_membership(gprime, u_side, v_side, budgets)
        if not member:
            raise PreconditionError("G' is not in class Q (biadjacency is not minimally non-TU)")
    vpos = {v: i for i, v in enumerate(v_side)}
    for u in u_side:
        nb = [vpos[v] for v in iter_bits(gprime.adj[u])]
        if not gsecond.is_clique(to_mask(nb)):
            raise PreconditionError(f"N(u) is not a clique of G'' for u = {u}")
    vmask = to_mask(v_side)
    full_u = [u for u in u_side if gprime.adj[u] == vmask]
    edges = gprime.edges() + [(v_side[a], v_side[b]) for a, b in gsecond.edges()]
    g = Graph.from_edges(gprime.n, edges, gprime.labels)
    mrows = biadjacency(gprime, u_side, v_side).rows
    total = sum(map(sum, mrows))
    if (total - 2) % 4:
        raise PreconditionError("edge count of G' is not 2 mod 4")
    m = (total - 2) // 4
    if full_u:
        u0 = full_u[0]
        keep = [v for v in range(g.n) if v != u0]
        pos = {v: i for i, v in enumerate(keep)}
        g = induced_subgraph(g, keep)
        rec = RRecord(mrows, tuple(pos.get(u) for u in u_side),
                      tuple(pos[v] for v in v_side), True, m)
    else:
        rec = RRecord(mrows, tuple(u_side), tuple(v_side), False, m)
    return g, rec


def smallest_prime_above(k: int) -> int:
    return int(sympy.nextprime(k))


# certificates

@dataclass(frozen=True)
class BoxCertificate:
    rows: tuple[tuple[int, ...], ...]
    w: tuple[int, ...]
    l: tuple[Fraction, ...]
    x: tuple[Fraction, ...]
    y: tuple[Fraction, ...]
    z: tuple[Fraction, ...]
    value: Fraction

    def to_json(self) -> dict:
        return {
            "rows": [list(r) for r in self.rows],
            "w": list(self.w),
            "l": [frac_str(a) for a in self.l],
            "x": [frac_str(a) for a in self.x],
            "y": [frac_str(a) for a in self.y],
            "z": [frac_str(a) for a in self.z],
            "value": frac_str(self.value),
        }

    @classmethod
    def from_json(cls, d: dict) -> "BoxCertificate":
        w = []
        for a in d["w"]:
            fa = parse_frac(a)
            w.append(int(fa) if fa.denominator == 1 else fa)
        return cls(tuple(tuple(int(v) for v in r) for r in d["rows"]), tuple(w),
                   tuple(parse_frac(a) for a in d["l"]), tuple(parse_frac(a) for a in d["x"]),
                   tuple(parse_frac(a) for a in d["y"]), tuple(parse_frac(a) for a in d["z"]),
                   parse_frac(d["value"]))


def _check_record(g: Graph, record: RRecord) -> None:
    """The record must describe g: M matches the U-V adjacency and U is stable."""
    for v in record.v_vertices:
        g.check_vertex(v)
    gone = [i for i, u in enumerate(record.u_vertices) if u is None]
    if record.deleted != bool(gone) or len(gone) > 1:
        raise PreconditionError("record's deleted flag disagrees with its U vertices")
    for i in gone:
        if not all(record.m_rows[i]):
            raise PreconditionError("only a U vertex adjacent to all of V may be deleted")
    kept = [u for u in record.u_vertices if u is not None]
    for a in kept:
        g.check_vertex(a)
        for b in kept:
            if a != b and g.has_edge(a, b):
                raise PreconditionError(f"U vertices {a} and {b} are adjacent in G")
    for i, u in enumerate(record.u_vertices):
        if u is None:
            continue
        for j, v in enumerate(record.v_vertices):
            if g.has_edge(u, v) != bool(record.m_rows[i][j]):
                raise PreconditionError(f"M[{i}][{j}] disagrees with the edge {u}-{v} of G")


def make_R_certificate(g: Graph, record: RRecord, p: int | None = None,
                       budgets: Budgets = DEFAULT) -> BoxCertificate:
    """Instantiate the primal/dual pair for a member of R, in B_G row order."""
    n = record.n_side
    m = record.m
    if len(record.m_rows) != n or len(record.u_vertices) != n:
        raise PreconditionError("record is not square")
    _check_record(g, record)
    fam = maximal_cliques(g, budgets)
    rows = [tuple(bits(k)) for k in fam.cliques]
    deg_u = [sum(r) for r in record.m_rows]
    deg_v = [sum(r[j] for r in record.m_rows) for j in range(n)]
    if sum(deg_u) != 4 * m + 2:
        raise PreconditionError("record edge count does not match m")
    if record.deleted:
        if p is not None:
            raise PreconditionError("the deleted-vertex case takes no prime")
        scale = Fraction(1, n)
        value = Fraction(2 * m + 1, n)
    else:
        if p is None:
            p = smallest_prime_above(2 * m + 1)
        if not sympy.isprime(p):
            raise PreconditionError(f"p = {p} is not prime")
        if p <= 2 * m + 1:
            raise PreconditionError(f"p = {p} must exceed 2m+1 = {2 * m + 1}")
        scale = Fraction(1, 2 * p)
        value = Fraction(2 * m + 1, 2 * p)
    w = [0] * g.n
    l = [Fraction(0)] * g.n
    x = [Fraction(0)] * g.n
    z = [Fraction(0)] * g.n
    u_set = set()
    for j, v in enumerate(record.v_vertices):
        if deg_v[j] % 2:
            raise PreconditionError("record has a V vertex of odd degree")
        w[v] = deg_v[j] // 2
        x[v] = scale
    for i, u in enumerate(record.u_vertices):
        if u is None:
            continue
        u_set.add(u)
        l[u] = 1 - scale * deg_u[i]
        x[u] = 1 - scale * deg_u[i]
        z[u] = Fraction(1, 2)
    if len(u_set) + n != g.n:
        raise PreconditionError("record does not cover the vertex set of G")
    vmask = to_mask(record.v_vertices)
    y = []
    for r in rows:
        mask = to_mask(r)
        if mask & to_mask(u_set):
            y.append(Fraction(1, 2))
        elif record.deleted and mask == vmask:
            y.append(Fraction(1, 2))
        else:
            y.append(Fraction(0))
    return BoxCertificate(tuple(rows), tuple(w), tuple(l), tuple(x), tuple(y), tuple(z), value)


@dataclass
class VerificationReport:
    checks: list[tuple[str, bool, str]] = field(default_factory=list)
    value: Fraction | None = None
    integral_dual: Fraction | None = None

    @property
    def passed(self) -> bool:
        return all(ok for _, ok, _ in self.checks)

    @property
    def failed(self) -> list[str]:
        return [name for name, ok, _ in self.checks if not ok]

    def add(self, name: str, ok: bool, detail: str = "") -> None:
        self.checks.append((name, bool(ok), detail))

    def to_json(self) -> dict:
        return {"passed": self.passed, "failed": self.failed,
                "checks": [{"name": a, "ok": b, "detail": c} for a, b, c in self.checks],
                "value": frac_str(self.value) if self.value is not None else None,
                "integral_dual": frac_str(self.integral_dual) if self.integral_dual is not None else None}


def verify_certificate(g: Graph, cert: BoxCertificate, exhaustive_dual: bool = False,
                       budgets: Budgets = DEFAULT) -> VerificationReport:
    """Recompute every claim of the certificate with exact rationals.

    Failed checks are itemised by name: dimensions, rows, w_integral,
    l_nonnegative, primal_feasibility, dual_feasibility, objective,
    integrality_obstruction and (optionally) integral_dual_gap.
    """
    rep = VerificationReport()
    fam = maximal_cliques(g, budgets)
    expected = sorted(tuple(bits(k)) for k in fam.cliques)
    k = len(cert.rows)
    dims_ok = (len(cert.w) == len(cert.l) == len(cert.x) == len(cert.z) == g.n
               and len(cert.y) == k)
    rep.add("dimensions", dims_ok,
            "" if dims_ok else f"n={g.n}, rows={k}, |w|={len(cert.w)}, |l|={len(cert.l)}, "
                               f"|x|={len(cert.x)}, |y|={len(cert.y)}, |z|={len(cert.z)}")
    if not dims_ok:
        return rep
    rows_ok = sorted(tuple(r) for r in cert.rows) == expected and len(set(cert.rows)) == k
    rep.add("rows", rows_ok, "" if rows_ok else "rows are not exactly the maximal cliques of G")
    if not rows_ok:
        return rep
    masks = [to_mask(r) for r in cert.rows]
    w, l, x, y, z = cert.w, cert.l, cert.x, cert.y, cert.z
    bad_w = [v for v in range(g.n) if Fraction(w[v]).denominator != 1]
    rep.add("w_integral", not bad_w, f"vertices {bad_w}" if bad_w else "")
    bad_l = [v for v in range(g.n) if l[v] < 0]
    rep.add("l_nonnegative", not bad_l, f"vertices {bad_l}" if bad_l else "")
    issues = []
    for i, mask in enumerate(masks):
        s = sum((x[v] for v in iter_bits(mask)), Fraction(0))
        if s > 1:
            issues.append(f"row {i} {list(cert.rows[i])}: sum {frac_str(s)} > 1")
    for v in range(g.n):
        if x[v] < l[v]:
            issues.append(f"x[{v}] = {frac_str(x[v])} < l[{v}] = {frac_str(l[v])}")
    rep.add("primal_feasibility", not issues, "; ".join(issues))
    issues = []
    if any(a < 0 for a in y):
        issues.append("negative y")
    if any(a < 0 for a in z):
        issues.append("negative z")
    for v in range(g.n):
        col = sum((y[i] for i, mask in enumerate(masks) if mask >> v & 1), Fraction(0))
        if col - z[v] != w[v]:
            issues.append(f"vertex {v}: (y^T B - z)_v = {frac_str(col - z[v])} != w_v = {w[v]}")
    rep.add("dual_feasibility", not issues, "; ".join(issues))
    primal = sum((w[v] * x[v] for v in range(g.n)), Fraction(0))
    dual = sum(y, Fraction(0)) - sum((z[v] * l[v] for v in range(g.n)), Fraction(0))
    obj_ok = primal == dual == cert.value
    rep.add("objective", obj_ok,
            f"w.x = {frac_str(primal)}, y.1 - z.l = {frac_str(dual)}, value = {frac_str(cert.value)}")
    rep.value = cert.value
    gran = reduce(lcm, (Fraction(a).denominator for a in l), 1)
    scaled = Fraction(cert.value) * gran
    rep.add("integrality_obstruction", scaled.denominator != 1,
            f"l is 1/{gran}-integral; value * {gran} = {frac_str(scaled)}")
    if exhaustive_dual and rep.passed:
        cost = [1 - sum((l[v] for v in iter_bits(mask)), Fraction(0)) for mask in masks]
        if any(c < 0 for c in cost):
            rep.add("integral_dual_gap", False, "a row has l(C) > 1")
            return rep
        best, _ = _dual_dp(masks, cost, list(w), None, budgets)
        best += sum((l[v] * w[v] for v in range(g.n)), Fraction(0))
        rep.integral_dual = best
        rep.add("integral_dual_gap", best > cert.value,
                f"integral dual optimum {frac_str(best)} vs value {frac_str(cert.value)}")
    return rep


# integral duals

def _dual_dp(masks: list[int], cost: list[Fraction], w: list[int],
             penalty: list[Fraction] | None, budgets: Budgets
             ) -> tuple[Fraction, list[int]]:
    """min sum_i y_i cost_i + sum_v penalty_v * uncovered_v over integral y >= 0.

    `penalty` None means uncovered demand is forbidden. Each y_i is capped at
    the largest residual demand on row i: beyond that the row covers nothing
    new and, with cost >= 0, only adds to the objective.
    """
    n = len(w)
    rows = len(masks)
    memo: dict[tuple[int, tuple[int, ...]], tuple[Fraction | None, int]] = {}
    # suffix coverage: which vertices can still be covered from row i on
    reach = [0] * (rows + 1)
    for i in range(rows - 1, -1, -1):
        reach[i] = reach[i + 1] | masks[i]

    def f(i: int, r: tuple[int, ...]) -> Fraction | None:
        key = (i, r)
        if key in memo:
            return memo[key][0]
        if len(memo) > budgets.dual_max_states:
            raise BudgetExceeded("dual_max_states", budgets.dual_max_states)
        if i == rows:
            if penalty is None:
                val = Fraction(0) if not any(r) else None
            else:
                val = sum((penalty[v] * r[v] for v in range(n)), Fraction(0))
            memo[key] = (val, 0)
            return val
        if penalty is None and any(r[v] for v in range(n) if not reach[i] >> v & 1):
            memo[key] = (None, 0)
            return None
        mask = masks[i]
        top = max((r[v] for v in iter_bits(mask)), default=0)
        best, arg = None, 0
        for t in range(top + 1):
            nr = tuple(max(0, r[v] - t) if mask >> v & 1 else r[v] for v in range(n))
            sub = f(i + 1, nr)
            if sub is None:
                continue
            val = sub + t * cost[i]
            if best is None or val < best:
                best, arg = val, t
        memo[key] = (best, arg)
        return best

    best = f(0, tuple(w))
    if best is None:
        raise PreconditionError("demand cannot be covered by the given rows")
    ys = []
    r = tuple(w)
    for i in range(rows):
        t = memo[(i, r)][1]
        ys.append(t)
        r = tuple(max(0, r[v] - t) if masks[i] >> v & 1 else r[v] for v in range(n))
    return best, ys


def integral_dual_optimum(g: Graph, u: Sequence, w: Sequence[int], budgets: Budgets = DEFAULT
                          ) -> tuple[Fraction, dict]:
    """min y.1 + z.u over integral y (rows of B_G) and z >= 0 with y^T B_G + z >= w."""
    if len(u) != g.n or len(w) != g.n:
        raise PreconditionError("u and w need one entry per vertex")
    u = [Fraction(a) for a in u]
    if any(a < 0 for a in u):
        raise PreconditionError("u must be nonnegative")
    if any(int(a) != a or a < 0 for a in w):
        raise PreconditionError("w must be a nonnegative integer vector")
    w = [int(a) for a in w]
    fam = maximal_cliques(g, budgets)
    masks = list(fam.cliques)
    best, ys = _dual_dp(masks, [Fraction(1)] * len(masks), w, u, budgets)
    cov = [0] * g.n
    for mask, t in zip(masks, ys):
        for v in iter_bits(mask):
            cov[v] += t
    zs = [max(0, w[v] - cov[v]) for v in range(g.n)]
    return best, {"rows": [bits(m) for m in masks], "y": ys, "z": zs}


# bounded falsifier

@dataclass(frozen=True)
class Counterexample:
    u: tuple[Fraction, ...]
    w: tuple[int, ...]
    lhs: Fraction
    rhs: Fraction

    def to_json(self) -> dict:
        return {"u": [frac_str(a) for a in self.u], "w": list(self.w),
                "lhs": frac_str(self.lhs), "rhs": frac_str(self.rhs)}


def _w_order(n: int, top: int) -> list[tuple[int, ...]]:
    """Weight vectors with entries in 0..top whose largest entry is `top`:
    larger support first, then lexicographically."""
    vecs = [w for w in product(range(top + 1), repeat=n) if max(w) == top]
    vecs.sort(key=lambda w: (-sum(1 for a in w if a), w))
    return vecs


class _LevelTable:
    """kappa(T) for every T in [0, cap]^n, plus for each T the vertices v
    whose increment T + e_v keeps kappa unchanged."""

    def __init__(self, oracle: CoverOracle, n: int, cap: int, limit: int):
        size = (cap + 1) ** n
        if size * n > limit:
            raise BudgetExceeded("falsify_max_evals", limit, f"table with {size} entries")
        self.ts = np.array(list(product(range(cap + 1), repeat=n)),
                           dtype=np.int64).reshape(size, n)
        self.k = np.fromiter((oracle.kappa(t) for t in map(tuple, self.ts.tolist())),
                             dtype=np.int64, count=size)
        stride = [(cap + 1) ** (n - 1 - v) for v in range(n)]
        idx = np.arange(size, dtype=np.int64)
        self.flat = np.zeros((size, n), dtype=bool)
        for v in range(n):
            ok = self.ts[:, v] < cap
            nxt = np.where(ok, idx + stride[v], idx)
            self.flat[:, v] = ok & (self.k[nxt] == self.k)

    def frontier(self, cap: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Rows T <= cap that no single increment under cap can improve on."""
        inside = (self.ts <= cap).all(axis=1)
        below = self.ts < cap
        keep = inside & ~(self.flat & below).any(axis=1)
        return self.ts[keep], self.k[keep]


def box_tdi_falsify_search(g: Graph, max_w: int | None = None,
                           denoms: Sequence[int] | None = None,
                           budgets: Budgets = DEFAULT) -> Counterexample | None:
    """Look for u >= 0 and integral w >= 0 with F(2w, u) < 2 F(w, u), where
    F(w, u) = min{y.1 + z.u : y^T B_G + z >= w, y, z >= 0 integral}.

    Any hit shows that B_G x <= 1, x >= 0 is not box-TDI. None only means
    nothing was found within the limits.

    Reductions that keep the sweep exact:
      F(w, u) = min over integral 0 <= T <= w of kappa(T) + u.(w - T), with
      kappa the weighted clique cover number. Since u >= 0, a T can be
      skipped when some T + e_v still fits under w and has the same kappa.
      Coordinates with w_v = 0 do not matter, and u_v >= 1 behaves like
      u_v = 1 (a unit of z_v can be swapped for one clique through v), so u
      ranges over k/q in [0, 1] with q in `denoms`.
    Weights go by largest entry, then larger support, then lexicographically.
    For each w the denominators are tried in increasing order, and u runs
    over {0, 1/q, .., 1}^supp(w) in lexicographic order. All comparisons
    are made on integers after scaling by lcm(denoms).
    """
    max_w = budgets.falsify_max_w if max_w is None else max_w
    denoms = tuple(budgets.falsify_denoms if denoms is None else denoms)
    if max_w < 0 or not denoms or any(q <= 0 for q in denoms):
        raise PreconditionError("max_w must be >= 0 and denominators positive")
    if g.n == 0 or max_w == 0:
        return None
    scale = reduce(lcm, denoms, 1)
    oracle = CoverOracle(g, budgets)
    work = 0
    limit = budgets.falsify_max_evals
    grids = [[k * (scale // q) for k in range(q + 1)] for q in sorted(set(denoms))]
    for top in range(1, max_w + 1):
        table = _LevelTable(oracle, g.n, 2 * top, limit)
        for w in _w_order(g.n, top):
            rows = _w_rows(table, w, scale)
            for grid in grids:
                hit, used = _sweep_w(g, rows, w, grid, scale, limit - work, budgets)
                work += used
                if hit is not None:
                    return hit
    return None


def _w_rows(table: _LevelTable, w: tuple[int, ...], scale: int):
    """Linear pieces of F(w, .) and F(2w, .) restricted to supp(w).

    Entries stay small integers, so float64 products are exact and can use
    the BLAS matrix product.
    """
    supp = [v for v in range(len(w)) if w[v]]
    warr = np.array(w, dtype=np.int64)
    t1, k1 = table.frontier(warr)
    t2, k2 = table.frontier(2 * warr)
    d1 = (warr - t1)[:, supp].astype(np.float64)   # demand left to z for each kept T
    d2 = (2 * warr - t2)[:, supp].astype(np.float64)
    return supp, (scale * k1).astype(np.float64), d1, (scale * k2).astype(np.float64), d2


def _sweep_w(g: Graph, rows, w: tuple[int, ...], grid: list[int], scale: int,
             allowance: int, budgets: Budgets) -> tuple[Counterexample | None, int]:
    """Scan u over grid^supp(w) (scaled by `scale`) in lexicographic order."""
    supp, c1, d1, c2, d2 = rows
    s = len(supp)
    total_u = len(grid) ** s
    per = len(c1) + len(c2)
    chunk = max(1, 2_000_000 // max(1, per))
    used = 0
    for start in range(0, total_u, chunk):
        stop = min(total_u, start + chunk)
        used += (stop - start) * per
        if used > allowance:
            raise BudgetExceeded("falsify_max_evals", budgets.falsify_max_evals)
        us = _grid_block(grid, s, start, stop).astype(np.float64)
        f1 = (c1[None, :] + us @ d1.T).min(axis=1)
        f2 = (c2[None, :] + us @ d2.T).min(axis=1)
        hit = np.nonzero(f2 < 2 * f1)[0]
        if hit.size:
            j = int(hit[0])
            u = [Fraction(0)] * g.n
            for v, num in zip(supp, us[j]):
                u[v] = Fraction(int(num), scale)
            lhs = Fraction(int(f2[j]), scale)
            rhs = 2 * Fraction(int(f1[j]), scale)
            # independent recomputation with the row-by-row dual search
            lhs2, _ = integral_dual_optimum(g, u, [2 * a for a in w], budgets)
            rhs2, _ = integral_dual_optimum(g, u, list(w), budgets)
            if lhs2 != lhs or 2 * rhs2 != rhs:
                raise InternalCheckError("falsifier tables disagree with the dual search")
            return Counterexample(tuple(u), tuple(w), lhs, rhs), used
    return None, used


def _grid_block(grid: list[int], s: int, start: int, stop: int) -> np.ndarray:
    """Rows start..stop-1 of the product grid^s in lexicographic order."""
    idx = np.arange(start, stop, dtype=np.int64)
    base = len(grid)
    g = np.array(grid, dtype=np.int64)
    out = np.empty((stop - start, s), dtype=np.int64)
    for col in range(s - 1, -1, -1):
        out[:, col] = g[idx % base]
        idx //= base
    return out

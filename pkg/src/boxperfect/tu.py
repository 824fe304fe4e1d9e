"""Total unimodularity, balancedness and related matrix tests.

All arithmetic is on Python integers.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .cliques import IntMatrix, clique_matrix
from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, PreconditionError
from .graph import Graph, iter_bits


@dataclass(frozen=True)
class TUReport:
    is_tu: bool
    violator: tuple[tuple[int, ...], tuple[int, ...], int] | None = None
    minors: int = field(default=0, compare=False)

    def to_dict(self) -> dict:
        d = {"is_tu": self.is_tu, "violator": None}
        if self.violator:
            r, c, det = self.violator
            d["violator"] = {"rows": list(r), "cols": list(c), "det": det}
        return d


def bareiss_det(rows: Sequence[Sequence[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [list(r) for r in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def is_tu_bruteforce(m: IntMatrix) -> TUReport:
    """Slow oracle: every square submatrix, by size then lexicographic order."""
    count = 0
    for k in range(1, min(m.shape) + 1):
        for rs in combinations(range(m.nrows), k):
            for cs in combinations(range(m.ncols), k):
                count += 1
                d = bareiss_det([[m.rows[i][j] for j in cs] for i in rs])
                if d not in (-1, 0, 1):
                    return TUReport(False, (rs, cs, d), count)
    return TUReport(True, None, count)


def _check_entries(m: IntMatrix) -> None:
    for i, r in enumerate(m.rows):
        for j, x in enumerate(r):
            if x not in (-1, 0, 1):
                raise PreconditionError(f"entry ({i},{j}) = {x} is not in {{0, 1, -1}}")


def _reduce(m: IntMatrix) -> tuple[list[int], list[int]]:
    """Rows and columns that can appear in a smallest violator.

    Zero lines, repeated lines (up to sign, later copy dropped) and columns
    with a single nonzero entry can never be part of a minimum-size violating
    submatrix, and dropping them keeps the lexicographically least one.
    """
    rows = list(range(m.nrows))
    cols = list(range(m.ncols))
    changed = True
    while changed:
        changed = False
        seen = set()
        keep = []
        for j in cols:
            col = tuple(m.rows[i][j] for i in rows)
            nz = sum(1 for x in col if x)
            neg = tuple(-x for x in col)
            if nz <= 1 or col in seen or neg in seen:
                changed = True
                continue
            seen.add(col)
            keep.append(j)
        cols = keep
        seen = set()
        keep = []
        for i in rows:
            row = tuple(m.rows[i][j] for j in cols)
            neg = tuple(-x for x in row)
            if not any(row) or row in seen or neg in seen:
                changed = True
                continue
            seen.add(row)
            keep.append(i)
        rows = keep
    return rows, cols


def is_totally_unimodular(m: IntMatrix, budgets: Budgets = DEFAULT) -> TUReport:
    """Exact TU test by size-ordered Laplace expansion over nonzero minors.

    Minors of size k are built from minors of size k-1 by appending a row
    below all current rows and expanding along it, so only nonzero minors are
    stored. The first size with a determinant outside {0, 1, -1} gives the
    violator; ties go to the lexicographically least (rows, cols).
    """
    _check_entries(m)
    rows, cols = _reduce(m)
    if not rows or not cols:
        return TUReport(True, None, 0)
    sub = [[m.rows[i][j] for j in cols] for i in rows]
    r, c = len(rows), len(cols)
    limit = budgets.tu_max_minors
    # level: (rowmask, colmask) -> det ; last row index kept implicitly as highest bit
    level: dict[tuple[int, int], int] = {}
    for i in range(r):
        for j in range(c):
            if sub[i][j]:
                level[(1 << i, 1 << j)] = sub[i][j]
    total = len(level)
    for k in range(2, min(r, c) + 1):
        nxt: dict[tuple[int, int], int] = {}
        for (rm, cm), det in level.items():
            top = rm.bit_length()
            for i in range(top, r):
                row = sub[i]
                nrm = rm | 1 << i
                for j in range(c):
                    a = row[j]
                    if not a or cm >> j & 1:
                        continue
                    pos = (cm & ((1 << j) - 1)).bit_count()
                    sign = -1 if ((k - 1) + pos) & 1 else 1
                    key = (nrm, cm | 1 << j)
                    nxt[key] = nxt.get(key, 0) + sign * a * det
            if len(nxt) > limit:
                raise BudgetExceeded("tu_max_minors", limit, f"at minor size {k}")
        nxt = {key: d for key, d in nxt.items() if d}
        total += len(nxt)
        bad = [(tuple(rows[i] for i in iter_bits(rm)), tuple(cols[j] for j in iter_bits(cm)), d)
               for (rm, cm), d in nxt.items() if d not in (-1, 1)]
        if bad:
            return TUReport(False, min(bad), total)
        if not nxt:
            break
        level = nxt
    return TUReport(True, None, total)


def is_tu_graph(g: Graph, budgets: Budgets = DEFAULT) -> TUReport:
    b, _ = clique_matrix(g, budgets)
    return is_totally_unimodular(b, budgets)


def is_minimally_non_tu(m: IntMatrix, budgets: Budgets = DEFAULT) -> bool:
    """Not TU, while every proper submatrix is."""
    if m.nrows != m.ncols or m.nrows == 0:
        return False
    rep = is_totally_unimodular(m, budgets)
    return (not rep.is_tu) and len(rep.violator[0]) == m.nrows


def _row_col_graph(m: IntMatrix) -> list[int]:
    r = m.nrows
    adj = [0] * (r + m.ncols)
    for i, row in enumerate(m.rows):
        for j, x in enumerate(row):
            if x:
                adj[i] |= 1 << (r + j)
                adj[r + j] |= 1 << i
    return adj


def is_balanced(m: IntMatrix) -> tuple[bool, tuple[tuple[int, ...], tuple[int, ...]] | None]:
    """A 0/1 matrix is balanced iff it has no square submatrix of odd order with
    exactly two ones in every row and column forming one cycle.

    Such submatrices are the chordless cycles of length 2 mod 4 in the
    row/column incidence graph. Witness: (rows, cols) of the first one found,
    searching from the smallest start vertex.
    """
    for row in m.rows:
        if any(x not in (0, 1) for x in row):
            raise PreconditionError("is_balanced expects a 0/1 matrix")
    adj = _row_col_graph(m)
    r = m.nrows
    total = len(adj)
    for s in range(total):
        allowed = ((1 << total) - 1) & ~((1 << (s + 1)) - 1)
        path = [s]
        found = _induced_cycle(adj, s, allowed, path, 1 << s)
        if found:
            rows = tuple(sorted(v for v in found if v < r))
            cols = tuple(sorted(v - r for v in found if v >= r))
            return False, (rows, cols)
    return True, None


def _induced_cycle(adj, s, allowed, path, used):
    last = path[-1]
    inner = used & ~(1 << s) & ~(1 << last)
    for v in iter_bits(adj[last] & allowed & ~used):
        # v may touch only `last` among the path, plus s when closing
        if adj[v] & inner:
            continue
        touches_s = adj[v] >> s & 1
        if touches_s and len(path) == 1:
            touches_s = 0
        if touches_s:
            length = len(path) + 1
            if length >= 6 and length % 4 == 2:
                return path + [v]
            continue
        path.append(v)
        res = _induced_cycle(adj, s, allowed, path, used | 1 << v)
        path.pop()
        if res:
            return res
    return None


def row_bipartition(m: IntMatrix, rows: Sequence[int] | None = None
                    ) -> tuple[tuple[int, ...], tuple[int, ...]] | None:
    """Split `rows` into (plus, minus) so that sum(plus) - sum(minus) is a {0,1,-1} vector.

    Backtracking in row order, trying plus before minus.
    """
    rows = list(range(m.nrows)) if rows is None else list(rows)
    c = m.ncols
    remaining = [[0] * c for _ in range(len(rows) + 1)]
    for k in range(len(rows) - 1, -1, -1):
        rr = m.rows[rows[k]]
        remaining[k] = [remaining[k + 1][j] + abs(rr[j]) for j in range(c)]
    acc = [0] * c
    signs = [0] * len(rows)

    def go(k: int) -> bool:
        if k == len(rows):
            return all(-1 <= x <= 1 for x in acc)
        rr = m.rows[rows[k]]
        rem = remaining[k + 1]
        for s in (1, -1):
            ok = True
            for j in range(c):
                acc[j] += s * rr[j]
                if abs(acc[j]) - rem[j] > 1:
                    ok = False
            if ok:
                signs[k] = s
                if go(k + 1):
                    return True
            for j in range(c):
                acc[j] -= s * rr[j]
        return False

    if not go(0):
        return None
    plus = tuple(rows[k] for k in range(len(rows)) if signs[k] == 1)
    minus = tuple(rows[k] for k in range(len(rows)) if signs[k] == -1)
    return plus, minus


def biadjacency(b: Graph, u_side: Sequence[int], v_side: Sequence[int]) -> IntMatrix:
    return IntMatrix(tuple(tuple(1 if b.has_edge(u, v) else 0 for v in v_side) for u in u_side),
                     len(v_side))


def check_sides(b: Graph, u_side: Sequence[int], v_side: Sequence[int]) -> None:
    if sorted(list(u_side) + list(v_side)) != list(range(b.n)):
        raise PreconditionError("sides must partition the vertex set")
    for side in (u_side, v_side):
        for a in side:
            for c in side:
                if b.has_edge(a, c):
                    raise PreconditionError(f"edge {a}-{c} inside one side; not bipartite with these sides")


def class_q_membership(b: Graph, u_side: Sequence[int], v_side: Sequence[int],
                       budgets: Budgets = DEFAULT) -> tuple[bool, dict]:
    """Is the biadjacency matrix (rows U, columns V) minimally non-TU?

    The report also evaluates the three necessary conditions every member
    must satisfy (even degrees, equal sides, edge count 2 mod 4). A member that
    fails them is reported under `internal_error`.
    """
    check_sides(b, u_side, v_side)
    m = biadjacency(b, u_side, v_side)
    member = is_minimally_non_tu(m, budgets)
    eulerian = all(b.degree(v) % 2 == 0 for v in range(b.n))
    equal = len(u_side) == len(v_side)
    mod4 = b.m % 4 == 2
    report = {
        "member": member,
        "eulerian": eulerian,
        "equal_sides": equal,
        "edges": b.m,
        "edges_mod4_is_2": mod4,
        "internal_error": None,
    }
    if member and not (eulerian and equal and mod4):
        report["internal_error"] = "member of Q violates a necessary condition"
    return member, report

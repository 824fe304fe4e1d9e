"""Maximal cliques, clique-vertex matrices and the integer matrix type."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .config import Budgets, DEFAULT
from .errors import BudgetExceeded, ParseError, PreconditionError
from .graph import Graph, bits, iter_bits, to_mask


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        for r in self.rows:
            if len(r) != self.ncols:
                raise PreconditionError("ragged matrix")

    @classmethod
    def of(cls, rows: Iterable[Sequence[int]], ncols: int | None = None) -> "IntMatrix":
        rows = tuple(tuple(int(x) for x in r) for r in rows)
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(rows, ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "IntMatrix":
        return IntMatrix(tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)),
                         len(self.rows))

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        return IntMatrix(tuple(tuple(self.rows[i][j] for j in cols) for i in rows), len(cols))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def col_sums(self) -> list[int]:
        return [sum(r[j] for r in self.rows) for j in range(self.ncols)]

    def dumps(self) -> str:
        lines = [f"{self.nrows} {self.ncols}"] + [" ".join(map(str, r)) for r in self.rows]
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str) -> "IntMatrix":
        lines = [(i, ln.split("#", 1)[0].split()) for i, ln in enumerate(text.splitlines(), 1)]
        lines = [(i, t) for i, t in lines if t]
        if not lines:
            raise ParseError("empty matrix text")
        lineno, head = lines[0]
        if len(head) != 2:
            raise ParseError("expected 'rows cols' header", lineno)
        try:
            r, c = int(head[0]), int(head[1])
        except ValueError:
            raise ParseError("header must be two integers", lineno) from None
        if len(lines) - 1 != r:
            raise ParseError(f"expected {r} rows, found {len(lines) - 1}", lineno)
        rows = []
        for lineno, tok in lines[1:]:
            if len(tok) != c:
                raise ParseError(f"expected {c} entries", lineno)
            try:
                rows.append(tuple(int(t) for t in tok))
            except ValueError:
                raise ParseError("entries must be integers", lineno) from None
        return cls(tuple(rows), c)


@dataclass(frozen=True)
class CliqueFamily:
    """Cliques as bitmasks, ordered by their sorted vertex tuples."""
    cliques: tuple[int, ...]
    maximal: bool = True

    def __len__(self):
        return len(self.cliques)

    def __iter__(self):
        return iter(self.cliques)

    def as_lists(self) -> list[list[int]]:
        return [bits(c) for c in self.cliques]


def clique_sort_key(mask: int) -> tuple[int, ...]:
    return tuple(iter_bits(mask))


def maximal_cliques(g: Graph, budgets: Budgets = DEFAULT) -> CliqueFamily:
    """Bron-Kerbosch with Tomita pivoting on bitsets."""
    if g.n == 0:
        return CliqueFamily(())
    out: list[int] = []
    limit = budgets.max_cliques
    adj = g.adj

    def expand(r: int, p: int, x: int) -> None:
        if not p:
            if not x:
                out.append(r)
                if len(out) > limit:
                    raise BudgetExceeded("max_cliques", limit)
            return
        px = p | x
        pivot = max(iter_bits(px), key=lambda u: (adj[u] & p).bit_count())
        for v in iter_bits(p & ~adj[pivot]):
            bit = 1 << v
            expand(r | bit, p & adj[v], x & adj[v])
            p &= ~bit
            x |= bit

    expand(0, g.full, 0)
    return CliqueFamily(tuple(sorted(out, key=clique_sort_key)))


def clique_matrix(g: Graph, budgets: Budgets = DEFAULT,
                  family: CliqueFamily | None = None) -> tuple[IntMatrix, list[int]]:
    """B_G (rows = maximal cliques in family order, columns = vertices) and c_G = 1^T B_G."""
    fam = family if family is not None else maximal_cliques(g, budgets)
    rows = tuple(tuple(c >> v & 1 for v in range(g.n)) for c in fam.cliques)
    b = IntMatrix(rows, g.n)
    return b, b.col_sums()


def clique_counts(g: Graph, budgets: Budgets = DEFAULT) -> list[int]:
    return clique_matrix(g, budgets)[1]


def maximal_restrictions(family: Iterable[int], x: int) -> list[int]:
    """Distinct inclusion-maximal members of {K & x}."""
    pieces = sorted({k & x for k in family}, key=lambda m: -m.bit_count())
    keep: list[int] = []
    for m in pieces:
        if not any(m & k == m for k in keep):
            keep.append(m)
    return sorted(keep, key=clique_sort_key)


def mask_of(vertices: Iterable[int]) -> int:
    return to_mask(vertices)

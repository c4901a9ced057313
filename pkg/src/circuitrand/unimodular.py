"""Total unimodularity and directed graph incidence matrices.

A matrix is totally unimodular when every square submatrix has determinant
-1, 0 or 1.  For such contrast matrices every randomisation vector is a sum
of binary circuits, so the circuit-based catalog of randomisation systems is
complete.  Incidence matrices of directed graphs are the standard source of
totally unimodular examples; their circuits with constant sign correspond to
closed walks, which exist in abundance exactly when the graph is Eulerian
balanced.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Iterable

from .exact_linalg import IntMatrix


class TooLargeError(ValueError):
    """The brute-force submatrix budget was exceeded."""

    def __init__(self, count: int, size_cap: int):
        super().__init__(
            f"would need to test {count} square submatrices, budget is {size_cap}"
        )
        self.count = count
        self.size_cap = size_cap


@dataclass(frozen=True)
class DirectedGraph:
    """A directed graph on vertices ``0 .. n_vertices-1`` without self-loops.

    ``edges`` keeps the construction order; parallel edges are allowed and
    each edge indexes one column of the incidence matrix.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n_vertices < 0:
            raise ValueError("vertex count must be non-negative")
        for t, h in edges:
            if not (0 <= t < self.n_vertices and 0 <= h < self.n_vertices):
                raise ValueError(f"edge ({t}, {h}) has an endpoint out of range")
            if t == h:
                raise ValueError(f"self-loop at vertex {t} is not allowed")

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[int, int]], n_vertices: int | None = None) -> "DirectedGraph":
        es = tuple((int(t), int(h)) for t, h in edges)
        if n_vertices is None:
            n_vertices = 1 + max((max(t, h) for t, h in es), default=-1)
        return cls(n_vertices=n_vertices, edges=es)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def out_degree(self, v: int) -> int:
        return sum(1 for t, _ in self.edges if t == v)

    def in_degree(self, v: int) -> int:
        return sum(1 for _, h in self.edges if h == v)


def incidence_matrix(g: DirectedGraph) -> IntMatrix:
    """Vertex-by-edge incidence matrix: +1 at the tail, -1 at the head."""
    rows = []
    for v in range(g.n_vertices):
        rows.append(
            tuple((1 if t == v else 0) - (1 if h == v else 0) for t, h in g.edges)
        )
    return IntMatrix.from_rows(rows, n_cols=g.n_edges)


def is_eulerian_balanced(g: DirectedGraph) -> bool:
    """True when every vertex has equal in- and out-degree.

    Equivalent to every row of the incidence matrix summing to zero, which
    is what lets each edge play the role of a run with the vertex rows as
    contrasts.
    """
    return all(g.in_degree(v) == g.out_degree(v) for v in range(g.n_vertices))


DEFAULT_SIZE_CAP = 1_000_000


def is_totally_unimodular(a: IntMatrix, size_cap: int = DEFAULT_SIZE_CAP) -> bool:
    """Brute-force total unimodularity test.

    Checks that every square submatrix determinant lies in {-1, 0, 1},
    expanding determinants size by size so each layer reuses the minors of
    the previous one.  The number of square submatrices is computed first
    and :class:`TooLargeError` is raised when it exceeds ``size_cap``; the
    test itself exits at the first offending submatrix.
    """
    n_rows, n_cols = a.n_rows, a.n_cols
    if any(x not in (-1, 0, 1) for row in a.rows for x in row):
        return False
    k_max = min(n_rows, n_cols)
    total = sum(comb(n_rows, k) * comb(n_cols, k) for k in range(1, k_max + 1))
    if total > size_cap:
        raise TooLargeError(total, size_cap)

    # 1x1 entries are already checked; build larger minors layer by layer.
    prev: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {
        ((i,), (j,)): a.rows[i][j] for i in range(n_rows) for j in range(n_cols)
    }
    for k in range(2, k_max + 1):
        cur: dict[tuple[tuple[int, ...], tuple[int, ...]], int] = {}
        for rows in combinations(range(n_rows), k):
            first, rest = rows[0], rows[1:]
            for cols in combinations(range(n_cols), k):
                det = 0
                sign = 1
                for idx, c in enumerate(cols):
                    coeff = a.rows[first][c]
                    if coeff:
                        minor = prev[(rest, cols[:idx] + cols[idx + 1 :])]
                        det += sign * coeff * minor
                    sign = -sign
                if det not in (-1, 0, 1):
                    return False
                cur[(rows, cols)] = det
        prev = cur
    return True

"""Reference implementations used to cross-check the package.

Everything in this module is written from first principles: plain Fraction
Gaussian elimination, exhaustive subset scans and a textbook set-partition
recursion.  None of it shares code with the package under test, so the two
sides cannot hide a common bug.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence


def rref(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form and pivot columns of a Fraction matrix."""
    a = [row[:] for row in rows]
    n_rows = len(a)
    n_cols = len(a[0]) if a else 0
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        inv = Fraction(1) / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    return a, pivots


def nullspace(rows: list[list[int]], n_cols: int) -> list[tuple[Fraction, ...]]:
    """Basis of the exact nullspace, one vector per free column."""
    if not rows:
        rows = [[0] * n_cols]
    a, pivots = rref([[Fraction(x) for x in row] for row in rows])
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n_cols
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -a[r][f]
        basis.append(tuple(v))
    return basis


def primitive(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to coprime integers, first nonzero positive."""
    denoms = [x.denominator for x in v]
    lcm = 1
    for d in denoms:
        lcm = lcm * d // gcd(lcm, d)
    ints = [int(x * lcm) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, abs(x))
    if g > 1:
        ints = [x // g for x in ints]
    lead = next((x for x in ints if x != 0), 0)
    if lead < 0:
        ints = [-x for x in ints]
    return tuple(ints)


def brute_circuit_vectors(rows: list[list[int]], n_cols: int) -> list[tuple[int, ...]]:
    """Every circuit of the matrix, by scanning all column subsets.

    A subset is a circuit support exactly when the restricted matrix has
    nullity one and the kernel generator is nonzero on the whole subset.
    No pruning at all: each subset is judged on its own.
    """
    found = []
    for size in range(1, n_cols + 1):
        for sub in itertools.combinations(range(n_cols), size):
            restricted = [[row[j] for j in sub] for row in rows]
            ns = nullspace(restricted, size)
            if len(ns) != 1 or any(x == 0 for x in ns[0]):
                continue
            full = [Fraction(0)] * n_cols
            for j, x in zip(sub, ns[0]):
                full[j] = x
            found.append(primitive(full))
    return sorted(found)


def det_cofactor(rows: list[list[int]]):
    """Determinant by first-row cofactor expansion."""
    n = len(rows)
    if n == 0:
        return 1
    if n == 1:
        return rows[0][0]
    total = 0
    for j in range(n):
        if rows[0][j] == 0:
            continue
        minor = [[row[c] for c in range(n) if c != j] for row in rows[1:]]
        total += (-1) ** j * rows[0][j] * det_cofactor(minor)
    return total


def set_partitions(items: Sequence[int]) -> Iterator[list[list[int]]]:
    """All set partitions of the given items."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def binary_kernel_supports(rows: list[list[int]], n_cols: int) -> list[frozenset[int]]:
    """Supports of all nonzero 0/1 kernel vectors, by a full 2^n scan."""
    out = []
    for mask in range(1, 1 << n_cols):
        sup = [i for i in range(n_cols) if mask >> i & 1]
        if all(sum(row[i] for i in sup) == 0 for row in rows):
            out.append(frozenset(sup))
    return out


def minimal_supports(supports: Iterable[frozenset[int]]) -> set[frozenset[int]]:
    sups = list(supports)
    return {s for s in sups if not any(t < s for t in sups)}


def exact_covers_naive(n: int, blocks: Sequence[frozenset[int]]) -> list[frozenset[frozenset[int]]]:
    """All exact covers of range(n), branching on the lowest uncovered point."""
    covers: list[frozenset[frozenset[int]]] = []

    def search(uncovered: frozenset[int], chosen: tuple[frozenset[int], ...]) -> None:
        if not uncovered:
            covers.append(frozenset(chosen))
            return
        point = min(uncovered)
        for b in blocks:
            if point in b and b <= uncovered:
                search(uncovered - b, chosen + (b,))

    search(frozenset(range(n)), ())
    return covers


def random_balanced_digraph(rng: random.Random, max_edges: int = 8) -> list[tuple[int, int]]:
    """A random digraph with equal in- and out-degrees at every vertex.

    Built as an edge-disjoint union of simple directed cycles, which is
    exactly the class of balanced digraphs.
    """
    edges: set[tuple[int, int]] = set()
    for _ in range(rng.randint(1, 3)):
        length = rng.randint(2, 4)
        verts = rng.sample(range(5), length)
        cycle = [(verts[i], verts[(i + 1) % length]) for i in range(length)]
        if len(edges) + length <= max_edges and not edges.intersection(cycle):
            edges.update(cycle)
    if not edges:
        edges = {(0, 1), (1, 0)}
    return sorted(edges)

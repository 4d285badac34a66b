"""Exact Smith normal form over the integers.

Matrices are plain lists of lists of Python ints, so nothing overflows.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

Matrix = list[list[int]]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if not a or not b:
        return [[0] * (len(b[0]) if b else 0) for _ in a]
    cols = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) for col in cols] for row in a]


def det(a: Matrix) -> int:
    """Fraction-free (Bareiss) determinant."""
    n = len(a)
    if n == 0:
        return 1
    m = [row[:] for row in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if m[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if m[r][k]), None)
            if swap is None:
                return 0
            m[k], m[swap] = m[swap], m[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def smith_normal_form(a: Sequence[Sequence[int]]) -> tuple[Matrix, Matrix, Matrix]:
    """Return (U, D, V) with U A V = D, U and V unimodular, D in Smith form."""
    m = len(a)
    n = len(a[0]) if m else 0
    d = [list(map(int, row)) for row in a]
    u, v = identity(m), identity(n)

    def swap_rows(i: int, j: int) -> None:
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src: int, dst: int, q: int) -> None:
        # row_dst -= q * row_src
        if q:
            d[dst] = [x - q * y for x, y in zip(d[dst], d[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def add_col(src: int, dst: int, q: int) -> None:
        if q:
            for row in d:
                row[dst] -= q * row[src]
            for row in v:
                row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            # pivot: smallest nonzero |entry| in the remaining block, first by position
            best = None
            for i in range(t, m):
                for j in range(t, n):
                    if d[i][j] and (best is None or abs(d[i][j]) < abs(d[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                break
            swap_rows(t, best[0])
            swap_cols(t, best[1])
            p = d[t][t]
            clean = True
            for i in range(t + 1, m):
                add_row(t, i, d[i][t] // p)
                clean &= d[i][t] == 0
            for j in range(t + 1, n):
                add_col(t, j, d[t][j] // p)
                clean &= d[t][j] == 0
            if not clean:
                continue
            bad = next(((i, j) for i in range(t + 1, m) for j in range(t + 1, n)
                        if d[i][j] % p), None)
            if bad is None:
                break
            # fold the offending row in so the next pass sees a smaller remainder
            add_row(bad[0], t, -1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return u, d, v


def diagonal(d: Matrix) -> list[int]:
    return [d[k][k] for k in range(min(len(d), len(d[0]) if d else 0))]


@dataclass(frozen=True)
class AbelianStructure:
    """Invariant factors d_1 | d_2 | ...; 0 stands for a copy of Z."""

    invariant_factors: tuple[int, ...]

    @property
    def free_rank(self) -> int:
        return self.invariant_factors.count(0)

    @property
    def torsion(self) -> tuple[int, ...]:
        return tuple(d for d in self.invariant_factors if d)

    def __str__(self) -> str:
        if not self.invariant_factors:
            return "0"
        parts = ["Z" if d == 0 else f"Z/{d}" for d in self.invariant_factors]
        return " + ".join(parts)


def quotient_structure(ambient: Sequence[int], relations: Sequence[Sequence[int]]) -> AbelianStructure:
    """Invariant factors of (Z/o_1 + ... + Z/o_r) / <relation rows>.

    ``ambient`` lists generator orders, 0 meaning infinite.
    """
    r = len(ambient)
    for row in relations:
        if len(row) != r:
            raise ValueError(f"relation row has {len(row)} entries, ambient has {r} generators")
    rows = [list(map(int, row)) for row in relations]
    for k, order in enumerate(ambient):
        if order:
            rows.append([order if j == k else 0 for j in range(r)])
    if r == 0:
        return AbelianStructure(())
    if not rows:
        return AbelianStructure((0,) * r)
    _, d, _ = smith_normal_form(rows)
    diag = [abs(x) for x in diagonal(d)]
    diag += [0] * (r - len(diag))
    factors = sorted((x for x in diag if x != 1 and x != 0))
    return AbelianStructure(tuple(factors) + (0,) * diag.count(0))

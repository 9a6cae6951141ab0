"""Exact rational linear algebra: fraction-free elimination, determinants, kernels."""
from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Sequence

Matrix = Sequence[Sequence[Fraction]]


def _integer_rows(rows: Matrix) -> list[list[int]]:
    out = []
    for row in rows:
        scale = lcm(*(Fraction(x).denominator for x in row)) if row else 1
        out.append([int(Fraction(x) * scale) for x in row])
    return out


def row_echelon(rows: Matrix) -> tuple[list[list[int]], list[int]]:
    """Fraction-free (Bareiss) elimination of an integer-scaled copy of ``rows``.

    Returns the echelon rows and the pivot columns.  Scaling each row by the
    lcm of its denominators does not change the row space.
    """
    a = _integer_rows(rows)
    if not a:
        return [], []
    m, n = len(a), len(a[0])
    pivots: list[int] = []
    r = 0
    prev = 1
    for col in range(n):
        if r == m:
            break
        pivot_row = next((i for i in range(r, m) if a[i][col] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        p = a[r][col]
        for i in range(r + 1, m):
            factor = a[i][col]
            for j in range(n):
                a[i][j] = (p * a[i][j] - factor * a[r][j]) // prev
        prev = p
        pivots.append(col)
        r += 1
    return a[:r], pivots


def rank(rows: Matrix) -> int:
    return len(row_echelon(rows)[1])


def nullspace(rows: Matrix, ncols: int | None = None) -> list[list[Fraction]]:
    """Basis of ``{v : rows @ v = 0}``, one vector per free column.

    Each basis vector has a 1 in its free column and zeros in the other free
    columns (reduced echelon normalisation), so the output is canonical.
    """
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    echelon, pivots = row_echelon(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for i in range(len(pivots) - 1, -1, -1):
            pc = pivots[i]
            row = echelon[i]
            s = sum((row[j] * v[j] for j in range(pc + 1, ncols)), Fraction(0))
            v[pc] = -s / row[pc]
        basis.append(v)
    return basis


def determinant(matrix: Matrix) -> Fraction:
    """Exact determinant by Gaussian elimination over the rationals."""
    a = [[Fraction(x) for x in row] for row in matrix]
    n = len(a)
    det = Fraction(1)
    for col in range(n):
        pivot_row = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            det = -det
        p = a[col][col]
        det *= p
        for i in range(col + 1, n):
            f = a[i][col] / p
            if f:
                for j in range(col, n):
                    a[i][j] -= f * a[col][j]
    return det


def in_span(vector: Sequence[Fraction], basis: Sequence[Sequence[Fraction]]) -> bool:
    if not basis:
        return all(x == 0 for x in vector)
    return rank(list(basis) + [list(vector)]) == rank(basis)

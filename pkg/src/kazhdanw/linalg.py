"""Exact linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`. Sparse variants take
rows as ``{column: value}`` dicts, which is how the graded blocks arrive from
the operator side.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence

SparseRow = Dict[int, Fraction]


def to_fraction_matrix(rows) -> List[List[Fraction]]:
    return [[Fraction(x) for x in row] for row in rows]


def sparse_rref(rows: Sequence[SparseRow], ncols: int):
    """Reduced row echelon form of a sparse matrix.

    Returns ``(reduced_rows, pivots)`` where ``pivots[k]`` is the pivot column of
    ``reduced_rows[k]``. Columns are eliminated in increasing order, so the free
    columns are the ones not reachable as a pivot from the left.
    """
    work = [{c: Fraction(v) for c, v in r.items() if v != 0} for r in rows]
    work = [r for r in work if r]
    reduced: List[SparseRow] = []
    pivots: List[int] = []
    for col in range(ncols):
        idx = next((i for i, r in enumerate(work) if col in r), None)
        if idx is None:
            continue
        prow = work.pop(idx)
        inv = 1 / prow[col]
        prow = {c: v * inv for c, v in prow.items()}
        rest = []
        for r in work:
            if col in r:
                r = _axpy(r, prow, -r[col])
            if r:
                rest.append(r)
        work = rest
        for k, r in enumerate(reduced):
            if col in r:
                reduced[k] = _axpy(r, prow, -r[col])
        reduced.append(prow)
        pivots.append(col)
    return reduced, pivots


def _axpy(row: SparseRow, other: SparseRow, factor: Fraction) -> SparseRow:
    out = dict(row)
    for c, v in other.items():
        nv = out.get(c, 0) + factor * v
        if nv:
            out[c] = nv
        else:
            out.pop(c, None)
    return out


def sparse_nullspace(rows: Sequence[SparseRow], ncols: int) -> List[SparseRow]:
    """Echelon basis of the right kernel, one vector per free column.

    The vector attached to free column ``j`` has a 1 in position ``j`` and is
    supported otherwise on pivot columns left of ``j``.
    """
    reduced, pivots = sparse_rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for j in range(ncols):
        if j in pivot_set:
            continue
        vec = {j: Fraction(1)}
        for prow, p in zip(reduced, pivots):
            v = prow.get(j)
            if v:
                vec[p] = -v
        basis.append(vec)
    return basis


def rank(matrix) -> int:
    rows = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix]
    ncols = max((len(r) for r in matrix), default=0)
    return len(sparse_rref(rows, ncols)[1])


def nullspace(matrix) -> List[List[Fraction]]:
    """Dense wrapper around :func:`sparse_nullspace`."""
    ncols = len(matrix[0]) if matrix else 0
    rows = [{j: Fraction(v) for j, v in enumerate(r) if v} for r in matrix]
    out = []
    for vec in sparse_nullspace(rows, ncols):
        dense = [Fraction(0)] * ncols
        for j, v in vec.items():
            dense[j] = v
        out.append(dense)
    return out


def inverse(matrix) -> List[List[Fraction]]:
    n = len(matrix)
    aug = [
        [Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
        for i, row in enumerate(matrix)
    ]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def determinant(matrix) -> Fraction:
    m = to_fraction_matrix(matrix)
    n = len(m)
    det = Fraction(1)
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            m[col], m[piv] = m[piv], m[col]
            det = -det
        det *= m[col][col]
        for r in range(col + 1, n):
            if m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [a - f * b for a, b in zip(m[r], m[col])]
    return det


def matmul(a, b):
    return [
        [sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in zip(*b)]
        for row in a
    ]


def trace(matrix) -> Fraction:
    return sum((matrix[i][i] for i in range(len(matrix))), Fraction(0))

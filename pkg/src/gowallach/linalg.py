"""Small dense linear algebra over the rationals, plus float fallbacks.

Matrices are lists of rows. Exact routines never see a float; callers pick
the float routines when any entry is a float.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Sequence

import numpy as np

SVD_RTOL = 1e-9


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for row in rows:
        den = 1
        for v in row:
            den = math.lcm(den, Fraction(v).denominator)
        out.append([int(Fraction(v) * den) for v in row])
    return out


def bareiss_rank(rows: Sequence[Sequence[Fraction]]) -> int:
    """Rank by fraction-free (Bareiss) elimination.

    Each row is first scaled to integers; scaling rows leaves the rank alone.
    """
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    prev = 1
    rank = 0
    for col in range(n_cols):
        if rank == n_rows:
            break
        pivot = next((r for r in range(rank, n_rows) if m[r][col] != 0), None)
        if pivot is None:
            continue
        m[rank], m[pivot] = m[pivot], m[rank]
        p = m[rank][col]
        for r in range(rank + 1, n_rows):
            f = m[r][col]
            row_r, row_p = m[r], m[rank]
            for c in range(col + 1, n_cols):
                # exact division is guaranteed by Sylvester's identity
                row_r[c] = (p * row_r[c] - f * row_p[c]) // prev
            row_r[col] = 0
        prev = p
        rank += 1
    return rank


def echelon_solve(a_rows, rhs) -> tuple[int, list[Fraction] | None]:
    """Gauss-Jordan over Q.

    Returns ``(rank(A), x)`` where ``x`` is the particular solution with all
    free variables set to zero, or ``None`` when ``A x = rhs`` is
    inconsistent.
    """
    n_rows = len(a_rows)
    n_cols = len(a_rows[0]) if n_rows else 0
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(a_rows, rhs)]
    pivots: list[int] = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    rank = len(pivots)
    if any(m[i][n_cols] != 0 for i in range(rank, n_rows)):
        return rank, None
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = m[i][n_cols]
    return rank, x


def inverse(matrix) -> list[list[Fraction]]:
    n = len(matrix)
    m = [[Fraction(v) for v in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(matrix)]
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c] != 0), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = 1 / m[c][c]
        m[c] = [v * inv for v in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return [row[n:] for row in m]


def is_positive_definite(matrix) -> bool:
    """Exact LDL^T test: every pivot of symmetric elimination is positive."""
    n = len(matrix)
    m = [[Fraction(v) for v in row] for row in matrix]
    for k in range(n):
        if m[k][k] <= 0:
            return False
        for i in range(k + 1, n):
            f = m[i][k] / m[k][k]
            if f:
                for j in range(k, n):
                    m[i][j] -= f * m[k][j]
    return True


def float_rank(a_rows, rtol: float = SVD_RTOL) -> int:
    a = np.asarray(a_rows, dtype=float)
    if a.size == 0:
        return 0
    s = np.linalg.svd(a, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > rtol * s[0]))


def float_solve(a_rows, rhs) -> list[float]:
    """Minimum-norm least-squares solution."""
    a = np.asarray(a_rows, dtype=float)
    b = np.asarray(rhs, dtype=float)
    x, *_ = np.linalg.lstsq(a, b, rcond=None)
    return [float(v) for v in x]

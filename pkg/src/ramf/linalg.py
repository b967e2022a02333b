"""Exact row reduction over Q.

Rows are plain lists of :class:`fractions.Fraction`.  Matrices in this
package are small (tens of rows, ~100 columns), so dense elimination with
Python rationals is the simplest thing that is exact.
"""

from __future__ import annotations

from fractions import Fraction


def rref(rows):
    """Reduced row echelon form.

    Returns ``(reduced_rows, pivot_columns)``; zero rows are dropped and the
    i-th returned row has its leading 1 in column ``pivot_columns[i]``.
    """
    mat = [[Fraction(x) for x in row] for row in rows]
    if not mat:
        return [], []
    ncols = len(mat[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        lead = mat[r][c]
        if lead != 1:
            mat[r] = [x / lead for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                row_r = mat[r]
                mat[i] = [a - f * b for a, b in zip(mat[i], row_r)]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def solve(matrix, rhs):
    """Solve ``matrix @ x = rhs`` exactly.

    Returns ``(x, free_columns)`` where ``x`` is one particular solution
    (free variables set to 0), or ``(None, ...)`` when the system is
    inconsistent.
    """
    ncols = len(matrix[0]) if matrix else 0
    aug = [list(row) + [b] for row, b in zip(matrix, rhs)]
    red, pivots = rref(aug)
    if ncols in pivots:
        return None, []
    x = [Fraction(0)] * ncols
    for row, c in zip(red, pivots):
        x[c] = row[-1]
    free = [c for c in range(ncols) if c not in pivots]
    return x, free


def rank(rows) -> int:
    return len(rref(rows)[1])

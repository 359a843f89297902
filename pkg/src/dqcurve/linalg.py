"""Exact Gauss-Jordan elimination over the rationals.

Matrices are lists of rows of ``mpq``.  Pivot choice is the first nonzero
entry in column order, so reduced row echelon forms (and therefore the
bases derived from them) are canonical.
"""

from __future__ import annotations

from gmpy2 import mpq

__all__ = ["rref", "nullspace", "row_space_basis", "solve"]


def rref(rows, ncols: int):
    """Reduced row echelon form; returns ``(nonzero_rows, pivot_columns)``."""
    m = [list(map(mpq, r)) for r in rows if any(r)]
    pivots = []
    r = 0
    for c in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = 1 / m[r][c]
        row = [v * inv for v in m[r]]
        m[r] = row
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], row)]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def nullspace(rows, ncols: int):
    """Basis of ``{v : rows . v = 0}``, one vector per free column."""
    red, pivots = rref(rows, ncols)
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [mpq(0)] * ncols
        v[f] = mpq(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        basis.append(v)
    return basis


def row_space_basis(vectors, ncols: int):
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    return rref(vectors, ncols)[0]


def solve(rows, rhs, ncols: int):
    """A solution of ``rows . v = rhs`` with free variables set to zero, or None."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, ncols + 1)
    if pivots and pivots[-1] == ncols:
        return None
    v = [mpq(0)] * ncols
    for row, p in zip(red, pivots):
        v[p] = row[ncols]
    return v

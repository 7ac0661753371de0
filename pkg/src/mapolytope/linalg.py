"""Small exact linear algebra over the rationals.

Matrices here are tiny (the ambient dimension is a handful), so plain
Gauss-Jordan elimination on Fractions is the right tool; the integer-kernel
module handles the genuinely hot determinant work.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Row = list[Fraction]


def _to_rows(mat: Sequence[Sequence[Fraction]]) -> list[Row]:
    return [[Fraction(x) for x in row] for row in mat]


def rref(mat: Sequence[Sequence[Fraction]]) -> tuple[list[Row], list[int]]:
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = _to_rows(mat)
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        pv = rows[r][c]
        rows[r] = [x / pv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(mat: Sequence[Sequence[Fraction]]) -> int:
    return len(rref(mat)[1])


def solve_square(mat: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Row | None:
    """Unique solution of a square system, or None when singular."""
    n = len(mat)
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    rows, pivots = rref(aug)
    if len(pivots) < n or pivots[:n] != list(range(n)):
        return None
    return [rows[i][n] for i in range(n)]


def solve_any(mat: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]) -> Row | None:
    """A particular solution of a (possibly under-determined) system.

    Free variables are set to zero.  Returns None when inconsistent.
    """
    if not mat:
        return []
    ncols = len(mat[0])
    aug = [[Fraction(x) for x in row] + [Fraction(rhs[i])] for i, row in enumerate(mat)]
    rows, pivots = rref(aug)
    if ncols in pivots:
        return None
    sol = [Fraction(0)] * ncols
    for i, c in enumerate(pivots):
        sol[c] = rows[i][ncols]
    return sol


def nullspace(mat: Sequence[Sequence[Fraction]]) -> list[Row]:
    """Basis of the kernel, with entries cleared to coprime integers."""
    if not mat:
        return []
    ncols = len(mat[0])
    rows, pivots = rref(mat)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        vec = [Fraction(0)] * ncols
        vec[f] = Fraction(1)
        for i, c in enumerate(pivots):
            vec[c] = -rows[i][f]
        basis.append(primitive(vec))
    return basis


def primitive(vec: Sequence[Fraction]) -> Row:
    """Scale a rational vector to coprime integers, keeping its direction."""
    from math import gcd, lcm

    den = 1
    for x in vec:
        den = lcm(den, Fraction(x).denominator)
    ints = [int(x * den) for x in vec]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
    return [Fraction(v) for v in ints]

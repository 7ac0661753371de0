"""Pure-Python integer kernels.

These are the hot primitives of the hull and measure machinery: exact integer
determinants, hyperplanes through point tuples and batched halfspace
evaluation.  The compiled twin in ``_ckernels.pyx`` implements the identical
API; either backend may be selected at import time (see package __init__).

All inputs are plain Python ints (arbitrary precision), so the results are
exact regardless of magnitude.
"""

from __future__ import annotations

from math import gcd

BACKEND = "pure"


def det_int(rows):
    """Exact determinant of a square integer matrix (list of row lists)."""
    d = len(rows)
    if d == 1:
        return rows[0][0]
    if d == 2:
        (a, b), (c, e) = rows
        return a * e - b * c
    if d == 3:
        (a, b, c), (p, q, r), (x, y, z) = rows
        return a * (q * z - r * y) - b * (p * z - r * x) + c * (p * y - q * x)
    # Bareiss fraction-free elimination; every division below is exact.
    m = [list(r) for r in rows]
    sign = 1
    prev = 1
    for k in range(d - 1):
        if m[k][k] == 0:
            for i in range(k + 1, d):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, d):
            row_i = m[i]
            row_k = m[k]
            aik = row_i[k]
            for j in range(k + 1, d):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    return sign * m[d - 1][d - 1]


def eval_many(normal, offset, points, idxs):
    """Values of <normal, p> - offset for the points selected by idxs."""
    out = []
    for i in idxs:
        p = points[i]
        s = -offset
        for a, x in zip(normal, p):
            s += a * x
        out.append(s)
    return out


def eval_one(normal, offset, p):
    s = -offset
    for a, x in zip(normal, p):
        s += a * x
    return s


def hyperplane(pts):
    """Primitive integer hyperplane through d points of Z^d.

    Returns (normal, offset) with <normal, x> == offset on the affine span,
    or None when the points are affinely dependent.  The orientation is
    arbitrary; callers fix the sign against a reference point.
    """
    d = len(pts[0])
    if len(pts) != d:
        raise ValueError("need exactly d points in dimension d")
    if d == 1:
        return (1,), pts[0][0]
    base = pts[0]
    diffs = [[p[j] - base[j] for j in range(d)] for p in pts[1:]]
    normal = []
    sign = 1
    for j in range(d):
        minor = [row[:j] + row[j + 1 :] for row in diffs]
        normal.append(sign * det_int(minor))
        sign = -sign
    if all(c == 0 for c in normal):
        return None
    offset = sum(a * x for a, x in zip(normal, base))
    g = 0
    for c in normal:
        g = gcd(g, c)
    g = gcd(g, offset)
    if g > 1:
        normal = [c // g for c in normal]
        offset = offset // g
    return tuple(normal), offset

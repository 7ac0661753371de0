# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Mirrors mapolytope._kernels.pure exactly.  Entries that provably fit in
64-bit arithmetic (checked via magnitude bounds before computing) run on C
integers; anything larger falls back to Python's big ints, so results are
always exact.
"""

from math import gcd

cdef extern from "Python.h":
    long long PyLong_AsLongLongAndOverflow(object obj, int *overflow)

BACKEND = "compiled"

DEF LIMIT2 = 1152921504606846976      # 2**60
DEF LIMIT3 = 1048576                  # 2**20; 6*M^3 < 2**63
DEF LIMIT_EVAL = 4611686018427387904  # 2**62
DEF LIMIT_NORM = 9007199254740992     # 2**53
DEF MAXD = 8


cdef inline long long llabs(long long v):
    return -v if v < 0 else v


cdef inline long long _ll(object x, int *ok):
    cdef int overflow = 0
    cdef long long v = PyLong_AsLongLongAndOverflow(x, &overflow)
    if overflow:
        ok[0] = 0
        return 0
    return v


def det_int(rows):
    """Exact determinant of a square integer matrix (list of row lists)."""
    cdef Py_ssize_t d = len(rows)
    cdef int ok = 1
    cdef long long a, b, c, e, p, q, r, x, y, z, m
    if d == 1:
        return rows[0][0]
    if d == 2:
        a = _ll(rows[0][0], &ok); b = _ll(rows[0][1], &ok)
        c = _ll(rows[1][0], &ok); e = _ll(rows[1][1], &ok)
        if ok:
            m = max(llabs(a), llabs(b), llabs(c), llabs(e))
            if m < LIMIT2:
                return a * e - b * c
        return rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
    if d == 3:
        a = _ll(rows[0][0], &ok); b = _ll(rows[0][1], &ok); c = _ll(rows[0][2], &ok)
        p = _ll(rows[1][0], &ok); q = _ll(rows[1][1], &ok); r = _ll(rows[1][2], &ok)
        x = _ll(rows[2][0], &ok); y = _ll(rows[2][1], &ok); z = _ll(rows[2][2], &ok)
        if ok:
            m = max(llabs(a), llabs(b), llabs(c), llabs(p), llabs(q),
                    llabs(r), llabs(x), llabs(y), llabs(z))
            if m < LIMIT3:
                return a * (q * z - r * y) - b * (p * z - r * x) + c * (p * y - q * x)
        return (rows[0][0] * (rows[1][1] * rows[2][2] - rows[1][2] * rows[2][1])
                - rows[0][1] * (rows[1][0] * rows[2][2] - rows[1][2] * rows[2][0])
                + rows[0][2] * (rows[1][0] * rows[2][1] - rows[1][1] * rows[2][0]))
    return _det_bareiss(rows, d)


cdef object _det_bareiss(rows, Py_ssize_t d):
    # Fraction-free elimination on Python ints; divisions are exact.
    cdef Py_ssize_t i, j, k
    cdef int sign = 1
    m = [list(r) for r in rows]
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
        row_k = m[k]
        for i in range(k + 1, d):
            row_i = m[i]
            aik = row_i[k]
            for j in range(k + 1, d):
                row_i[j] = (pivot * row_i[j] - aik * row_k[j]) // prev
            row_i[k] = 0
        prev = pivot
    res = m[d - 1][d - 1]
    return res if sign > 0 else -res


cdef object _eval_obj(normal, offset, p):
    s = -offset
    for a, x in zip(normal, p):
        s += a * x
    return s


def eval_one(normal, offset, p):
    cdef int ok = 1
    cdef tuple nt = tuple(normal)
    cdef tuple pt = tuple(p)
    cdef Py_ssize_t d = len(nt), j
    cdef long long nbuf[MAXD]
    cdef long long s, off, mn = 0, v, plimit
    if d > MAXD:
        return _eval_obj(nt, offset, pt)
    off = _ll(offset, &ok)
    for j in range(d):
        nbuf[j] = _ll(nt[j], &ok)
        if llabs(nbuf[j]) > mn:
            mn = llabs(nbuf[j])
    if not ok or mn >= LIMIT_NORM or llabs(off) >= LIMIT_EVAL:
        return _eval_obj(nt, offset, pt)
    plimit = LIMIT_EVAL // (mn * d + 1)
    s = -off
    for j in range(d):
        v = _ll(pt[j], &ok)
        if not ok or llabs(v) >= plimit:
            return _eval_obj(nt, offset, pt)
        s += nbuf[j] * v
    return s


def eval_many(normal, offset, points, idxs):
    """Values of <normal, p> - offset for the points selected by idxs."""
    cdef int ok = 1
    cdef tuple nt = tuple(normal)
    cdef Py_ssize_t d = len(nt), j
    cdef long long nbuf[MAXD]
    cdef long long pbuf[MAXD]
    cdef long long s, off, mn = 0, v, plimit
    cdef list out = []
    cdef tuple pt
    cdef int slow
    if d > MAXD:
        return [_eval_obj(nt, offset, points[i]) for i in idxs]
    off = _ll(offset, &ok)
    for j in range(d):
        nbuf[j] = _ll(nt[j], &ok)
        if llabs(nbuf[j]) > mn:
            mn = llabs(nbuf[j])
    if not ok or mn >= LIMIT_NORM or llabs(off) >= LIMIT_EVAL:
        return [_eval_obj(nt, offset, points[i]) for i in idxs]
    plimit = LIMIT_EVAL // (mn * d + 1)
    for i in idxs:
        pt = points[i]
        slow = 0
        ok = 1
        for j in range(d):
            v = _ll(pt[j], &ok)
            if not ok or llabs(v) >= plimit:
                slow = 1
                break
            pbuf[j] = v
        if slow:
            out.append(_eval_obj(nt, offset, pt))
        else:
            s = -off
            for j in range(d):
                s += nbuf[j] * pbuf[j]
            out.append(s)
    return out


def hyperplane(pts):
    """Primitive integer hyperplane through d points of Z^d (see pure twin)."""
    cdef Py_ssize_t d = len(pts[0])
    cdef Py_ssize_t j
    if len(pts) != d:
        raise ValueError("need exactly d points in dimension d")
    if d == 1:
        return (1,), pts[0][0]
    base = pts[0]
    diffs = [[p[j] - base[j] for j in range(d)] for p in pts[1:]]
    normal = []
    sign = 1
    for j in range(d):
        minor = [row[:j] + row[j + 1:] for row in diffs]
        normal.append(sign * det_int(minor))
        sign = -sign
    nonzero = 0
    for c in normal:
        if c != 0:
            nonzero = 1
            break
    if not nonzero:
        return None
    offset = 0
    for j in range(d):
        offset = offset + normal[j] * base[j]
    g = 0
    for c in normal:
        g = gcd(g, c)
    g = gcd(g, offset)
    if g > 1:
        normal = [c // g for c in normal]
        offset = offset // g
    return tuple(normal), offset

"""Exact linear programming in low dimension (Seidel's algorithm).

Used for piece-activity tests and recession-cone certificates.  The number
of variables here is the ambient dimension plus one (at most four or five),
where Seidel's randomized incremental method runs in expected linear time
in the number of constraints; all arithmetic is exact.

A problem is: maximize <c, x> subject to <a_i, x> <= b_i and box bounds
lo_j <= x_j <= hi_j.  The box must be finite, which keeps every subproblem
bounded; callers pick a box large enough to contain an optimum.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

Constraint = tuple[tuple[Fraction, ...], Fraction]  # <a, x> <= b

_SEED = 0x5E1DE1


def maximize(
    c: Sequence[Fraction],
    constraints: Sequence[Constraint],
    box: Sequence[tuple[Fraction, Fraction]],
) -> list[Fraction] | None:
    """Optimal point, or None when infeasible."""
    d = len(c)
    if any(lo > hi for lo, hi in box):
        return None
    cons = [(tuple(Fraction(x) for x in a), Fraction(b)) for a, b in constraints]
    rng = random.Random(_SEED)
    return _solve(list(c), cons, [(Fraction(lo), Fraction(hi)) for lo, hi in box], rng)


def _solve(c, cons, box, rng):
    d = len(c)
    if d == 1:
        lo, hi = box[0]
        for (a,), b in cons:
            if a > 0:
                nb = b / a
                if nb < hi:
                    hi = nb
            elif a < 0:
                nb = b / a
                if nb > lo:
                    lo = nb
            elif b < 0:
                return None
        if lo > hi:
            return None
        return [hi if c[0] > 0 else lo]

    order = list(cons)
    rng.shuffle(order)
    x = [box[j][1] if c[j] > 0 else box[j][0] for j in range(d)]
    seen: list = []
    for a, b in order:
        seen.append((a, b))
        if sum(ai * xi for ai, xi in zip(a, x)) <= b:
            continue
        # Any optimum of the enlarged system lies on <a, x> == b; substitute
        # out the variable with the largest pivot and recurse.
        k = max(range(d), key=lambda j: abs(a[j]))
        if a[k] == 0:
            return None
        sub = _eliminate(k, a, b, c, seen[:-1], box, d)
        if sub is None:
            return None
        red_c, red_cons, red_box = sub
        y = _solve(red_c, red_cons, red_box, rng)
        if y is None:
            return None
        x = _lift(k, a, b, y)
    return x


def _eliminate(k, a, b, c, prev_cons, box, d):
    """Substitute x_k = (b - sum_{j!=k} a_j x_j) / a_k everywhere."""
    ak = a[k]
    others = [j for j in range(d) if j != k]

    def reduce_row(row, rhs):
        coef_k = row[k]
        new_row = tuple(row[j] - coef_k * a[j] / ak for j in others)
        new_rhs = rhs - coef_k * b / ak
        return new_row, new_rhs

    red_cons = [reduce_row(row, rhs) for row, rhs in prev_cons]
    lo_k, hi_k = box[k]
    # x_k <= hi_k and x_k >= lo_k become ordinary constraints of the reduced
    # space; the normalized forms below hold for either sign of a_k.
    red_cons.append((tuple(-a[j] / ak for j in others), hi_k - b / ak))
    red_cons.append((tuple(a[j] / ak for j in others), b / ak - lo_k))

    red_c = [c[j] - c[k] * a[j] / ak for j in others]
    red_box = [box[j] for j in others]
    return red_c, red_cons, red_box


def _lift(k, a, b, y):
    d = len(y) + 1
    others = [j for j in range(d) if j != k]
    x = [Fraction(0)] * d
    for pos, j in enumerate(others):
        x[j] = y[pos]
    x[k] = (b - sum(a[j] * x[j] for j in others)) / a[k]
    return x


def value(c: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    return sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))

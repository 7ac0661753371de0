"""Rational polytopes with exact dual representations.

A Polytope carries an irredundant vertex list, an irredundant facet list
(inequalities valid within the affine hull) and, for lower-dimensional
polytopes, the affine-hull equations.  Everything is canonically ordered,
so structural equality of two Polytope values is set equality of the
underlying point sets.

The heavy lifting happens in integer coordinates: point sets are scaled by
per-coordinate denominators and handed to the quickhull engine; results are
mapped back to exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import factorial, gcd, lcm
from typing import Iterable, Sequence

from . import _kernels as K
from . import lp
from .errors import DimensionMismatch, EmptyInput, InternalCheckError, UnboundedRegionError
from .hull import HullResult, integer_hull
from .linalg import nullspace, rank, rref, solve_any, solve_square
from .rational import Point, RationalLike, dot, point, rat, vadd, vsub


@dataclass(frozen=True)
class Halfspace:
    """The constraint <normal, x> <= offset."""

    normal: Point
    offset: Fraction

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, x) - self.offset


@dataclass(frozen=True)
class Hyperplane:
    """The constraint <normal, x> == offset."""

    normal: Point
    offset: Fraction

    def value(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.normal, x) - self.offset


def _canon_halfspace(normal: Sequence[Fraction], offset: Fraction) -> Halfspace:
    """Scale to coprime integers without flipping the inequality."""
    den = 1
    for c in list(normal) + [offset]:
        den = lcm(den, Fraction(c).denominator)
    ints = [int(c * den) for c in normal]
    off = int(offset * den)
    g = 0
    for v in ints + [off]:
        g = gcd(g, v)
    if g > 1:
        ints = [v // g for v in ints]
        off = off // g
    return Halfspace(tuple(Fraction(v) for v in ints), Fraction(off))


def _canon_hyperplane(normal: Sequence[Fraction], offset: Fraction) -> Hyperplane:
    h = _canon_halfspace(normal, offset)
    ints = [int(c) for c in h.normal]
    off = int(h.offset)
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-u for u in ints]
                off = -off
            break
    return Hyperplane(tuple(Fraction(v) for v in ints), Fraction(off))


@dataclass(frozen=True)
class Polytope:
    """Bounded rational polytope; dim == -1 encodes the empty polytope."""

    n: int
    dim: int
    vertices: tuple[Point, ...]
    facets: tuple[Halfspace, ...]
    equations: tuple[Hyperplane, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(sorted(self.vertices)))
        object.__setattr__(
            self, "facets", tuple(sorted(self.facets, key=lambda h: (h.normal, h.offset)))
        )
        object.__setattr__(
            self, "equations", tuple(sorted(self.equations, key=lambda h: (h.normal, h.offset)))
        )

    @property
    def is_empty(self) -> bool:
        return self.dim < 0

    def centroid(self) -> Point:
        if self.is_empty:
            raise EmptyInput("empty polytope has no centroid")
        k = Fraction(len(self.vertices))
        return tuple(sum(v[j] for v in self.vertices) / k for j in range(self.n))

    def bounding_box(self) -> list[tuple[Fraction, Fraction]]:
        if self.is_empty:
            raise EmptyInput("empty polytope has no bounding box")
        return [
            (min(v[j] for v in self.vertices), max(v[j] for v in self.vertices))
            for j in range(self.n)
        ]

    def translate(self, shift: Sequence[RationalLike]) -> "Polytope":
        t = point(shift)
        if len(t) != self.n:
            raise DimensionMismatch("translation vector dimension mismatch")
        if self.is_empty:
            return self
        return Polytope(
            self.n,
            self.dim,
            tuple(vadd(v, t) for v in self.vertices),
            tuple(Halfspace(f.normal, f.offset + dot(f.normal, t)) for f in self.facets),
            tuple(Hyperplane(e.normal, e.offset + dot(e.normal, t)) for e in self.equations),
        )

    def scaled(self, t: RationalLike) -> "Polytope":
        t = rat(t)
        if t <= 0:
            raise ValueError("scaling factor must be positive")
        if self.is_empty:
            return self
        return Polytope(
            self.n,
            self.dim,
            tuple(tuple(t * c for c in v) for v in self.vertices),
            tuple(_canon_halfspace(f.normal, t * f.offset) for f in self.facets),
            tuple(_canon_hyperplane(e.normal, t * e.offset) for e in self.equations),
        )

    def validate(self) -> None:
        """Exhaustive self-check; raises InternalCheckError on violation."""
        if self.is_empty:
            if self.vertices or self.facets or self.equations:
                raise InternalCheckError("empty polytope with data")
            return
        for v in self.vertices:
            if not contains(self, v):
                raise InternalCheckError(f"vertex {v} violates own H-rep")
            tight = [f.normal for f in self.facets if f.value(v) == 0]
            if rank(tight) + len(self.equations) < self.n and self.dim > 0:
                raise InternalCheckError(f"vertex {v} not tight on enough facets")
        if len(self.vertices) != len(set(self.vertices)):
            raise InternalCheckError("duplicate vertices")
        rebuilt = convex_hull(self.vertices)
        if rebuilt != self:
            raise InternalCheckError("polytope is not in canonical form")


def empty_polytope(n: int) -> Polytope:
    return Polytope(n, -1, (), (), ())


def _affine_basis(pts: list[Point]) -> tuple[Point, list[Point]]:
    base = pts[0]
    dirs: list[Point] = []
    for p in pts[1:]:
        d = vsub(p, base)
        if rank(dirs + [list(d)]) > len(dirs):
            dirs.append(d)
    return base, dirs


def _int_scale(chart_pts: list[tuple[Fraction, ...]], d: int) -> tuple[list[tuple[int, ...]], list[int]]:
    scales = []
    for j in range(d):
        s = 1
        for p in chart_pts:
            s = lcm(s, p[j].denominator)
        scales.append(s)
    ipts = [tuple(int(p[j] * scales[j]) for j in range(d)) for p in chart_pts]
    return ipts, scales


def _extreme_indices(ipts: list[tuple[int, ...]], merged, d: int) -> list[int]:
    cand = sorted(set().union(*(verts for verts in merged.values())) if merged else set())
    out = []
    for i in cand:
        tight = [list(map(Fraction, normal)) for (normal, off), verts in merged.items()
                 if K.eval_one(normal, off, ipts[i]) == 0]
        if rank(tight) == d:
            out.append(i)
    return out


def convex_hull(points: Iterable[Sequence[RationalLike]]) -> Polytope:
    """Irredundant V- and H-representation of conv(points), any dimension."""
    pts = [point(p) for p in points]
    if not pts:
        raise EmptyInput("convex hull of no points")
    n = len(pts[0])
    for p in pts:
        if len(p) != n:
            raise DimensionMismatch("points of mixed dimension")
    pts = sorted(dict.fromkeys(pts))

    if len(pts) == 1:
        basis = [[Fraction(1 if i == j else 0) for j in range(n)] for i in range(n)]
        eqs = tuple(_canon_hyperplane(basis[i], pts[0][i]) for i in range(n))
        return Polytope(n, 0, (pts[0],), (), eqs)

    base, dirs = _affine_basis(pts)
    d = len(dirs)

    if d == n:
        chart_pts = pts
        ipts, scales = _int_scale(chart_pts, n)
        hull = integer_hull(ipts, n)
        merged = hull.merged_facets()
        extreme = _extreme_indices(ipts, merged, n)
        vertices = tuple(pts[i] for i in extreme)
        facets = tuple(
            _canon_halfspace([Fraction(normal[j] * scales[j]) for j in range(n)], Fraction(off))
            for (normal, off) in merged
        )
        return Polytope(n, n, vertices, facets, ())

    # Lower-dimensional hull: map into a d-dimensional chart.
    dir_rows = [list(v) for v in dirs]
    _, pivots = rref(dir_rows)
    m = [[dirs[i][j] for i in range(d)] for j in pivots]
    chart_pts = []
    for p in pts:
        rhs = [p[j] - base[j] for j in pivots]
        y = solve_square(m, rhs)
        if y is None:
            raise InternalCheckError("affine chart solve failed")
        chart_pts.append(tuple(y))
    ipts, scales = _int_scale(chart_pts, d)
    hull = integer_hull(ipts, d)
    merged = hull.merged_facets()
    extreme = _extreme_indices(ipts, merged, d)
    vertices = tuple(pts[i] for i in extreme)

    facets = []
    for (normal, off) in merged:
        a = [Fraction(normal[j] * scales[j]) for j in range(d)]
        amb = solve_any(dir_rows, a)
        if amb is None:
            raise InternalCheckError("facet lift solve failed")
        facets.append(_canon_halfspace(amb, Fraction(off) + dot(amb, base)))

    eqs = [_canon_hyperplane(e, dot(e, base)) for e in nullspace(dir_rows)]
    return Polytope(n, d, vertices, tuple(facets), tuple(eqs))


def contains(P: Polytope, x: Sequence[RationalLike], strict: bool = False) -> bool:
    """Exact membership; the strict variant tests the relative interior."""
    xp = point(x)
    if len(xp) != P.n:
        raise DimensionMismatch("point dimension mismatch")
    if P.is_empty:
        return False
    for e in P.equations:
        if e.value(xp) != 0:
            return False
    for f in P.facets:
        v = f.value(xp)
        if v > 0 or (strict and v == 0):
            return False
    return True


def volume(P: Polytope) -> Fraction:
    """Exact ambient Lebesgue volume; 0 for lower-dimensional polytopes.

    Fan triangulation from the lexicographically smallest vertex over the
    simplicial facets of a fresh hull run, each simplex contributing
    |det|/n!.
    """
    if P.dim < P.n:
        return Fraction(0)
    n = P.n
    ipts, scales = _int_scale(list(P.vertices), n)
    hull = integer_hull(ipts, n)
    return _fan_volume(ipts, hull, base_index=0, n=n) / _prod(scales)


def _prod(xs: Iterable[int]) -> Fraction:
    out = Fraction(1)
    for x in xs:
        out *= x
    return out


def _fan_volume(ipts, hull: HullResult, base_index: int, n: int) -> Fraction:
    base = ipts[base_index]
    total = 0
    for fverts, _normal, _off in hull.facets:
        if base_index in fverts:
            continue
        rows = [[ipts[v][j] - base[j] for j in range(n)] for v in fverts]
        total += abs(K.det_int(rows))
    return Fraction(total, factorial(n))


def normalized_volume(P: Polytope) -> Fraction:
    return factorial(P.n) * volume(P)


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.n != Q.n:
        raise DimensionMismatch("minkowski sum of different ambient dimensions")
    if P.is_empty or Q.is_empty:
        return empty_polytope(P.n)
    return convex_hull([vadd(p, q) for p in P.vertices for q in Q.vertices])


_COMBINATION_CAP = 400_000


def polytope_from_halfspaces(
    n: int,
    halfspaces: Sequence[Halfspace],
    equations: Sequence[Hyperplane] = (),
    assume_bounded: bool = False,
) -> Polytope:
    """Vertex enumeration of {x : equations, halfspaces}, small scale.

    Every vertex of the (possibly lower-dimensional) region is the unique
    solution of n linearly independent tight constraints, so enumerating
    basic feasible solutions is exhaustive.  Unbounded regions are refused
    (recession-cone certificate via exact LP) unless assume_bounded.
    """
    hs = list(dict.fromkeys(_canon_halfspace(h.normal, h.offset) for h in halfspaces))
    eq_rows: list[list[Fraction]] = []
    eq_rhs: list[Fraction] = []
    for e in equations:
        aug = [list(r) + [v] for r, v in zip(eq_rows, eq_rhs)] + [list(e.normal) + [e.offset]]
        rows, pivots = rref(aug)
        if n in pivots:
            return empty_polytope(n)
        eq_rows = [r[:n] for r in rows[: len(pivots)]]
        eq_rhs = [r[n] for r in rows[: len(pivots)]]
    e_rank = len(eq_rows)
    k = n - e_rank

    if not assume_bounded and _has_recession(n, hs, eq_rows):
        raise UnboundedRegionError("halfspace region is unbounded")

    from math import comb

    if comb(len(hs), k) > _COMBINATION_CAP:
        raise InternalCheckError("vertex enumeration too large; prune constraints first")

    found: list[Point] = []
    for combo in combinations(hs, k):
        rows = eq_rows + [list(h.normal) for h in combo]
        rhs = eq_rhs + [h.offset for h in combo]
        aug = [r + [rhs[i]] for i, r in enumerate(rows)]
        red, pivots = rref(aug)
        if len(pivots) != n or n in pivots:
            continue
        x = tuple(red[i][n] for i in range(n))
        ok = all(h.value(x) <= 0 for h in hs)
        if ok:
            found.append(x)
    if not found:
        return empty_polytope(n)
    return convex_hull(found)


def _has_recession(n: int, halfspaces: Sequence[Halfspace], eq_rows: Sequence[Sequence[Fraction]]) -> bool:
    cons = [(tuple(h.normal), Fraction(0)) for h in halfspaces]
    for row in eq_rows:
        cons.append((tuple(row), Fraction(0)))
        cons.append((tuple(-c for c in row), Fraction(0)))
    box = [(Fraction(-1), Fraction(1))] * n
    for j in range(n):
        for sgn in (1, -1):
            c = [Fraction(0)] * n
            c[j] = Fraction(sgn)
            x = lp.maximize(c, cons, box)
            if x is None:
                raise InternalCheckError("recession cone LP infeasible at origin")
            if lp.value(c, x) > 0:
                return True
    return False


def intersect(P: Polytope, Q: Polytope) -> Polytope:
    """Exact intersection of two bounded polytopes."""
    if P.n != Q.n:
        raise DimensionMismatch("intersection of different ambient dimensions")
    if P.is_empty or Q.is_empty:
        return empty_polytope(P.n)
    return polytope_from_halfspaces(
        P.n,
        tuple(P.facets) + tuple(Q.facets),
        tuple(P.equations) + tuple(Q.equations),
        assume_bounded=True,
    )


def box_polytope(bounds: Sequence[tuple[RationalLike, RationalLike]]) -> Polytope:
    """Axis-aligned box from per-coordinate (lo, hi) bounds."""
    lo = [rat(a) for a, _ in bounds]
    hi = [rat(b) for _, b in bounds]
    n = len(bounds)
    corners = []
    for mask in range(1 << n):
        corners.append(tuple(hi[j] if mask >> j & 1 else lo[j] for j in range(n)))
    return convex_hull(corners)

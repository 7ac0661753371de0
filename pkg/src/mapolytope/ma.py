"""The atomic Monge-Ampere measure of a PA convex function.

For a piecewise-affine convex h the gradient image of an interior point is
the convex hull of the slopes active there, so the measure is purely
atomic: one atom per interior vertex of the linearity complex, with mass
the exact volume of that vertex's subdifferential.  The public
subdifferential operation additionally certifies the polytope against the
defining system of inequalities (one per complex vertex) before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm
from typing import Callable, Iterable, Sequence

from .errors import (
    BoundaryPointError,
    DimensionMismatch,
    InternalCheckError,
    PreconditionError,
)
from .geom import Halfspace, Polytope, contains, convex_hull, polytope_from_halfspaces, volume
from .rational import Point, RationalLike, dot, point, rat, vsub
from .subdivision import (
    PAConvexFunction,
    canonicalize,
    complex_with_pieces,
    interior_vertices,
)


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite nonnegative combination of point masses, sorted by location."""

    n: int
    atoms: tuple[tuple[Point, Fraction], ...]

    def __post_init__(self) -> None:
        pts = [p for p, _ in self.atoms]
        if len(set(pts)) != len(pts):
            raise InternalCheckError("atoms must sit at distinct points")
        for p, m in self.atoms:
            if len(p) != self.n:
                raise DimensionMismatch("atom dimension mismatch")
            if m <= 0:
                raise InternalCheckError("atom masses must be positive")
        object.__setattr__(self, "atoms", tuple(sorted(self.atoms)))

    @property
    def total_mass(self) -> Fraction:
        return sum((m for _, m in self.atoms), Fraction(0))

    def mass_at(self, x: Sequence[RationalLike]) -> Fraction:
        xp = point(x)
        for p, m in self.atoms:
            if p == xp:
                return m
        return Fraction(0)


def zero_measure(n: int) -> AtomicMeasure:
    return AtomicMeasure(n, ())


def _measure_from_dict(n: int, masses: dict[Point, Fraction]) -> AtomicMeasure:
    return AtomicMeasure(n, tuple((p, m) for p, m in masses.items() if m != 0))


@dataclass(frozen=True)
class DegreeReport:
    """Vertex mass together with its toric intersection-degree rendering."""

    vertex: Point
    subdifferential: Polytope
    ma_mass: Fraction
    toric_degree: Fraction
    deg_s: int
    rescale: Fraction
    translation_check: bool

    def __post_init__(self) -> None:
        n = len(self.vertex)
        if self.toric_degree != self.deg_s * factorial(n) * self.ma_mass:
            raise InternalCheckError("degree/mass identity violated")


def _complex_value_map(h: PAConvexFunction) -> dict[Point, Fraction]:
    # h must already be canonical so cell piece indices match h.pieces.
    cplx, piece_of_cell = complex_with_pieces(h)
    vals: dict[Point, Fraction] = {}
    for cell, pi in zip(cplx.maximal_cells, piece_of_cell):
        piece = h.pieces[pi]
        for v in cell.vertices:
            vals[v] = piece(v)
    return vals


def subdifferential(h: PAConvexFunction, x0: Sequence[RationalLike]) -> Polytope:
    """Gradient image of an interior point, as an exact polytope.

    Computed as the hull of the active slopes, then certified equal to the
    system {p : <v - x0, p> <= h(v) - h(x0)} over the complex vertices v:
    hull vertices are checked against every inequality, and the subsystem
    from the cells incident to x0 is vertex-enumerated and compared.  The
    two certificates sandwich the full system, which proves equality.
    """
    h = canonicalize(h)
    x0p = point(x0)
    if not contains(h.domain, x0p):
        raise PreconditionError(f"point {x0p} lies outside the domain")
    if not contains(h.domain, x0p, strict=True):
        raise BoundaryPointError(
            "gradient image on the domain boundary may be unbounded; "
            "only interior points are supported"
        )
    cplx, piece_of_cell = complex_with_pieces(h)
    incident = [k for k, cell in enumerate(cplx.maximal_cells) if contains(cell, x0p)]
    if not incident:
        raise InternalCheckError("interior point not covered by the complex")
    slopes = sorted({h.pieces[piece_of_cell[k]].slope for k in incident})
    sub = convex_hull(slopes)

    hx0 = h.value(x0p)
    vals = _complex_value_map(h)
    for v, hv in vals.items():
        bound = hv - hx0
        for p in sub.vertices:
            if dot(vsub(v, x0p), p) > bound:
                raise InternalCheckError("active-slope hull violates a gradient inequality")

    local: list[Halfspace] = []
    seen = set()
    for k in incident:
        for v in cplx.maximal_cells[k].vertices:
            if v == x0p or v in seen:
                continue
            seen.add(v)
            local.append(Halfspace(vsub(v, x0p), vals[v] - hx0))
    system = polytope_from_halfspaces(h.n, local)
    if system != sub:
        raise InternalCheckError("gradient-inequality system disagrees with slope hull")
    return sub


def ma_measure(h: PAConvexFunction) -> AtomicMeasure:
    """Atoms at the interior vertices of the linearity complex."""
    h = canonicalize(h)
    cplx, piece_of_cell = complex_with_pieces(h)
    # Which slopes are active at each complex vertex, via cell incidence.
    slopes_at: dict[Point, set[Point]] = {}
    for cell, pi in zip(cplx.maximal_cells, piece_of_cell):
        s = h.pieces[pi].slope
        for v in cell.vertices:
            slopes_at.setdefault(v, set()).add(s)
    masses: dict[Point, Fraction] = {}
    for u in interior_vertices(cplx):
        slopes = sorted(slopes_at[u])
        if len(slopes) <= h.n:
            continue
        m = volume(convex_hull(slopes))
        if m != 0:
            masses[u] = m
    return _measure_from_dict(h.n, masses)


def ma_eval(mu: AtomicMeasure, E: Polytope) -> Fraction:
    """Measure of a polytopal set: total mass of the atoms it contains."""
    if mu.n != E.n:
        raise DimensionMismatch("measure and set dimension mismatch")
    total = Fraction(0)
    for p, m in mu.atoms:
        if contains(E, p):
            total += m
    return total


def integrate(mu: AtomicMeasure, f: Callable[[Point], RationalLike]) -> Fraction:
    """Exact integral of an evaluator against an atomic measure."""
    return sum((m * rat(f(p)) for p, m in mu.atoms), Fraction(0))


def mixed_ma(hs: Sequence[PAConvexFunction]) -> AtomicMeasure:
    """Mixed measure by inclusion-exclusion over sums of the arguments:

        MA(h_1, ..., h_n) = (1/n!) * sum_k (-1)^(n-k)
                            * sum_{i_1 < ... < i_k} MA(h_{i_1} + ... + h_{i_k})
    """
    from itertools import combinations

    if not hs:
        raise PreconditionError("mixed measure of an empty family")
    n = hs[0].n
    if len(hs) != n:
        raise PreconditionError(
            f"mixed measure needs exactly n = {n} functions, got {len(hs)}"
        )
    dom = hs[0].domain
    for h in hs:
        if h.domain != dom:
            raise PreconditionError("mixed measure requires a common domain")
    masses: dict[Point, Fraction] = {}
    for k in range(1, n + 1):
        coef = Fraction((-1) ** (n - k), factorial(n))
        for combo in combinations(range(n), k):
            hsum = hs[combo[0]]
            for i in combo[1:]:
                hsum = hsum + hs[i]
            mu = ma_measure(hsum)
            for p, m in mu.atoms:
                masses[p] = masses.get(p, Fraction(0)) + coef * m
    for p, m in masses.items():
        if m < 0:
            raise InternalCheckError(f"mixed measure mass {m} at {p} is negative")
    return _measure_from_dict(n, masses)


def toric_degree(h: PAConvexFunction, u: Sequence[RationalLike], deg_s: int) -> DegreeReport:
    """Intersection degree at an interior vertex: deg_s * n! * mass.

    Slopes are made integral first by scaling h with the least common
    denominator (the factor is reported); the mass and degree refer to the
    rescaled function.  The translation identity moving u to the origin is
    re-derived and asserted exactly.
    """
    if not isinstance(deg_s, int) or deg_s < 1:
        raise PreconditionError("deg_s must be a positive integer")
    h = canonicalize(h)
    up = point(u)
    if not contains(h.domain, up, strict=True):
        raise BoundaryPointError("vertex on the domain boundary")
    cplx, _ = complex_with_pieces(h)
    if up not in set(cplx.vertex_set()):
        raise PreconditionError(f"{up} is not a vertex of the linearity complex")

    lam = 1
    for p in h.pieces:
        for c in p.slope:
            lam = lcm(lam, c.denominator)
    hi = h.scaled(lam) if lam > 1 else h

    sub = subdifferential(hi, up)
    mass = volume(sub)
    degree = deg_s * factorial(h.n) * mass

    recentred = hi.recentred(up)
    sub0 = subdifferential(recentred, [Fraction(0)] * h.n)
    if sub0 != sub:
        raise InternalCheckError("translation identity for the gradient image failed")

    return DegreeReport(
        vertex=up,
        subdifferential=sub,
        ma_mass=mass,
        toric_degree=degree,
        deg_s=deg_s,
        rescale=Fraction(lam),
        translation_check=True,
    )

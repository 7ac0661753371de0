"""Piecewise-affine convex functions and their polytopal complexes.

A PA convex function is the max of finitely many affine functionals over a
full-dimensional domain polytope, so convexity is structural.  Its
linearity complex (the cells where one piece dominates) is derived on
demand and cached; cells are computed exactly by clipping each piece's
dominance region with the domain, pruning non-neighbors via the lifted
dual hull when the piece count is large.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .errors import DomainMismatch, EmptyInput, InternalCheckError, PreconditionError
from .geom import (
    Halfspace,
    Polytope,
    _canon_halfspace,
    contains,
    convex_hull,
    intersect,
    polytope_from_halfspaces,
    volume,
)
from .rational import AffineFunctional, Point, RationalLike, dot, point, rat, vsub


@dataclass(frozen=True)
class PolytopalComplex:
    """Face-closed family of polytopes covering a domain.

    Only the maximal cells are stored; faces and the incidence map are
    recomputed on demand (this matches the serialized form, which lists
    maximal cells only).
    """

    domain: Polytope
    maximal_cells: tuple[Polytope, ...]

    def __post_init__(self) -> None:
        cells = tuple(sorted(self.maximal_cells, key=lambda c: c.vertices))
        object.__setattr__(self, "maximal_cells", cells)

    @property
    def n(self) -> int:
        return self.domain.n

    def vertex_set(self) -> list[Point]:
        seen: set[Point] = set()
        for c in self.maximal_cells:
            seen.update(c.vertices)
        return sorted(seen)

    def cells(self) -> list[Polytope]:
        """All cells, i.e. the face closure of the maximal cells."""
        cached = getattr(self, "_cells_cache", None)
        if cached is None:
            seen: dict[tuple, Polytope] = {}
            for c in self.maximal_cells:
                for f in all_faces(c):
                    seen.setdefault(f.vertices, f)
            cached = sorted(seen.values(), key=lambda c: (c.dim, c.vertices))
            object.__setattr__(self, "_cells_cache", cached)
        return list(cached)

    def incidence(self) -> dict[Polytope, tuple[Polytope, ...]]:
        """Map each cell to its (proper and improper) faces in the complex."""
        return {c: tuple(all_faces(c)) for c in self.cells()}

    def validate(self) -> None:
        """Cover and face-compatibility checks; raises InternalCheckError."""
        n = self.n
        if self.domain.dim != n:
            raise InternalCheckError("complex domain must be full-dimensional")
        total = Fraction(0)
        for c in self.maximal_cells:
            if c.dim != n:
                raise InternalCheckError("maximal cell of deficient dimension")
            for v in c.vertices:
                if not contains(self.domain, v):
                    raise InternalCheckError("cell leaves the domain")
            total += volume(c)
        if total != volume(self.domain):
            raise InternalCheckError("maximal cells do not tile the domain")
        cells = self.maximal_cells
        for i in range(len(cells)):
            faces_i = {f.vertices for f in all_faces(cells[i])}
            for j in range(i + 1, len(cells)):
                inter = intersect(cells[i], cells[j])
                if inter.is_empty:
                    continue
                faces_j = {f.vertices for f in all_faces(cells[j])}
                if inter.vertices not in faces_i or inter.vertices not in faces_j:
                    raise InternalCheckError("cell intersection is not a common face")


def all_faces(P: Polytope) -> list[Polytope]:
    """Nonempty faces of a polytope, including itself and its vertices."""
    if P.is_empty:
        return []
    cached = getattr(P, "_faces_cache", None)
    if cached is not None:
        return list(cached)
    nv = len(P.vertices)
    tight = [
        frozenset(i for i in range(nv) if f.value(P.vertices[i]) == 0) for f in P.facets
    ]
    start = frozenset(range(nv))
    seen = {start}
    queue = [start]
    while queue:
        s = queue.pop()
        for t in tight:
            u = s & t
            if u and u not in seen:
                seen.add(u)
                queue.append(u)
    faces = [convex_hull([P.vertices[i] for i in s]) for s in sorted(seen, key=sorted)]
    object.__setattr__(P, "_faces_cache", faces)
    return list(faces)


@dataclass(frozen=True)
class PAConvexFunction:
    """max of affine functionals restricted to a full-dimensional polytope."""

    pieces: tuple[AffineFunctional, ...]
    domain: Polytope
    canonical: bool = False

    def __post_init__(self) -> None:
        if not self.pieces:
            raise EmptyInput("a PA convex function needs at least one piece")
        if self.domain.dim != self.domain.n:
            raise PreconditionError("domain must be a full-dimensional polytope")
        for p in self.pieces:
            if p.dim != self.domain.n:
                raise PreconditionError("piece dimension does not match the domain")
        object.__setattr__(
            self, "pieces", tuple(sorted(self.pieces, key=lambda p: (p.slope, p.intercept)))
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PAConvexFunction):
            return NotImplemented
        return self.pieces == other.pieces and self.domain == other.domain

    def __hash__(self) -> int:
        return hash((self.pieces, self.domain))

    @property
    def n(self) -> int:
        return self.domain.n

    def value(self, x: Sequence[RationalLike]) -> Fraction:
        xp = point(x)
        return max(p(xp) for p in self.pieces)

    def __add__(self, other: "PAConvexFunction") -> "PAConvexFunction":
        if self.domain != other.domain:
            raise DomainMismatch("summands must share the domain polytope")
        best: dict[Point, Fraction] = {}
        for p in self.pieces:
            for q in other.pieces:
                s = p + q
                cur = best.get(s.slope)
                if cur is None or s.intercept > cur:
                    best[s.slope] = s.intercept
        pieces = tuple(AffineFunctional(m, c) for m, c in best.items())
        return PAConvexFunction(pieces, self.domain)

    def scaled(self, t: RationalLike) -> "PAConvexFunction":
        """t*h for rational t > 0 (same linearity complex)."""
        t = rat(t)
        if t <= 0:
            raise ValueError("scaling factor must be positive")
        out = PAConvexFunction(
            tuple(p.scaled(t) for p in self.pieces), self.domain, self.canonical
        )
        _copy_complex_cache(self, out, scale=t)
        return out

    def plus_affine(self, a: AffineFunctional) -> "PAConvexFunction":
        """h + a for affine a (same linearity complex)."""
        out = PAConvexFunction(
            tuple(p + a for p in self.pieces), self.domain, self.canonical
        )
        _copy_complex_cache(self, out, shift=a)
        return out

    def recentred(self, u: Sequence[RationalLike]) -> "PAConvexFunction":
        """x -> h(x + u) - h(u) on the translated domain."""
        up = point(u)
        hu = self.value(up)
        pieces = tuple(
            AffineFunctional(p.slope, p.intercept + dot(p.slope, up) - hu) for p in self.pieces
        )
        neg = tuple(-c for c in up)
        return PAConvexFunction(pieces, self.domain.translate(neg), self.canonical)


def _copy_complex_cache(src: PAConvexFunction, dst: PAConvexFunction,
                        scale: Fraction | None = None,
                        shift: AffineFunctional | None = None) -> None:
    cache = getattr(src, "_complex_cache", None)
    if cache is None:
        return
    cplx, piece_of_cell = cache
    # Scaling by t > 0 or adding an affine functional permutes intercepts but
    # keeps every activity region, so the complex transfers verbatim; only
    # the piece indices must be recomputed against the new sorted order.
    old = src.pieces
    if scale is not None:
        mapped = [p.scaled(scale) for p in old]
    elif shift is not None:
        mapped = [p + shift for p in old]
    else:
        mapped = list(old)
    index = {(p.slope, p.intercept): i for i, p in enumerate(dst.pieces)}
    try:
        new_map = tuple(index[(m.slope, m.intercept)] for m in
                        (mapped[i] for i in piece_of_cell))
    except KeyError:
        return
    object.__setattr__(dst, "_complex_cache", (cplx, new_map))


def pa_function(pieces: Iterable[AffineFunctional], domain: Polytope) -> PAConvexFunction:
    return PAConvexFunction(tuple(pieces), domain)


def _dedupe_slopes(pieces: Sequence[AffineFunctional]) -> list[AffineFunctional]:
    best: dict[Point, Fraction] = {}
    for p in pieces:
        cur = best.get(p.slope)
        if cur is None or p.intercept > cur:
            best[p.slope] = p.intercept
    return [AffineFunctional(m, c) for m, c in best.items()]


def _activity_is_full_dim(h: PAConvexFunction, i: int,
                          pieces: Sequence[AffineFunctional]) -> bool:
    """True when piece i strictly dominates on an open subset of the domain.

    Solved as: maximize t subject to piece_i(x) - piece_j(x) >= t for all j
    and x in the domain; the region {piece_i == h} has dimension n exactly
    when the optimum is positive (the strict-dominance set is open, so
    touching it anywhere forces a full-dimensional patch inside the domain).
    """
    n = h.n
    pi = pieces[i]
    cons: list[lp.Constraint] = []
    big = Fraction(1)
    for v in h.domain.vertices:
        for j, pj in enumerate(pieces):
            if j != i:
                big = max(big, abs(pi(v) - pj(v)))
    for j, pj in enumerate(pieces):
        if j == i:
            continue
        row = tuple(pj.slope[k] - pi.slope[k] for k in range(n)) + (Fraction(1),)
        cons.append((row, pi.intercept - pj.intercept))
    for f in h.domain.facets:
        cons.append((tuple(f.normal) + (Fraction(0),), f.offset))
    box = h.domain.bounding_box() + [(-(big + 1), Fraction(1))]
    opt = lp.maximize([Fraction(0)] * n + [Fraction(1)], cons, box)
    if opt is None:
        raise InternalCheckError("activity LP infeasible on a nonempty domain")
    return opt[n] > 0


def canonicalize(h: PAConvexFunction) -> PAConvexFunction:
    """Drop pieces whose activity region is lower-dimensional.

    The value of h is unchanged on the whole domain: the kept activity
    regions are closed, full-dimensional and cover the domain densely, so
    the max of the kept pieces agrees with h everywhere by continuity.
    """
    if h.canonical:
        return h
    deduped = _dedupe_slopes(h.pieces)
    if len(deduped) == 1:
        return PAConvexFunction(tuple(deduped), h.domain, canonical=True)
    kept = [p for i, p in enumerate(deduped)
            if _activity_is_full_dim(h, i, deduped)]
    if not kept:
        raise InternalCheckError("no piece has a full-dimensional activity region")
    return PAConvexFunction(tuple(kept), h.domain, canonical=True)


_ALL_PAIRS_LIMIT = 16


def _neighbor_candidates(pieces: Sequence[AffineFunctional], n: int) -> list[set[int]]:
    k = len(pieces)
    if k <= _ALL_PAIRS_LIMIT:
        return [set(range(k)) - {i} for i in range(k)]
    lifted = [p.slope + (p.intercept,) for p in pieces]
    hull = convex_hull(lifted)
    idx = {pt: i for i, pt in enumerate(lifted)}
    out: list[set[int]] = [set() for _ in range(k)]
    for f in hull.facets:
        members = [idx[pt] for pt in lifted if f.value(pt) == 0]
        for a in members:
            for b in members:
                if a != b:
                    out[a].add(b)
    # Pieces sharing no hull facet with i cannot bound its cell; pieces that
    # appear nowhere would be redundant, which canonicalize already excluded.
    return out


def linearity_complex(h: PAConvexFunction) -> PolytopalComplex:
    """Regular subdivision of the domain into maximal linearity cells."""
    return complex_with_pieces(h)[0]


def complex_with_pieces(h: PAConvexFunction) -> tuple[PolytopalComplex, tuple[int, ...]]:
    """Linearity complex plus, per maximal cell, the active piece index."""
    h = canonicalize(h)
    cached = getattr(h, "_complex_cache", None)
    if cached is not None:
        return cached
    n = h.n
    pieces = h.pieces
    if len(pieces) == 1:
        result = (PolytopalComplex(h.domain, (h.domain,)), (0,))
        object.__setattr__(h, "_complex_cache", result)
        return result
    neighbors = _neighbor_candidates(pieces, n)
    pairs: list[tuple[Polytope, int]] = []
    for i, pi in enumerate(pieces):
        hs = list(h.domain.facets)
        for j in sorted(neighbors[i]):
            pj = pieces[j]
            hs.append(
                _canon_halfspace(vsub(pj.slope, pi.slope), pi.intercept - pj.intercept)
            )
        cell = polytope_from_halfspaces(n, hs, h.domain.equations, assume_bounded=True)
        if cell.dim != n:
            raise InternalCheckError("canonical piece produced a thin cell")
        pairs.append((cell, i))
    pairs.sort(key=lambda cp: cp[0].vertices)
    cplx = PolytopalComplex(h.domain, tuple(c for c, _ in pairs))
    result = (cplx, tuple(i for _, i in pairs))
    object.__setattr__(h, "_complex_cache", result)
    return result


def attach_complex(h: PAConvexFunction, cplx: PolytopalComplex,
                   piece_of_cell: Sequence[int]) -> PAConvexFunction:
    """Install a precomputed linearity complex (used by grid construction)."""
    object.__setattr__(h, "_complex_cache", (cplx, tuple(piece_of_cell)))
    return h


def common_refinement(a: PolytopalComplex, b: PolytopalComplex) -> PolytopalComplex:
    if a.domain != b.domain:
        raise DomainMismatch("refinement requires identical domains")
    n = a.n
    cells: dict[tuple, Polytope] = {}
    for ca in a.maximal_cells:
        for cb in b.maximal_cells:
            inter = intersect(ca, cb)
            if inter.dim == n:
                cells.setdefault(inter.vertices, inter)
    return PolytopalComplex(a.domain, tuple(cells.values()))


def interior_vertices(cplx: PolytopalComplex) -> list[Point]:
    """0-cells of the complex strictly inside the domain."""
    return [v for v in cplx.vertex_set() if contains(cplx.domain, v, strict=True)]

"""Exact convex hull of integer points (quickhull with outside sets).

The algorithm is the classic one: start from a full-dimensional simplex,
keep per-facet lists of points strictly outside, repeatedly lift the
farthest such point, delete the facets it sees, and stitch new facets along
the horizon.  All predicates are integer determinant signs from
mapolytope._kernels, so coplanar configurations are classified exactly.

Visibility is *weak*: facets whose hyperplane contains the apex are deleted
together with the strictly visible ones and re-coned from the apex.  This
keeps the deleted region connected and guarantees that every horizon ridge
is strictly below the apex, so newly created facets are never degenerate
(the apex cannot lie in the affine hull of a ridge shared with a strictly
invisible neighbor).

Input points must affinely span R^d; lower-dimensional inputs are reduced
to a chart by the caller (see mapolytope.geom.convex_hull).
"""

from __future__ import annotations

from typing import Iterable, Sequence

from . import _kernels as K
from .linalg import rank

IntPoint = tuple[int, ...]


class _Facet:
    __slots__ = ("verts", "normal", "offset", "neighbors", "outside", "alive")

    def __init__(self, verts: tuple[int, ...], normal: tuple[int, ...], offset: int):
        self.verts = verts
        self.normal = normal
        self.offset = offset
        self.neighbors: dict[frozenset[int], "_Facet"] = {}
        self.outside: list[int] = []
        self.alive = True


class HullResult:
    """Simplicial facet list of the hull of full-dimensional integer points.

    facets: list of (vertex index tuple, outward integer normal, offset)
    with <normal, x> <= offset on the hull and equality on the facet.
    """

    def __init__(self, dim: int, facets: list[tuple[tuple[int, ...], tuple[int, ...], int]]):
        self.dim = dim
        self.facets = facets

    def merged_facets(self) -> dict[tuple[tuple[int, ...], int], set[int]]:
        """Group simplicial facets by supporting hyperplane."""
        groups: dict[tuple[tuple[int, ...], int], set[int]] = {}
        for verts, normal, offset in self.facets:
            groups.setdefault((normal, offset), set()).update(verts)
        return groups


def _initial_simplex(points: Sequence[IntPoint], d: int) -> list[int]:
    order = sorted(range(len(points)), key=lambda i: points[i])
    chosen = [order[0]]
    base = points[order[0]]
    dirs: list[list] = []
    for i in order[1:]:
        cand = [points[i][j] - base[j] for j in range(d)]
        if rank(dirs + [cand]) > len(dirs):
            dirs.append(cand)
            chosen.append(i)
            if len(chosen) == d + 1:
                return chosen
    raise ValueError("points do not affinely span the ambient dimension")


def _oriented(verts: tuple[int, ...], points: Sequence[IntPoint], ref_sum: IntPoint,
              ref_weight: int) -> tuple[tuple[int, ...], int]:
    plane = K.hyperplane([points[v] for v in verts])
    if plane is None:
        raise AssertionError("degenerate facet simplex")
    normal, offset = plane
    side = K.eval_one(normal, offset * ref_weight, ref_sum)
    if side > 0:
        normal = tuple(-c for c in normal)
        offset = -offset
    elif side == 0:
        raise AssertionError("interior reference point on a facet hyperplane")
    return normal, offset


def integer_hull(points: Sequence[IntPoint], d: int, verify: bool = False) -> HullResult:
    """Hull of deduplicated integer points affinely spanning R^d."""
    npts = len(points)
    if d == 1:
        vals = [(p[0], i) for i, p in enumerate(points)]
        lo = min(vals)[1]
        hi = max(vals)[1]
        return HullResult(1, [((hi,), (1,), points[hi][0]), ((lo,), (-1,), -points[lo][0])])

    simplex = _initial_simplex(points, d)
    ref_sum = tuple(sum(points[v][j] for v in simplex) for j in range(d))
    ref_weight = d + 1

    facets: list[_Facet] = []
    for skip in range(d + 1):
        verts = tuple(simplex[i] for i in range(d + 1) if i != skip)
        normal, offset = _oriented(verts, points, ref_sum, ref_weight)
        facets.append(_Facet(verts, normal, offset))
    for i, f in enumerate(facets):
        for g in facets[i + 1 :]:
            ridge = frozenset(f.verts) & frozenset(g.verts)
            if len(ridge) == d - 1:
                f.neighbors[ridge] = g
                g.neighbors[ridge] = f

    in_simplex = set(simplex)
    candidates = [i for i in range(npts) if i not in in_simplex]
    for f in facets:
        if not candidates:
            break
        vals = K.eval_many(f.normal, f.offset, points, candidates)
        keep = []
        for idx, v in zip(candidates, vals):
            (f.outside if v > 0 else keep).append(idx)
        candidates = keep

    stack = [f for f in facets if f.outside]
    all_facets = list(facets)

    while stack:
        facet = stack.pop()
        if not facet.alive or not facet.outside:
            continue
        vals = K.eval_many(facet.normal, facet.offset, points, facet.outside)
        best = max(range(len(vals)), key=lambda k: (vals[k], -facet.outside[k]))
        apex = facet.outside[best]
        apex_pt = points[apex]

        # Facets the apex sees (weakly); the seed sees it strictly.
        visible = [facet]
        facet.alive = False
        queue = [facet]
        while queue:
            f = queue.pop()
            for g in f.neighbors.values():
                if g.alive and K.eval_one(g.normal, g.offset, apex_pt) >= 0:
                    g.alive = False
                    visible.append(g)
                    queue.append(g)

        horizon: list[tuple[frozenset[int], _Facet]] = []
        orphans: list[int] = []
        for f in visible:
            for ridge, g in f.neighbors.items():
                if g.alive:
                    horizon.append((ridge, g))
            for idx in f.outside:
                if idx != apex:
                    orphans.append(idx)
            f.outside = []

        new_facets: list[_Facet] = []
        half_ridges: dict[frozenset[int], _Facet] = {}
        for ridge, old_neighbor in horizon:
            verts = tuple(sorted(ridge)) + (apex,)
            normal, offset = _oriented(verts, points, ref_sum, ref_weight)
            nf = _Facet(verts, normal, offset)
            nf.neighbors[ridge] = old_neighbor
            old_neighbor.neighbors[ridge] = nf
            vset = frozenset(verts)
            for drop in ridge:
                sub = vset - {drop}
                other = half_ridges.pop(sub, None)
                if other is None:
                    half_ridges[sub] = nf
                else:
                    nf.neighbors[sub] = other
                    other.neighbors[sub] = nf
            new_facets.append(nf)
            all_facets.append(nf)

        remaining = list(dict.fromkeys(orphans))
        for nf in new_facets:
            if not remaining:
                break
            vals = K.eval_many(nf.normal, nf.offset, points, remaining)
            keep = []
            for idx, v in zip(remaining, vals):
                (nf.outside if v > 0 else keep).append(idx)
            remaining = keep
        for nf in new_facets:
            if nf.outside:
                stack.append(nf)

    alive = [f for f in all_facets if f.alive]
    if verify:
        everything = list(range(npts))
        for f in alive:
            if any(v > 0 for v in K.eval_many(f.normal, f.offset, points, everything)):
                raise AssertionError("hull certification failed: point outside a facet")
    out = [(f.verts, f.normal, f.offset) for f in alive]
    return HullResult(d, out)


def dedupe_points(points: Iterable[IntPoint]) -> list[IntPoint]:
    return list(dict.fromkeys(points))

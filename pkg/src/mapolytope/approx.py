"""Rational PA approximation of convex functions on a polytope.

The scheme samples the function on a step lattice (plus the domain
vertices), lifts the samples to graph points and takes the facets of the
lower convex hull: the resulting max-of-affine function is the secant
interpolant, which matches the samples exactly and converges uniformly as
the step shrinks.  The induced subdivision comes straight from the lower
facets, so downstream measure computations reuse it instead of rebuilding
cells piece by piece.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .errors import ConvexityError, EmptyInput, InternalCheckError, PreconditionError
from .geom import Polytope, _int_scale, contains, convex_hull
from .hull import integer_hull
from .linalg import rank, solve_square
from .ma import AtomicMeasure, integrate, ma_measure
from .rational import AffineFunctional, Point, RationalLike, point, rat, vsub
from .subdivision import PAConvexFunction, PolytopalComplex, attach_complex, complex_with_pieces

Evaluator = Callable[[Point], RationalLike]


@dataclass(frozen=True)
class ConvexEvaluator:
    """Caller-supplied exact evaluator, assumed convex on the domain."""

    eval: Evaluator
    domain: Polytope

    def __call__(self, x: Sequence[RationalLike]) -> Fraction:
        return rat(self.eval(point(x)))


def convex_evaluator(fn: Evaluator, domain: Polytope) -> ConvexEvaluator:
    """Wrap an evaluator, spot-checking midpoint convexity on the vertices."""
    f = ConvexEvaluator(fn, domain)
    pts = list(domain.vertices)
    if not domain.is_empty:
        pts.append(domain.centroid())
    _spot_check(f, pts)
    return f


def _spot_check(f: ConvexEvaluator, pts: Sequence[Point], limit: int = 64) -> None:
    stride = max(1, len(pts) // 8)
    checked = 0
    for i in range(0, len(pts), stride):
        for j in range(i + 1, len(pts), stride):
            if checked >= limit:
                return
            x, y = pts[i], pts[j]
            mid = tuple((a + b) / 2 for a, b in zip(x, y))
            if f(mid) > (f(x) + f(y)) / 2:
                raise ConvexityError(
                    f"midpoint convexity fails between {x} and {y}"
                )
            checked += 1


def lattice_samples(domain: Polytope, step: Fraction) -> list[Point]:
    """Step-lattice points inside the domain, plus the domain vertices."""
    bb = domain.bounding_box()
    ranges = []
    for lo, hi in bb:
        k0 = -((-lo) // step)  # ceil(lo/step)
        k1 = hi // step  # floor(hi/step)
        ranges.append(range(int(k0), int(k1) + 1))
    out = set(domain.vertices)
    idx = [r.start for r in ranges]

    def rec(j: int, partial: list[Fraction]) -> None:
        if j == len(ranges):
            p = tuple(partial)
            if contains(domain, p):
                out.add(p)
            return
        for k in ranges[j]:
            rec(j + 1, partial + [k * step])

    rec(0, [])
    return sorted(out)


def pa_from_grid(f: ConvexEvaluator, step: RationalLike) -> PAConvexFunction:
    """Secant PA interpolant of f on the step lattice.

    Exact at every sample; between samples it lies (weakly) above f by
    convexity.  Refining the lattice can only lower the interpolant.
    """
    step = rat(step)
    if step <= 0:
        raise PreconditionError("step must be positive")
    domain = f.domain
    n = domain.n
    if domain.dim != n:
        raise PreconditionError("domain must be full-dimensional")
    samples = lattice_samples(domain, step)
    if not samples:
        raise EmptyInput("no samples in the domain")
    _spot_check(f, samples)
    values = {s: f(s) for s in samples}
    lifted = [s + (values[s],) for s in samples]

    base = lifted[0]
    dirs: list[list[Fraction]] = []
    gens: list[int] = []
    for i, q in enumerate(lifted[1:], start=1):
        d = [a - b for a, b in zip(q, base)]
        if rank(dirs + [d]) > len(dirs):
            dirs.append(d)
            gens.append(i)
            if len(dirs) == n + 1:
                break

    if len(dirs) == n:
        # All samples lie on one non-vertical hyperplane: f is affine there.
        rows = [[lifted[g][j] - base[j] for j in range(n)] for g in gens]
        rhs = [lifted[g][n] - base[n] for g in gens]
        slope = solve_square(rows, rhs)
        if slope is None:
            raise InternalCheckError("affine sample set with vertical span")
        intercept = base[n] - sum(s * c for s, c in zip(slope, base[:n]))
        piece = AffineFunctional(tuple(slope), intercept)
        h = PAConvexFunction((piece,), domain, canonical=True)
        return attach_complex(h, PolytopalComplex(domain, (domain,)), (0,))

    ipts, scales = _int_scale(lifted, n + 1)
    hull = integer_hull(ipts, n + 1)
    cells_pieces: list[tuple[Polytope, AffineFunctional]] = []
    for (normal, off), members in hull.merged_facets().items():
        if normal[n] >= 0:
            continue
        den = Fraction(normal[n] * scales[n])
        slope = tuple(Fraction(-normal[j] * scales[j]) / den for j in range(n))
        intercept = Fraction(off) / den
        cell = convex_hull([samples[i] for i in sorted(members)])
        if cell.dim != n:
            raise InternalCheckError("lower facet projects to a thin cell")
        cells_pieces.append((cell, AffineFunctional(slope, intercept)))
    if not cells_pieces:
        raise InternalCheckError("no lower facets found")

    pieces = tuple(p for _, p in cells_pieces)
    h = PAConvexFunction(pieces, domain, canonical=True)
    index = {(p.slope, p.intercept): i for i, p in enumerate(h.pieces)}
    ordered = sorted(cells_pieces, key=lambda cp: cp[0].vertices)
    cplx = PolytopalComplex(domain, tuple(c for c, _ in ordered))
    piece_of_cell = tuple(index[(p.slope, p.intercept)] for _, p in ordered)
    return attach_complex(h, cplx, piece_of_cell)


def uniform_error(f: ConvexEvaluator, h: PAConvexFunction, probe_step: RationalLike) -> Fraction:
    """max |f - h| over the probe lattice (a lower estimate of the sup norm).

    Pair with oscillation_bound for the convexity-based upper estimate.
    """
    probe_step = rat(probe_step)
    if probe_step <= 0:
        raise PreconditionError("probe step must be positive")
    worst = Fraction(0)
    for s in lattice_samples(f.domain, probe_step):
        worst = max(worst, abs(f(s) - h.value(s)))
    return worst


def oscillation_bound(f: ConvexEvaluator, h: PAConvexFunction) -> Fraction:
    """max over cells of the oscillation of f across the cell's vertices.

    This is the classical interpolation-error gauge for convex functions;
    it is exact for PA inputs whose breakpoints sit on the lattice and
    dominates the true error asymptotically for smooth convex f, but it is
    an estimate, not a certificate, when f dips strictly inside a cell.
    """
    cplx, _ = complex_with_pieces(h)
    worst = Fraction(0)
    for cell in cplx.maximal_cells:
        vals = [f(v) for v in cell.vertices]
        worst = max(worst, max(vals) - min(vals))
    return worst


@dataclass(frozen=True)
class StudyRow:
    step: Fraction
    error_bound: Fraction
    integrals: tuple[Fraction, ...]


@dataclass(frozen=True)
class ConvergenceReport:
    rows: tuple[StudyRow, ...]

    def __post_init__(self) -> None:
        steps = [r.step for r in self.rows]
        if any(b >= a for a, b in zip(steps, steps[1:])):
            raise PreconditionError("study steps must be strictly decreasing")

    def cauchy_differences(self) -> list[list[Fraction]]:
        """Per test function, |I_{k+1} - I_k| across consecutive steps."""
        if not self.rows:
            return []
        ntests = len(self.rows[0].integrals)
        out = []
        for t in range(ntests):
            seq = [r.integrals[t] for r in self.rows]
            out.append([abs(b - a) for a, b in zip(seq, seq[1:])])
        return out


def convergence_study(
    f: ConvexEvaluator,
    steps: Sequence[RationalLike],
    tests: Sequence[Evaluator],
) -> ConvergenceReport:
    """Build approximants at each step and track the test integrals."""
    rsteps = [rat(s) for s in steps]
    if any(s <= 0 for s in rsteps):
        raise PreconditionError("steps must be positive")
    if any(b >= a for a, b in zip(rsteps, rsteps[1:])):
        raise PreconditionError("steps must be strictly decreasing")
    rows = []
    for s in rsteps:
        h = pa_from_grid(f, s)
        mu = ma_measure(h)
        bound = oscillation_bound(f, h)
        integrals = tuple(integrate(mu, t) for t in tests)
        rows.append(StudyRow(s, bound, integrals))
    return ConvergenceReport(tuple(rows))

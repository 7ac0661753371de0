"""Exact 1D solver: deg_S * phi'' = f for piecewise-polynomial density f.

phi is the double antiderivative of f / deg_S, glued C^1 across breakpoints
and pinned by an anchor (point, value, slope).  Nonnegativity of f on each
interval is decided exactly via Sturm sequences, so densities with isolated
zeros pass while genuinely negative ones are rejected.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import (
    InternalCheckError,
    NegativeDensityError,
    PreconditionError,
)
from .linalg import solve_square
from .rational import RationalLike, rat

Coeffs = tuple[Fraction, ...]

DEGREE_CAP = 16


# ---------------------------------------------------------------------------
# dense polynomial helpers (coefficient lists, ascending degree)

def _trim(c: Sequence[Fraction]) -> Coeffs:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_eval(c: Sequence[Fraction], x: Fraction) -> Fraction:
    out = Fraction(0)
    for a in reversed(list(c)):
        out = out * x + a
    return out


def poly_derive(c: Sequence[Fraction]) -> Coeffs:
    return _trim([k * a for k, a in enumerate(c)][1:])


def poly_integrate(c: Sequence[Fraction]) -> Coeffs:
    return _trim([Fraction(0)] + [a / (k + 1) for k, a in enumerate(c)])


def _poly_divmod(a: Coeffs, b: Coeffs) -> tuple[Coeffs, Coeffs]:
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [Fraction(0)] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b) and any(x != 0 for x in a):
        if a[-1] == 0:
            a.pop()
            continue
        shift = len(a) - len(b)
        coef = a[-1] / b[-1]
        q[shift] = coef
        for i, bc in enumerate(b):
            a[shift + i] -= coef * bc
        a.pop()
    return _trim(q), _trim(a)


def _poly_gcd(a: Coeffs, b: Coeffs) -> Coeffs:
    while b:
        _, r = _poly_divmod(a, b)
        a, b = b, r
    if a:
        lead = a[-1]
        a = tuple(x / lead for x in a)
    return a


def _squarefree(p: Coeffs) -> Coeffs:
    dp = poly_derive(p)
    if not dp:
        return _trim([Fraction(1)])
    g = _poly_gcd(p, dp)
    if len(g) <= 1:
        return p
    q, r = _poly_divmod(p, g)
    if r:
        raise InternalCheckError("inexact squarefree division")
    return q


def _sturm_chain(p: Coeffs) -> list[Coeffs]:
    chain = [p, poly_derive(p)]
    while chain[-1]:
        _, r = _poly_divmod(chain[-2], chain[-1])
        chain.append(tuple(-x for x in r))
    chain.pop()
    return chain


def _sign_changes(chain: list[Coeffs], x: Fraction) -> int:
    signs = []
    for c in chain:
        v = poly_eval(c, x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count_roots_open(p: Coeffs, a: Fraction, b: Fraction) -> int:
    """Distinct real roots of squarefree p in the open interval (a, b)."""
    q = list(p)
    # Clear roots at the endpoints so the Sturm count is for the interior.
    while q and poly_eval(q, a) == 0:
        q_t, r = _poly_divmod(_trim(q), (-a, Fraction(1)))
        if r:
            raise InternalCheckError("inexact root removal")
        q = list(q_t)
    while q and poly_eval(q, b) == 0:
        q_t, r = _poly_divmod(_trim(q), (-b, Fraction(1)))
        if r:
            raise InternalCheckError("inexact root removal")
        q = list(q_t)
    qq = _trim(q)
    if len(qq) <= 1:
        return 0
    chain = _sturm_chain(qq)
    return _sign_changes(chain, a) - _sign_changes(chain, b)


def _non_root_point(q: Coeffs, lo: Fraction, hi: Fraction) -> Fraction:
    t = (lo + hi) / 2
    while poly_eval(q, t) == 0:
        t = (lo + t) / 2
    return t


def poly_nonneg_on(p: Sequence[Fraction], a: Fraction, b: Fraction) -> bool:
    """Exact test: p(x) >= 0 for all x in [a, b].

    Sign changes of p happen only at roots of its squarefree part q, so the
    interval is cut until each gap holds at most one root of q and no gap
    with an interior root has a root as an endpoint; then evaluating p at
    the cuts and the gap midpoints is conclusive.
    """
    p = _trim(p)
    if not p:
        return True
    if poly_eval(p, a) < 0 or poly_eval(p, b) < 0:
        return False
    q = _squarefree(p)
    cuts = [a, b]
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        k = _count_roots_open(q, lo, hi)
        if k == 0:
            continue
        if k == 1 and poly_eval(q, lo) != 0 and poly_eval(q, hi) != 0:
            continue
        t = _non_root_point(q, lo, hi)
        cuts.append(t)
        stack.append((lo, t))
        stack.append((t, hi))
    cuts = sorted(set(cuts))
    for x in cuts:
        if poly_eval(p, x) < 0:
            return False
    for lo, hi in zip(cuts, cuts[1:]):
        if poly_eval(p, (lo + hi) / 2) < 0:
            return False
    return True


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PiecewisePolynomial:
    """Polynomial pieces on consecutive intervals of a rational grid.

    Continuity across breakpoints is *not* required: densities are allowed
    to jump (the regularity report detects exactly that), while solution
    functions are constructed continuous by integration.
    """

    breakpoints: tuple[Fraction, ...]
    pieces: tuple[Coeffs, ...]

    def __post_init__(self) -> None:
        bps = tuple(rat(b) for b in self.breakpoints)
        if len(bps) < 2:
            raise PreconditionError("need at least one interval")
        if any(y <= x for x, y in zip(bps, bps[1:])):
            raise PreconditionError("breakpoints must be strictly increasing")
        ps = tuple(_trim(tuple(rat(c) for c in p)) for p in self.pieces)
        if len(ps) != len(bps) - 1:
            raise PreconditionError("need exactly one piece per interval")
        if any(len(p) - 1 > DEGREE_CAP for p in ps):
            raise PreconditionError(f"piece degree exceeds cap {DEGREE_CAP}")
        object.__setattr__(self, "breakpoints", bps)
        object.__setattr__(self, "pieces", ps)

    @property
    def interval(self) -> tuple[Fraction, Fraction]:
        return self.breakpoints[0], self.breakpoints[-1]

    def piece_index(self, x: Fraction) -> int:
        bps = self.breakpoints
        if x < bps[0] or x > bps[-1]:
            raise PreconditionError(f"{x} outside [{bps[0]}, {bps[-1]}]")
        for i in range(len(bps) - 2, -1, -1):
            if x >= bps[i]:
                return i
        return 0

    def value(self, x: RationalLike) -> Fraction:
        x = rat(x)
        return poly_eval(self.pieces[self.piece_index(x)], x)

    def value_left(self, x: RationalLike) -> Fraction:
        x = rat(x)
        i = self.piece_index(x)
        if x == self.breakpoints[i] and i > 0:
            i -= 1
        return poly_eval(self.pieces[i], x)

    def derivative(self) -> "PiecewisePolynomial":
        return PiecewisePolynomial(self.breakpoints, tuple(poly_derive(p) for p in self.pieces))

    def antiderivative(self, start_value: RationalLike = 0) -> "PiecewisePolynomial":
        """Continuous antiderivative with the given value at the left end."""
        out = []
        acc = rat(start_value)
        for i, p in enumerate(self.pieces):
            prim = poly_integrate(p)
            shift = acc - poly_eval(prim, self.breakpoints[i])
            out.append(_trim((prim[0] + shift if prim else shift,) + tuple(prim[1:])))
            acc = poly_eval(out[-1], self.breakpoints[i + 1])
        return PiecewisePolynomial(self.breakpoints, tuple(out))

    def is_continuous(self) -> bool:
        return all(
            poly_eval(self.pieces[i], b) == poly_eval(self.pieces[i + 1], b)
            for i, b in enumerate(self.breakpoints[1:-1])
        )

    def nonnegative(self) -> bool:
        return all(
            poly_nonneg_on(p, self.breakpoints[i], self.breakpoints[i + 1])
            for i, p in enumerate(self.pieces)
        )

    def scaled(self, t: RationalLike) -> "PiecewisePolynomial":
        t = rat(t)
        return PiecewisePolynomial(
            self.breakpoints, tuple(tuple(t * c for c in p) for p in self.pieces)
        )

    def __add__(self, other: "PiecewisePolynomial") -> "PiecewisePolynomial":
        if self.breakpoints != other.breakpoints:
            raise PreconditionError("addition needs matching breakpoints")
        out = []
        for p, q in zip(self.pieces, other.pieces):
            m = max(len(p), len(q))
            pp = list(p) + [Fraction(0)] * (m - len(p))
            qq = list(q) + [Fraction(0)] * (m - len(q))
            out.append(_trim([a + b for a, b in zip(pp, qq)]))
        return PiecewisePolynomial(self.breakpoints, tuple(out))


def constant_density(value: RationalLike, a: RationalLike, b: RationalLike) -> PiecewisePolynomial:
    return PiecewisePolynomial((rat(a), rat(b)), ((rat(value),),))


Anchor = tuple[Fraction, Fraction, Fraction]


@dataclass(frozen=True)
class Solution1D:
    """phi with deg_s * phi'' == f on each interval, convex, C^1 glued."""

    phi: PiecewisePolynomial
    deg_s: int
    anchor: Anchor

    def __post_init__(self) -> None:
        if not self.phi.is_continuous():
            raise InternalCheckError("solution must be continuous")
        if not self.phi.derivative().is_continuous():
            raise InternalCheckError("solution must be C^1")


def solve_1d(
    f: PiecewisePolynomial,
    deg_s: int,
    anchor: tuple[RationalLike, RationalLike, RationalLike],
) -> Solution1D:
    """phi = second antiderivative of f/deg_s, pinned at the anchor.

    The anchor fixes the affine ambiguity: phi(anchor_x) and phi'(anchor_x)
    are prescribed, matching the fact that solutions are unique up to the
    addition of a linear function.
    """
    if not isinstance(deg_s, int) or deg_s < 1:
        raise PreconditionError("deg_s must be a positive integer")
    ax, aval, aslope = (rat(anchor[0]), rat(anchor[1]), rat(anchor[2]))
    lo, hi = f.interval
    if ax < lo or ax > hi:
        raise PreconditionError(f"anchor point {ax} outside [{lo}, {hi}]")
    if not f.nonnegative():
        raise NegativeDensityError("density is negative somewhere; no convex solution")
    g = f.scaled(Fraction(1, deg_s))
    phi1 = g.antiderivative()  # phi' up to a constant
    phi1 = phi1 + constant_offset_like(phi1, aslope - phi1.value(ax))
    phi = phi1.antiderivative()
    phi = phi + constant_offset_like(phi, aval - phi.value(ax))
    sol = Solution1D(phi, deg_s, (ax, aval, aslope))
    _check_exact(sol, f)
    return sol


def constant_offset_like(p: PiecewisePolynomial, c: Fraction) -> PiecewisePolynomial:
    return PiecewisePolynomial(p.breakpoints, tuple((c,) for _ in p.pieces))


def _check_exact(sol: Solution1D, f: PiecewisePolynomial) -> None:
    """Coefficient-level identity deg_s * phi'' == f on each interval."""
    second = sol.phi.derivative().derivative().scaled(sol.deg_s)
    if second.breakpoints != f.breakpoints or any(
        a != b for a, b in zip(second.pieces, f.pieces)
    ):
        raise InternalCheckError("deg_s * phi'' != f at the coefficient level")


# ---------------------------------------------------------------------------
# regularity verification


@dataclass(frozen=True)
class BreakpointReport:
    location: Fraction
    density_order: int | None  # None = the density is smooth here (C^inf)
    solution_order: int | None
    satisfies_gain: bool  # solution_order >= density_order + 2


@dataclass(frozen=True)
class RegularityReport:
    breakpoints: tuple[BreakpointReport, ...]
    probe_ok: bool
    probe_details: tuple[tuple[Fraction, Fraction, Fraction], ...]  # (x, lhs, rhs)

    @property
    def all_ok(self) -> bool:
        return self.probe_ok and all(b.satisfies_gain for b in self.breakpoints)


def _contact_order(left: Coeffs, right: Coeffs, x: Fraction) -> int | None:
    """Largest k with matching one-sided derivatives 0..k; None if identical."""
    if left == right:
        return None
    deg = max(len(left), len(right))
    l, r = left, right
    for k in range(deg + 1):
        if poly_eval(l, x) != poly_eval(r, x):
            return k - 1
        l, r = poly_derive(l), poly_derive(r)
    return None


def _fd_weights(radius: int, delta: Fraction) -> list[Fraction]:
    """Central-stencil weights reproducing the second derivative exactly
    on polynomials of degree <= 2*radius."""
    nodes = list(range(-radius, radius + 1))
    m = len(nodes)
    rows = [[Fraction(i * delta) ** k for i in nodes] for k in range(m)]
    rhs = [Fraction(2) if k == 2 else Fraction(0) for k in range(m)]
    w = solve_square(rows, rhs)
    if w is None:
        raise InternalCheckError("singular finite-difference system")
    return w


def _order_at(pp: PiecewisePolynomial, x: Fraction) -> int | None:
    """Contact order of pp at x; None means smooth (C^inf) there."""
    lo, hi = pp.interval
    if x <= lo or x >= hi:
        return None
    i = pp.piece_index(x)
    if x != pp.breakpoints[i] or i == 0:
        return None
    return _contact_order(pp.pieces[i - 1], pp.pieces[i], x)


def verify_regularity(
    sol: Solution1D | PiecewisePolynomial,
    f: PiecewisePolynomial,
    deg_s: int | None = None,
) -> RegularityReport:
    """Check the two-derivative gain of phi over f at every breakpoint,
    plus a finite-difference probe of deg_s * phi'' against f.

    Accepts either a Solution1D or a bare piecewise polynomial (so that
    deliberately broken candidates can be diagnosed).  Failed checks are
    reported, never raised.
    """
    if isinstance(sol, Solution1D):
        phi = sol.phi
        ds = sol.deg_s
    else:
        phi = sol
        ds = 1 if deg_s is None else deg_s

    locations = sorted(set(phi.breakpoints[1:-1]) | set(f.breakpoints[1:-1]))
    reports = []
    for b in locations:
        fo = _order_at(f, b)
        po = _order_at(phi, b)
        if po is None:
            ok = True
        elif fo is None:
            ok = False
        else:
            ok = po >= fo + 2
        reports.append(BreakpointReport(b, fo, po, ok))

    probe_details = []
    probe_ok = True
    for i, coeffs in enumerate(phi.pieces):
        lo, hi = phi.breakpoints[i], phi.breakpoints[i + 1]
        deg = max(2, len(coeffs) - 1)
        radius = (deg + 1) // 2 + 1
        delta = (hi - lo) / (4 * radius)
        x = (lo + hi) / 2
        w = _fd_weights(radius, delta)
        approx = sum(
            wi * poly_eval(coeffs, x + (j - radius) * delta) for j, wi in enumerate(w)
        ) / delta**2
        lhs = ds * approx
        flo, fhi = f.interval
        if x < flo or x > fhi:
            continue
        rhs = f.value(x)
        probe_details.append((x, lhs, rhs))
        if lhs != rhs:
            probe_ok = False
    return RegularityReport(tuple(reports), probe_ok, tuple(probe_details))


def discrete_ma_1d(phi: "PAConvexFunction") -> "AtomicMeasure":
    """Atomic MA measure of a 1D PA convex function.

    Delegates to the measure engine; the atom at each interior kink carries
    the slope jump there, which is the length of the gradient image.
    """
    if phi.n != 1:
        raise PreconditionError("discrete_ma_1d needs a one-dimensional function")
    return ma_measure(phi)

"""Exact rational scalars, points and affine functionals.

Every quantity in this package is a :class:`fractions.Fraction` (arbitrary
precision integer numerator, positive denominator, always in lowest terms).
No operation anywhere introduces floating point; decimal renderings exist
only as advisory output columns.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rational = Fraction
RationalLike = Union[Fraction, int, str]

# A point (or vector, or slope) is an immutable tuple of rationals.
Point = tuple[Fraction, ...]


def rat(x: RationalLike) -> Fraction:
    """Coerce an int, a Fraction or a "p/q" string to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def rat_str(x: Fraction) -> str:
    """Canonical "p/q" rendering; integers render without the denominator."""
    return str(x)


def point(coords: Iterable[RationalLike]) -> Point:
    return tuple(rat(c) for c in coords)


def check_dim(p: Point, n: int) -> None:
    if len(p) != n:
        raise ValueError(f"point {p} has dimension {len(p)}, expected {n}")


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise ValueError("dimension mismatch in scalar product")
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def vsub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def vadd(a: Point, b: Point) -> Point:
    return tuple(x + y for x, y in zip(a, b))


def vscale(t: RationalLike, a: Point) -> Point:
    t = rat(t)
    return tuple(t * x for x in a)


@dataclass(frozen=True)
class AffineFunctional:
    """An affine map x -> <slope, x> + intercept on rational points."""

    slope: Point
    intercept: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "slope", point(self.slope))
        object.__setattr__(self, "intercept", rat(self.intercept))

    @property
    def dim(self) -> int:
        return len(self.slope)

    def __call__(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.slope, x) + self.intercept

    def __add__(self, other: "AffineFunctional") -> "AffineFunctional":
        return AffineFunctional(vadd(self.slope, other.slope), self.intercept + other.intercept)

    def scaled(self, t: RationalLike) -> "AffineFunctional":
        t = rat(t)
        return AffineFunctional(vscale(t, self.slope), t * self.intercept)


def affine(slope: Iterable[RationalLike], intercept: RationalLike) -> AffineFunctional:
    return AffineFunctional(point(slope), rat(intercept))

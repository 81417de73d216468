"""Piecewise-polynomial observables and exact integration against measures."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional

from .errors import NonConstantTail, PointEscapesSpace, RangeViolation
from .measures import GeneratorKind, Measure
from .polynomials import Polynomial, polynomial_image
from .sets import Component, Interval, Point, SetExpr


def _sort_key(comp: Component):
    if isinstance(comp, Point):
        return (comp.value, 1, comp.value)
    lo = comp.lo if comp.lo is not None else Fraction(-(10**30))
    hi = comp.hi if comp.hi is not None else Fraction(10**30)
    return (lo, 0, hi)


@dataclass(frozen=True)
class PiecewisePolyFunction:
    """A function given by one polynomial per piece; pieces partition the space.

    Boundedness on an unbounded space is the caller's contract: integrate()
    rejects non-constant tails when an infinity generator actually probes them.
    """

    space: SetExpr
    pieces: tuple[tuple[Component, Polynomial], ...]

    def __post_init__(self):
        union = SetExpr.empty()
        for comp, _ in self.pieces:
            piece_set = SetExpr.from_components([comp])
            if union.intersects(piece_set):
                raise ValueError(f"function pieces overlap at {comp}")
            union = union | piece_set
        if union != self.space:
            raise ValueError("function pieces must partition the space exactly")
        object.__setattr__(
            self, "pieces", tuple(sorted(self.pieces, key=lambda p: _sort_key(p[0])))
        )

    @staticmethod
    def build(space: SetExpr, pieces: Iterable[tuple[Component, Polynomial]]) -> "PiecewisePolyFunction":
        return PiecewisePolyFunction(space, tuple(pieces))

    @staticmethod
    def constant(space: SetExpr, value) -> "PiecewisePolyFunction":
        poly = Polynomial.constant(value)
        return PiecewisePolyFunction(space, tuple((comp, poly) for comp in space.components))

    # -- pointwise and one-sided values --------------------------------------

    def _piece_at_point(self, x: Fraction) -> tuple[Component, Polynomial]:
        for comp, poly in self.pieces:
            if SetExpr.from_components([comp]).contains_point(x):
                return comp, poly
        raise PointEscapesSpace(f"{x} is outside the function's space")

    def value_at(self, x: Fraction) -> Fraction:
        _, poly = self._piece_at_point(x)
        return poly(x)

    def right_limit_at(self, x: Fraction) -> Fraction:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval):
                if (comp.lo is None or comp.lo <= x) and (comp.hi is None or x < comp.hi):
                    return poly(x)
        raise PointEscapesSpace(f"the space has no right neighborhood of {x}")

    def left_limit_at(self, x: Fraction) -> Fraction:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval):
                if (comp.lo is None or comp.lo < x) and (comp.hi is None or x <= comp.hi):
                    return poly(x)
        raise PointEscapesSpace(f"the space has no left neighborhood of {x}")

    def plus_tail_value(self) -> Fraction:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval) and comp.hi is None:
                if not poly.is_constant():
                    raise NonConstantTail(f"non-constant tail {poly} on {comp}")
                return poly(Fraction(0))
        raise PointEscapesSpace("the space is bounded above")

    def minus_tail_value(self) -> Fraction:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval) and comp.lo is None:
                if not poly.is_constant():
                    raise NonConstantTail(f"non-constant tail {poly} on {comp}")
                return poly(Fraction(0))
        raise PointEscapesSpace("the space is bounded below")

    # -- exact range ----------------------------------------------------------

    def image(self) -> SetExpr:
        comps = []
        for comp, poly in self.pieces:
            comps.extend(polynomial_image(poly, comp))
        return SetExpr.from_components(comps)

    def check_range(self, lo, hi) -> None:
        """Exact check that lo <= f <= hi everywhere; raises RangeViolation."""
        bounds = SetExpr.interval(lo, hi, True, True)
        img = self.image()
        if not img.is_subset(bounds):
            raise RangeViolation(f"function range {img} leaves [{lo}, {hi}]")

    def __str__(self) -> str:
        return "; ".join(f"{comp}: {poly}" for comp, poly in self.pieces)


def integrate(f: PiecewisePolyFunction, mu: Measure) -> Fraction:
    """Exact integral of f against the measure.

    Atoms read point values, germs read one-sided limits, infinity masses read
    constant tail values (NonConstantTail otherwise).
    """
    total = Fraction(0)
    for gen, coeff in mu.terms:
        kind = gen.kind
        if kind is GeneratorKind.ATOM:
            value = f.value_at(gen.location)
        elif kind is GeneratorKind.RIGHT_LIMIT:
            value = f.right_limit_at(gen.location)
        elif kind is GeneratorKind.LEFT_LIMIT:
            value = f.left_limit_at(gen.location)
        elif kind is GeneratorKind.PLUS_INFINITY:
            value = f.plus_tail_value()
        else:
            value = f.minus_tail_value()
        total += coeff * value
    return total

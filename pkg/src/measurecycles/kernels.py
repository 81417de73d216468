"""Markov transition kernels and their action on measures and observables.

Two kernel variants share one interface:

* ``DeterministicKernel``: a piecewise-polynomial self-map of the phase
  space.  Pieces partition the space; each piece polynomial's exact image must
  stay inside the space (so every point genuinely transitions).
* ``StochasticKernel``: a finite chain, rational states with a row-stochastic
  rational matrix.

``push_measure`` is the pushforward on measures, ``pull_function`` the
composition action on observables; ``integrate(pull_function(f), mu) ==
integrate(f, push_measure(mu))`` holds exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .errors import (
    AmbiguousPiece,
    GermOutsideSpace,
    IrrationalBreakpointPreimage,
    NonAtomicGenerator,
    PointEscapesSpace,
)
from .functions import PiecewisePolyFunction, _sort_key
from .measures import Generator, GeneratorKind, Measure
from .polynomials import (
    Polynomial,
    _first_nonzero_derivative,
    irrational_root_count_open,
    polynomial_image,
    rational_roots,
    rational_roots_in,
)
from .sets import Component, Interval, Point, SetExpr


class KernelValidationError(ValueError):
    """Construction-time kernel problem, tagged with a diagnostic code."""

    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(message)


@dataclass(frozen=True)
class DeterministicKernel:
    space: SetExpr
    pieces: tuple[tuple[Component, Polynomial], ...]

    def __post_init__(self):
        object.__setattr__(
            self, "pieces", tuple(sorted(self.pieces, key=lambda p: _sort_key(p[0])))
        )
        union = SetExpr.empty()
        for comp, _ in self.pieces:
            piece_set = SetExpr.from_components([comp])
            if union.intersects(piece_set):
                raise KernelValidationError("PieceOverlap", f"kernel pieces overlap at {comp}")
            union = union | piece_set
        if union != self.space:
            raise KernelValidationError(
                "PieceGap", "kernel pieces must partition the phase space exactly"
            )
        for comp, poly in self.pieces:
            image = SetExpr.from_components(polynomial_image(poly, comp))
            if not image.is_subset(self.space):
                raise KernelValidationError(
                    "ImageOutsideSpace",
                    f"piece {comp} maps onto {image}, which leaves the space",
                )

    @property
    def is_deterministic(self) -> bool:
        return True

    # -- piece lookup ---------------------------------------------------------

    def piece_at_point(self, x: Fraction) -> tuple[Component, Polynomial]:
        for comp, poly in self.pieces:
            if SetExpr.from_components([comp]).contains_point(x):
                return comp, poly
        raise PointEscapesSpace(f"{x} is not in the phase space")

    def piece_right_of(self, x: Fraction) -> tuple[Component, Polynomial]:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval):
                if (comp.lo is None or comp.lo <= x) and (comp.hi is None or x < comp.hi):
                    return comp, poly
        raise AmbiguousPiece(f"no piece contains a right neighborhood of {x}")

    def piece_left_of(self, x: Fraction) -> tuple[Component, Polynomial]:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval):
                if (comp.lo is None or comp.lo < x) and (comp.hi is None or x <= comp.hi):
                    return comp, poly
        raise AmbiguousPiece(f"no piece contains a left neighborhood of {x}")

    def _piece_plus_tail(self) -> tuple[Component, Polynomial]:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval) and comp.hi is None:
                return comp, poly
        raise AmbiguousPiece("the phase space is bounded above")

    def _piece_minus_tail(self) -> tuple[Component, Polynomial]:
        for comp, poly in self.pieces:
            if isinstance(comp, Interval) and comp.lo is None:
                return comp, poly
        raise AmbiguousPiece("the phase space is bounded below")

    # -- transitions ------------------------------------------------------------

    def map_point(self, x: Fraction) -> Fraction:
        _, poly = self.piece_at_point(x)
        y = poly(x)
        if not self.space.contains_point(y):
            raise PointEscapesSpace(f"{x} maps to {y}, which is outside the space")
        return y

    def transition_prob(self, x: Fraction, E: SetExpr) -> Fraction:
        return Fraction(1) if E.contains_point(self.map_point(x)) else Fraction(0)

    def _germ(self, side: GeneratorKind, location: Fraction) -> Measure:
        if side is GeneratorKind.RIGHT_LIMIT:
            if not self.space.contains_right_neighborhood(location):
                raise GermOutsideSpace(f"no right neighborhood of {location} in the space")
            return Measure.right_germ(location)
        if not self.space.contains_left_neighborhood(location):
            raise GermOutsideSpace(f"no left neighborhood of {location} in the space")
        return Measure.left_germ(location)

    def _push_finite_germ(self, gen: Generator) -> Measure:
        x = gen.location
        from_right = gen.kind is GeneratorKind.RIGHT_LIMIT
        _, poly = self.piece_right_of(x) if from_right else self.piece_left_of(x)
        limit = poly(x)
        if poly.is_constant():
            return Measure.dirac(limit)
        order, value = _first_nonzero_derivative(poly, x)
        # Mass approaches from t = x + s (right germ) or t = x - s (left germ),
        # s -> 0+; the image sits on the side of poly(x) given by the sign of
        # the leading Taylor term.
        effective = value if from_right or order % 2 == 0 else -value
        side = GeneratorKind.RIGHT_LIMIT if effective > 0 else GeneratorKind.LEFT_LIMIT
        return self._germ(side, limit)

    def _push_infinity(self, gen: Generator) -> Measure:
        at_plus = gen.kind is GeneratorKind.PLUS_INFINITY
        _, poly = self._piece_plus_tail() if at_plus else self._piece_minus_tail()
        if poly.is_constant():
            return Measure.dirac(poly(Fraction(0)))
        lead_sign = 1 if poly.leading() > 0 else -1
        if not at_plus and poly.degree() % 2 == 1:
            lead_sign = -lead_sign
        if lead_sign > 0:
            if not self.space.contains_plus_tail():
                raise GermOutsideSpace("the image escapes to +infinity outside the space")
            return Measure.at_plus_infinity()
        if not self.space.contains_minus_tail():
            raise GermOutsideSpace("the image escapes to -infinity outside the space")
        return Measure.at_minus_infinity()

    def push_generator(self, gen: Generator) -> Measure:
        kind = gen.kind
        if kind is GeneratorKind.ATOM:
            return Measure.dirac(self.map_point(gen.location))
        if kind in (GeneratorKind.RIGHT_LIMIT, GeneratorKind.LEFT_LIMIT):
            return self._push_finite_germ(gen)
        return self._push_infinity(gen)

    def push_measure(self, mu: Measure) -> Measure:
        total = Measure.zero()
        for gen, coeff in mu.terms:
            total = total + coeff * self.push_generator(gen)
        return total

    # -- action on observables -----------------------------------------------------

    def _compose_on_piece(self, comp: Component, poly: Polynomial, f: PiecewisePolyFunction):
        if isinstance(comp, Point):
            yield comp, Polynomial.constant(f.value_at(poly(comp.value)))
            return
        breakpoints = sorted(
            {v for fcomp, _ in f.pieces for v in _component_cut_values(fcomp)}
        )
        cuts: set[Fraction] = set()
        for b in breakpoints:
            shifted = poly - Polynomial.constant(b)
            if shifted.is_zero():
                continue  # poly identically b: no crossing to cut at
            if irrational_root_count_open(shifted, comp.lo, comp.hi) > 0:
                raise IrrationalBreakpointPreimage(
                    f"breakpoint {b} has an irrational preimage inside {comp}"
                )
            for r in rational_roots(shifted):
                if (comp.lo is None or r > comp.lo) and (comp.hi is None or r < comp.hi):
                    cuts.add(r)
        ordered = sorted(cuts)
        markers: list[Optional[Fraction]] = [comp.lo] + ordered + [comp.hi]
        if comp.lo is not None and comp.lo_closed:
            yield Point(comp.lo), Polynomial.constant(f.value_at(poly(comp.lo)))
        if comp.hi is not None and comp.hi_closed:
            yield Point(comp.hi), Polynomial.constant(f.value_at(poly(comp.hi)))
        for c in ordered:
            yield Point(c), Polynomial.constant(f.value_at(poly(c)))
        for u, v in zip(markers, markers[1:]):
            probe = _interior_probe(u, v)
            target = poly(probe)
            fpoly = _function_piece_at(f, target)
            yield Interval(u, v), fpoly.compose(poly)

    def pull_function(self, f: PiecewisePolyFunction) -> PiecewisePolyFunction:
        pieces = []
        for comp, poly in self.pieces:
            pieces.extend(self._compose_on_piece(comp, poly, f))
        return PiecewisePolyFunction(self.space, tuple(pieces))


def _component_cut_values(comp: Component):
    if isinstance(comp, Point):
        yield comp.value
    else:
        if comp.lo is not None:
            yield comp.lo
        if comp.hi is not None:
            yield comp.hi


def _interior_probe(lo: Optional[Fraction], hi: Optional[Fraction]) -> Fraction:
    if lo is None and hi is None:
        return Fraction(0)
    if lo is None:
        return hi - 1
    if hi is None:
        return lo + 1
    return (lo + hi) / 2


def _function_piece_at(f: PiecewisePolyFunction, x: Fraction) -> Polynomial:
    _, poly = f._piece_at_point(x)
    return poly


@dataclass(frozen=True)
class StochasticKernel:
    states: tuple[Fraction, ...]
    matrix: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not self.states:
            raise KernelValidationError("NoStates", "a finite chain needs at least one state")
        if len(set(self.states)) != len(self.states):
            raise KernelValidationError("DuplicateState", "states must be pairwise distinct")
        if len(self.matrix) != len(self.states):
            raise KernelValidationError(
                "MatrixShape", "the matrix needs one row per state"
            )
        for i, row in enumerate(self.matrix):
            if len(row) != len(self.states):
                raise KernelValidationError(
                    "MatrixShape", f"row {i} needs one entry per state"
                )
            if any(p < 0 or p > 1 for p in row):
                raise KernelValidationError(
                    "RowNotStochastic", f"row {i} has entries outside [0, 1]"
                )
            total = sum(row, Fraction(0))
            if total != 1:
                raise KernelValidationError(
                    "RowNotStochastic", f"row {i} sums to {total}, not 1"
                )

    @property
    def is_deterministic(self) -> bool:
        return False

    @property
    def space(self) -> SetExpr:
        return SetExpr.from_components(Point(s) for s in self.states)

    def state_index(self, x: Fraction) -> int:
        try:
            return self.states.index(x)
        except ValueError:
            raise PointEscapesSpace(f"{x} is not a state") from None

    def transition_prob(self, x: Fraction, E: SetExpr) -> Fraction:
        row = self.matrix[self.state_index(x)]
        return sum(
            (p for s, p in zip(self.states, row) if E.contains_point(s)), Fraction(0)
        )

    def push_generator(self, gen: Generator) -> Measure:
        if gen.kind is not GeneratorKind.ATOM:
            raise NonAtomicGenerator(
                f"finite chains act on atoms only, got {gen.kind.value}"
            )
        row = self.matrix[self.state_index(gen.location)]
        return Measure.from_terms(
            (Generator(GeneratorKind.ATOM, s), p)
            for s, p in zip(self.states, row)
            if p != 0
        )

    def push_measure(self, mu: Measure) -> Measure:
        total = Measure.zero()
        for gen, coeff in mu.terms:
            total = total + coeff * self.push_generator(gen)
        return total

    def pull_function(self, f: PiecewisePolyFunction) -> PiecewisePolyFunction:
        values = {s: f.value_at(s) for s in self.states}
        pieces = []
        for s, row in zip(self.states, self.matrix):
            out = sum((p * values[t] for t, p in zip(self.states, row)), Fraction(0))
            pieces.append((Point(s), Polynomial.constant(out)))
        return PiecewisePolyFunction(self.space, tuple(pieces))


Kernel = Union[DeterministicKernel, StochasticKernel]

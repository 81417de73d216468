"""Exact sets of reals: finite unions of rational intervals and points.

`SetExpr` is the algebra the measures are evaluated on.  Every set is kept in a
canonical form (pairwise disjoint, non-adjacent components sorted left to
right) so equality, hashing and serialization are structural.  Endpoints are
rational; ``None`` stands for an infinite endpoint (always open).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Optional, Union

from .rationals import format_rational, parse_rational


@dataclass(frozen=True)
class Point:
    value: Fraction


@dataclass(frozen=True)
class Interval:
    lo: Optional[Fraction]  # None = -infinity
    hi: Optional[Fraction]  # None = +infinity
    lo_closed: bool = False
    hi_closed: bool = False

    def __post_init__(self):
        if self.lo is None and self.lo_closed:
            raise ValueError("an infinite endpoint cannot be closed")
        if self.hi is None and self.hi_closed:
            raise ValueError("an infinite endpoint cannot be closed")
        if self.lo is not None and self.hi is not None and self.lo >= self.hi:
            raise ValueError("interval needs lo < hi; use Point for singletons")


Component = Union[Point, Interval]


def _component_contains_point(comp: Component, x: Fraction) -> bool:
    if isinstance(comp, Point):
        return comp.value == x
    if comp.lo is not None and (x < comp.lo or (x == comp.lo and not comp.lo_closed)):
        return False
    if comp.hi is not None and (x > comp.hi or (x == comp.hi and not comp.hi_closed)):
        return False
    return True


def _component_contains_open(comp: Component, lo: Optional[Fraction], hi: Optional[Fraction]) -> bool:
    """Whole open interval (lo, hi) inside comp; None means the infinite end."""
    if isinstance(comp, Point):
        return False
    if comp.lo is not None and (lo is None or lo < comp.lo):
        return False
    if comp.hi is not None and (hi is None or hi > comp.hi):
        return False
    return True


def _component_cuts(comp: Component) -> Iterator[Fraction]:
    if isinstance(comp, Point):
        yield comp.value
    else:
        if comp.lo is not None:
            yield comp.lo
        if comp.hi is not None:
            yield comp.hi


def _elementary_pieces(cuts: list[Fraction]):
    """Decompose the line at the cut values.

    Yields (kind, payload): kind "gap" with (lo, hi) open (None = infinite) or
    kind "point" with the cut value, in left-to-right order.
    """
    prev: Optional[Fraction] = None
    for c in cuts:
        yield "gap", (prev, c)
        yield "point", c
        prev = c
    yield "gap", (prev, None)


def _piece_in_components(kind, payload, comps: tuple[Component, ...]) -> bool:
    if kind == "point":
        return any(_component_contains_point(c, payload) for c in comps)
    lo, hi = payload
    return any(_component_contains_open(c, lo, hi) for c in comps)


def _assemble(cuts: list[Fraction], flags: list[bool]) -> tuple[Component, ...]:
    """Rebuild canonical components from elementary-piece membership flags."""
    pieces = list(_elementary_pieces(cuts))
    comps: list[Component] = []
    i = 0
    n = len(pieces)
    while i < n:
        if not flags[i]:
            i += 1
            continue
        j = i
        while j + 1 < n and flags[j + 1]:
            j += 1
        start_kind, start_payload = pieces[i]
        end_kind, end_payload = pieces[j]
        if i == j and start_kind == "point":
            comps.append(Point(start_payload))
        else:
            if start_kind == "point":
                lo, lo_closed = start_payload, True
            else:
                lo, lo_closed = start_payload[0], False
            if end_kind == "point":
                hi, hi_closed = end_payload, True
            else:
                hi, hi_closed = end_payload[1], False
            comps.append(Interval(lo, hi, lo_closed, hi_closed))
        i = j + 1
    return tuple(comps)


@dataclass(frozen=True)
class SetExpr:
    components: tuple[Component, ...] = ()

    # -- construction ------------------------------------------------------

    @staticmethod
    def empty() -> "SetExpr":
        return SetExpr(())

    @staticmethod
    def line() -> "SetExpr":
        return SetExpr((Interval(None, None),))

    @staticmethod
    def point(value) -> "SetExpr":
        return SetExpr((Point(parse_rational(value)),))

    @staticmethod
    def interval(lo, hi, lo_closed: bool = False, hi_closed: bool = False) -> "SetExpr":
        lo = None if lo is None else parse_rational(lo)
        hi = None if hi is None else parse_rational(hi)
        return SetExpr((Interval(lo, hi, lo_closed, hi_closed),))

    @staticmethod
    def from_components(components: Iterable[Component]) -> "SetExpr":
        """Union of arbitrary (possibly overlapping) components, canonicalized."""
        comps = tuple(components)
        cuts = sorted({c for comp in comps for c in _component_cuts(comp)})
        flags = [_piece_in_components(k, p, comps) for k, p in _elementary_pieces(cuts)]
        return SetExpr(_assemble(cuts, flags))

    # -- boolean algebra ---------------------------------------------------

    def _combine(self, other: "SetExpr", op) -> "SetExpr":
        cuts = sorted(
            {c for comp in self.components for c in _component_cuts(comp)}
            | {c for comp in other.components for c in _component_cuts(comp)}
        )
        flags = [
            op(
                _piece_in_components(k, p, self.components),
                _piece_in_components(k, p, other.components),
            )
            for k, p in _elementary_pieces(cuts)
        ]
        return SetExpr(_assemble(cuts, flags))

    def __or__(self, other: "SetExpr") -> "SetExpr":
        return self._combine(other, lambda a, b: a or b)

    def __and__(self, other: "SetExpr") -> "SetExpr":
        return self._combine(other, lambda a, b: a and b)

    def __sub__(self, other: "SetExpr") -> "SetExpr":
        return self._combine(other, lambda a, b: a and not b)

    def complement(self, universe: Optional["SetExpr"] = None) -> "SetExpr":
        if universe is None:
            universe = SetExpr.line()
        return universe - self

    # -- predicates --------------------------------------------------------

    def is_empty(self) -> bool:
        return not self.components

    def contains_point(self, x: Fraction) -> bool:
        return any(_component_contains_point(c, x) for c in self.components)

    def contains_right_neighborhood(self, x: Fraction) -> bool:
        """Some (x, x+eps) lies inside the set."""
        for c in self.components:
            if isinstance(c, Interval):
                if (c.lo is None or c.lo <= x) and (c.hi is None or x < c.hi):
                    return True
        return False

    def contains_left_neighborhood(self, x: Fraction) -> bool:
        """Some (x-eps, x) lies inside the set."""
        for c in self.components:
            if isinstance(c, Interval):
                if (c.lo is None or c.lo < x) and (c.hi is None or x <= c.hi):
                    return True
        return False

    def contains_plus_tail(self) -> bool:
        return any(isinstance(c, Interval) and c.hi is None for c in self.components)

    def contains_minus_tail(self) -> bool:
        return any(isinstance(c, Interval) and c.lo is None for c in self.components)

    def is_subset(self, other: "SetExpr") -> bool:
        return (self - other).is_empty()

    def intersects(self, other: "SetExpr") -> bool:
        return not (self & other).is_empty()

    # -- derived sets ------------------------------------------------------

    def closure(self) -> "SetExpr":
        closed = []
        for c in self.components:
            if isinstance(c, Point):
                closed.append(c)
            else:
                closed.append(
                    Interval(c.lo, c.hi, c.lo is not None, c.hi is not None)
                )
        return SetExpr.from_components(closed)

    def finite_boundary_values(self) -> list[Fraction]:
        """Finite endpoints and point locations, sorted and deduplicated."""
        return sorted({c for comp in self.components for c in _component_cuts(comp)})

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> list:
        out = []
        for c in self.components:
            if isinstance(c, Point):
                out.append({"point": format_rational(c.value)})
            else:
                out.append(
                    {
                        "lo": "-inf" if c.lo is None else format_rational(c.lo),
                        "hi": "+inf" if c.hi is None else format_rational(c.hi),
                        "lo_closed": c.lo_closed,
                        "hi_closed": c.hi_closed,
                    }
                )
        return out

    @staticmethod
    def component_from_json_obj(obj) -> Component:
        if not isinstance(obj, dict):
            raise ValueError(f"set component must be an object, got {obj!r}")
        if "point" in obj:
            return Point(parse_rational(obj["point"]))
        if "lo" not in obj or "hi" not in obj:
            raise ValueError(f"set component needs 'point' or 'lo'/'hi': {obj!r}")
        lo_raw, hi_raw = obj["lo"], obj["hi"]
        lo = None if lo_raw in (None, "-inf") else parse_rational(lo_raw)
        hi = None if hi_raw in (None, "inf", "+inf") else parse_rational(hi_raw)
        return Interval(lo, hi, bool(obj.get("lo_closed", False)), bool(obj.get("hi_closed", False)))

    @staticmethod
    def from_json_obj(obj) -> "SetExpr":
        if not isinstance(obj, list):
            raise ValueError(f"set must be a list of components, got {obj!r}")
        return SetExpr.from_components(SetExpr.component_from_json_obj(item) for item in obj)

    def __str__(self) -> str:
        if not self.components:
            return "{}"
        parts = []
        for c in self.components:
            if isinstance(c, Point):
                parts.append("{%s}" % format_rational(c.value))
            else:
                lo = "-inf" if c.lo is None else format_rational(c.lo)
                hi = "+inf" if c.hi is None else format_rational(c.hi)
                parts.append(
                    ("[" if c.lo_closed else "(") + lo + "," + hi + ("]" if c.hi_closed else ")")
                )
        return " u ".join(parts)

"""Shared randomized generators for the test suite.

Everything takes an explicit random.Random so tests stay reproducible.
"""

from fractions import Fraction

from measurecycles import (
    Cycle,
    DeterministicKernel,
    Generator,
    GeneratorKind,
    Interval,
    Measure,
    PiecewisePolyFunction,
    Point,
    Polynomial,
    SetExpr,
    StateCycle,
    StochasticKernel,
)


def random_stochastic_kernel(rng, max_states=6) -> StochasticKernel:
    """Mix of deterministic rows and dense rows with small denominators."""
    n = rng.randint(1, max_states)
    states = tuple(Fraction(i) for i in range(1, n + 1))
    rows = []
    for _ in range(n):
        if rng.random() < 0.5:
            j = rng.randrange(n)
            rows.append(tuple(Fraction(1 if t == j else 0) for t in range(n)))
        else:
            weights = [rng.randint(0, 4) for _ in range(n)]
            if sum(weights) == 0:
                weights[rng.randrange(n)] = 1
            total = sum(weights)
            rows.append(tuple(Fraction(w, total) for w in weights))
    return StochasticKernel(states, tuple(rows))


_SLOPES = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(1)]
_BENDS = [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), Fraction(1)]


def conveyor_kernel(rng, max_pieces=6) -> DeterministicKernel:
    """Pieces [i, i+1) on [0, n), piece i mapping onto the start of piece i+1.

    Each piece is affine with slope in (0, 1] or an upward parabola anchored
    at the piece's left endpoint, so base points permute cyclically and right
    germs at base points follow them.
    """
    n = rng.randint(1, max_pieces)
    pieces = []
    for i in range(n):
        nxt = Fraction((i + 1) % n)
        if rng.random() < 0.5:
            r = rng.choice(_SLOPES)
            poly = Polynomial.of(nxt - r * i, r)
        else:
            s = rng.choice(_BENDS)
            poly = Polynomial.of(nxt + s * i * i, -2 * s * i, s)
        pieces.append((Interval(Fraction(i), Fraction(i + 1), True, False), poly))
    space = SetExpr.interval(0, n, True, False)
    return DeterministicKernel(space, tuple(pieces))


def conveyor_mixed_cycle(rng, kernel: DeterministicKernel) -> Cycle:
    """Disjoint mixed cycle: atom plus right germ at each piece base point."""
    n = len(kernel.pieces)
    a = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    c = Fraction(rng.randint(1, 5), rng.randint(1, 5))
    coords = tuple(
        Measure.dirac(i) * a + Measure.right_germ(i) * c for i in range(n)
    )
    return Cycle(kernel, coords)


_GRID = [Fraction(k, 8) for k in range(9)]


def random_unit_band_function(rng) -> PiecewisePolyFunction:
    """Piecewise quadratic f on [0, 1] with 0 <= f <= 1 exactly.

    Pieces are constants, the constant 1, or cap parabolas 1 - a(x - r)^2
    whose vertex r is rational and whose height is clamped to keep f >= 0.
    """
    cuts = sorted(rng.sample([Fraction(k, 8) for k in range(1, 8)], rng.randint(0, 2)))
    bounds = [Fraction(0)] + cuts + [Fraction(1)]
    pieces = []
    for j in range(len(bounds) - 1):
        lo, hi = bounds[j], bounds[j + 1]
        comp = Interval(lo, hi, j == 0, True)
        roll = rng.random()
        if roll < 0.35:
            poly = Polynomial.constant(
                rng.choice([Fraction(0), Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])
            )
        elif roll < 0.6:
            poly = Polynomial.constant(1)
        else:
            r = lo + (hi - lo) * Fraction(rng.randint(0, 4), 4)
            cap = max((lo - r) ** 2, (hi - r) ** 2)
            a = Fraction(rng.randint(1, 4), 4) / cap
            poly = Polynomial.of(1 - a * r * r, 2 * a * r, -a)
        pieces.append((comp, poly))
    return PiecewisePolyFunction.build(SetExpr.interval(0, 1, True, True), pieces)


def unit_level_points(f: PiecewisePolyFunction) -> list[Fraction]:
    """Rational points where f equals 1 (enough of them to aim atoms at)."""
    hits = []
    for comp, poly in f.pieces:
        if poly == Polynomial.constant(1):
            if isinstance(comp, Point):
                hits.append(comp.value)
            else:
                lo, hi = comp.lo, comp.hi
                if comp.lo_closed:
                    hits.append(lo)
                if comp.hi_closed:
                    hits.append(hi)
                hits.append((lo + hi) / 2)
        elif poly.degree() == 2:
            # vertex of 1 - a(x - r)^2
            r = -poly.coeffs[1] / (2 * poly.coeffs[2])
            if poly(r) == 1 and f.space.contains_point(r):
                hits.append(r)
    return sorted(set(hits))


def random_atomic_probability(rng, points) -> Measure:
    chosen = rng.sample(points, rng.randint(1, min(5, len(points))))
    weights = [rng.randint(1, 4) for _ in chosen]
    total = sum(weights)
    return Measure.from_terms(
        (Generator(GeneratorKind.ATOM, p), Fraction(w, total))
        for p, w in zip(chosen, weights)
    )


def random_periodic_block_chain(rng) -> tuple[StochasticKernel, StateCycle]:
    """Finite chain built around a singular state cycle of subclasses.

    Every state in block r sends full-support mass to block r+1, so the
    blocks are exactly the cyclic subclasses of one recurrent class; a few
    transient states may feed into the loop.
    """
    m = rng.randint(1, 4)
    sizes = [rng.randint(1, 2) for _ in range(m)]
    total = sum(sizes)
    extra = rng.randint(0, 2)
    n = total + extra
    states = tuple(Fraction(i) for i in range(1, n + 1))
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(list(range(start, start + size)))
        start += size
    rows = [[Fraction(0)] * n for _ in range(n)]
    for r, block in enumerate(blocks):
        nxt = blocks[(r + 1) % m]
        for i in block:
            weights = [rng.randint(1, 4) for _ in nxt]
            s = sum(weights)
            for j, w in zip(nxt, weights):
                rows[i][j] = Fraction(w, s)
    for t in range(total, n):
        targets = sorted(rng.sample(range(total), rng.randint(1, total)))
        weights = [rng.randint(1, 4) for _ in targets]
        s = sum(weights)
        for j, w in zip(targets, weights):
            rows[t][j] = Fraction(w, s)
    kernel = StochasticKernel(states, tuple(tuple(row) for row in rows))
    sets = tuple(
        SetExpr.from_components(Point(states[i]) for i in block) for block in blocks
    )
    return kernel, StateCycle(sets)


def random_atomic_measure(rng, max_atoms=6, signed=False) -> Measure:
    count = rng.randint(1, max_atoms)
    points = rng.sample([Fraction(k, 2) for k in range(-6, 7)], count)
    terms = []
    for p in points:
        c = Fraction(rng.randint(1, 8), rng.randint(1, 4))
        if signed and rng.random() < 0.5:
            c = -c
        terms.append((Generator(GeneratorKind.ATOM, p), c))
    return Measure.from_terms(terms)

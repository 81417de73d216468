import random
from fractions import Fraction

import pytest

from measurecycles import (
    DeterministicKernel,
    GeneratorKind,
    Interval,
    KernelValidationError,
    Measure,
    PiecewisePolyFunction,
    Polynomial,
    SetExpr,
    StochasticKernel,
    integrate,
    load_bundled,
)
from measurecycles.errors import (
    AmbiguousPiece,
    MeasureChainError,
    NonAtomicGenerator,
    PointEscapesSpace,
)
from support import conveyor_kernel, random_atomic_measure, random_stochastic_kernel

F = Fraction


def _code(excinfo):
    return excinfo.value.code


# -- construction-time validation ---------------------------------------------


def test_piece_gap_detected():
    space = SetExpr.interval(0, 2, True, False)
    with pytest.raises(KernelValidationError) as e:
        DeterministicKernel(
            space, ((Interval(F(0), F(1), True, False), Polynomial.of(0, 1)),)
        )
    assert _code(e) == "PieceGap"


def test_piece_overlap_detected():
    space = SetExpr.interval(0, 2, True, False)
    with pytest.raises(KernelValidationError) as e:
        DeterministicKernel(
            space,
            (
                (Interval(F(0), F(3, 2), True, False), Polynomial.of(0, 1)),
                (Interval(F(1), F(2), True, False), Polynomial.of(0, 1)),
            ),
        )
    assert _code(e) == "PieceOverlap"


def test_image_outside_space_detected():
    space = SetExpr.interval(0, 2, True, False)
    with pytest.raises(KernelValidationError) as e:
        DeterministicKernel(
            space,
            (
                (Interval(F(0), F(1), True, False), Polynomial.of(2, 1)),  # x + 2
                (Interval(F(1), F(2), True, False), Polynomial.of(0, 1)),
            ),
        )
    assert _code(e) == "ImageOutsideSpace"


def test_attained_boundary_outside_space_detected():
    # x on [0, 1) u (1, 2): x = 1 is never hit, fine; but 2 - x on the same
    # space attains 1 at x = 1... there is no x = 1, so that passes too.
    # The genuine failure: [0, 1] mapping onto [1, 2] when 2 is not in space.
    space = SetExpr.interval(0, 2, True, False)
    with pytest.raises(KernelValidationError) as e:
        DeterministicKernel(
            space,
            (
                (Interval(F(0), F(1), True, True), Polynomial.of(1, 1)),  # x + 1
                (Interval(F(1), F(2)), Polynomial.of(-1, 1)),  # x - 1
            ),
        )
    assert _code(e) == "ImageOutsideSpace"


def test_stochastic_validation_codes():
    with pytest.raises(KernelValidationError) as e:
        StochasticKernel((F(1), F(2)), ((F(1, 2), F(2, 5)), (F(0), F(1))))
    assert _code(e) == "RowNotStochastic"
    with pytest.raises(KernelValidationError) as e:
        StochasticKernel((F(1), F(2)), ((F(3, 2), F(-1, 2)), (F(0), F(1))))
    assert _code(e) == "RowNotStochastic"
    with pytest.raises(KernelValidationError) as e:
        StochasticKernel((F(1), F(1)), ((F(1), F(0)), (F(0), F(1))))
    assert _code(e) == "DuplicateState"
    with pytest.raises(KernelValidationError) as e:
        StochasticKernel((F(1), F(2)), ((F(1), F(0)),))
    assert _code(e) == "MatrixShape"
    with pytest.raises(KernelValidationError) as e:
        StochasticKernel((), ())
    assert _code(e) == "NoStates"


# -- point dynamics -------------------------------------------------------------


def test_map_point_and_escape():
    k = load_bundled("interval_squares").kernel
    assert k.map_point(F(1, 2)) == F(5, 4)
    assert k.map_point(F(5, 4)) == F(1, 16)
    with pytest.raises(PointEscapesSpace):
        k.map_point(F(1))  # 1 is not in the space
    with pytest.raises(PointEscapesSpace):
        k.map_point(F(7))


def test_transition_prob_deterministic():
    k = load_bundled("interval_squares").kernel
    assert k.transition_prob(F(1, 2), SetExpr.interval(1, 2)) == 1
    assert k.transition_prob(F(1, 2), SetExpr.interval(0, 1)) == 0


# -- germ pushforward rules ------------------------------------------------------


def test_bundled_germ_swaps():
    k = load_bundled("interval_squares").kernel
    assert k.push_measure(Measure.right_germ(F(0))) == Measure.right_germ(F(1))
    assert k.push_measure(Measure.right_germ(F(1))) == Measure.right_germ(F(0))
    assert k.push_measure(Measure.left_germ(F(1))) == Measure.left_germ(F(2))
    assert k.push_measure(Measure.left_germ(F(2))) == Measure.left_germ(F(1))


def test_decreasing_piece_flips_germ_side():
    space = SetExpr.interval(0, 1)
    k = DeterministicKernel(space, ((Interval(F(0), F(1)), Polynomial.of(1, -1)),))
    assert k.push_measure(Measure.right_germ(F(0))) == Measure.left_germ(F(1))
    assert k.push_measure(Measure.left_germ(F(1))) == Measure.right_germ(F(0))


def test_constant_piece_collapses_germ_to_atom():
    space = SetExpr.interval(0, 1)
    k = DeterministicKernel(space, ((Interval(F(0), F(1)), Polynomial.constant(F(1, 2))),))
    assert k.push_measure(Measure.right_germ(F(0))) == Measure.dirac(F(1, 2))
    assert k.push_measure(Measure.left_germ(F(1))) == Measure.dirac(F(1, 2))


def test_germ_with_no_covering_piece_rejected():
    k = load_bundled("interval_squares").kernel
    with pytest.raises(AmbiguousPiece):
        k.push_measure(Measure.left_germ(F(0)))


def test_infinity_pushforward():
    line = SetExpr.line()
    absval = DeterministicKernel(
        line,
        (
            (Interval(None, F(0), False, True), Polynomial.of(0, -1)),
            (Interval(F(0), None), Polynomial.of(0, 1)),
        ),
    )
    assert absval.push_measure(Measure.at_minus_infinity()) == Measure.at_plus_infinity()
    assert absval.push_measure(Measure.at_plus_infinity()) == Measure.at_plus_infinity()

    flat_left = DeterministicKernel(
        line,
        (
            (Interval(None, F(0), False, True), Polynomial.constant(F(0))),
            (Interval(F(0), None), Polynomial.of(0, 1)),
        ),
    )
    assert flat_left.push_measure(Measure.at_minus_infinity()) == Measure.dirac(F(0))


def _germ_side_oracle(poly, x, from_right, pushed):
    """Sample the one-sided orbit: values must approach the claimed location
    from the claimed side, and strictly monotonically in the sampled range."""
    (gen, coeff), = pushed.terms
    assert coeff == 1
    deltas = [F(1, 2**k) for k in (10, 14, 18)]
    values = [poly(x + d if from_right else x - d) for d in deltas]
    if gen.kind is GeneratorKind.ATOM:
        assert all(v == gen.location for v in values)
        return
    gaps = [v - gen.location for v in values]
    if gen.kind is GeneratorKind.RIGHT_LIMIT:
        assert all(g > 0 for g in gaps)
    else:
        assert gen.kind is GeneratorKind.LEFT_LIMIT
        assert all(g < 0 for g in gaps)
    assert abs(gaps[0]) > abs(gaps[1]) > abs(gaps[2])


def test_germ_rule_against_sampling_oracle():
    rng = random.Random(4)
    for _ in range(40):
        k = conveyor_kernel(rng)
        for comp, poly in k.pieces:
            base = comp.lo
            pushed = k.push_measure(Measure.right_germ(base))
            _germ_side_oracle(poly, base, True, pushed)
            top = comp.hi
            pushed = k.push_measure(Measure.left_germ(top))
            _germ_side_oracle(poly, top, False, pushed)


# -- linearity, duality, isometry -------------------------------------------------


def test_push_is_linear():
    k = load_bundled("interval_squares_closed").kernel
    a = Measure.dirac(F(0)) + Measure.right_germ(F(0)) * F(3)
    b = Measure.left_germ(F(2)) * F(1, 2)
    assert k.push_measure(a + b) == k.push_measure(a) + k.push_measure(b)
    assert k.push_measure(a * F(7, 3)) == k.push_measure(a) * F(7, 3)


def _conveyor_measures(rng, k):
    n = len(k.pieces)
    ms = [Measure.dirac(i) for i in range(n)]
    ms += [Measure.right_germ(i) for i in range(n)]
    ms += [Measure.left_germ(i + 1) for i in range(n)]
    ms.append(Measure.dirac(F(1, 3)))
    mix = Measure.zero()
    for m in ms[: 2 * n]:
        mix = mix + m * F(rng.randint(1, 4), rng.randint(1, 4))
    ms.append(mix)
    return ms


def _conveyor_function(rng, k):
    pieces = []
    for comp, _ in k.pieces:
        coeffs = [F(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(rng.randint(1, 3))]
        pieces.append((comp, Polynomial.of(*coeffs)))
    return PiecewisePolyFunction.build(k.space, pieces)


def test_duality_on_random_conveyors():
    rng = random.Random(11)
    for _ in range(30):
        k = conveyor_kernel(rng)
        f = _conveyor_function(rng, k)
        tf = k.pull_function(f)
        for mu in _conveyor_measures(rng, k):
            assert integrate(tf, mu) == integrate(f, k.push_measure(mu))


def test_duality_on_random_finite_chains():
    rng = random.Random(12)
    for _ in range(30):
        k = random_stochastic_kernel(rng)
        f = PiecewisePolyFunction.build(
            k.space,
            [
                (c, Polynomial.constant(F(rng.randint(-4, 4), rng.randint(1, 3))))
                for c in k.space.components
            ],
        )
        tf = k.pull_function(f)
        for s in k.states:
            mu = Measure.dirac(s)
            assert integrate(tf, mu) == integrate(f, k.push_measure(mu))
        mix = Measure.from_terms(
            (Measure.dirac(s).terms[0][0], F(i + 1, 7)) for i, s in enumerate(k.states)
        )
        assert integrate(tf, mix) == integrate(f, k.push_measure(mix))


def test_pull_function_pointwise_oracle():
    rng = random.Random(13)
    for _ in range(20):
        k = conveyor_kernel(rng)
        f = _conveyor_function(rng, k)
        tf = k.pull_function(f)
        for comp, _ in k.pieces:
            for t in [comp.lo, comp.lo + F(1, 4), comp.lo + F(1, 2), comp.hi - F(1, 5)]:
                assert tf.value_at(t) == f.value_at(k.map_point(t))


def test_isometry_on_positive_cone():
    rng = random.Random(14)
    for _ in range(25):
        k = conveyor_kernel(rng)
        for mu in _conveyor_measures(rng, k):
            assert k.push_measure(mu).norm() == mu.norm()
        ks = random_stochastic_kernel(rng)
        mu = random_atomic_measure(rng, max_atoms=len(ks.states))
        mu = Measure.from_terms(
            (Measure.dirac(s).terms[0][0], c)
            for (g, c), s in zip(mu.terms, ks.states)
        )
        assert ks.push_measure(mu).norm() == mu.norm()


def test_split_commutes_with_push_on_germ_preserving_kernels():
    rng = random.Random(15)
    for _ in range(25):
        k = conveyor_kernel(rng)
        for mu in _conveyor_measures(rng, k):
            ca, pfa = mu.split()
            pushed_ca, pushed_pfa = k.push_measure(mu).split()
            assert pushed_ca == k.push_measure(ca)
            assert pushed_pfa == k.push_measure(pfa)


# -- stochastic kernels -----------------------------------------------------------


def test_stochastic_push_and_pull_by_hand():
    k = StochasticKernel(
        (F(1), F(2)),
        ((F(1, 3), F(2, 3)), (F(1), F(0))),
    )
    pushed = k.push_measure(Measure.dirac(F(1)))
    assert pushed == Measure.dirac(F(1)) * F(1, 3) + Measure.dirac(F(2)) * F(2, 3)
    f = PiecewisePolyFunction.build(
        k.space,
        [(c, Polynomial.constant(v)) for c, v in zip(k.space.components, [F(5), F(8)])],
    )
    tf = k.pull_function(f)
    assert tf.value_at(F(1)) == F(1, 3) * 5 + F(2, 3) * 8
    assert tf.value_at(F(2)) == 5


def test_stochastic_rejects_non_atomic_measures():
    k = load_bundled("three_state_swap").kernel
    with pytest.raises(NonAtomicGenerator):
        k.push_measure(Measure.right_germ(F(1)))


def test_transition_prob_stochastic():
    k = load_bundled("three_state_swap").kernel
    assert k.transition_prob(F(2), SetExpr.point(3)) == 1
    assert k.transition_prob(F(2), SetExpr.point(2)) == 0
    assert k.transition_prob(F(1), SetExpr.interval(0, 5)) == 1


def test_push_requires_states_in_space():
    k = load_bundled("three_state_swap").kernel
    with pytest.raises(MeasureChainError):
        k.push_measure(Measure.dirac(F(17)))

"""Unit tests for the exact polynomial / rational function layer."""

from fractions import Fraction

import pytest

from cpvi.errors import (
    DenominatorVanishes,
    ExpressionTooLarge,
    ParseError,
    PoleAtPoint,
    ZeroPolynomial,
)
from cpvi.poly import (
    Gen,
    PHASE_GENS,
    RatFun,
    SparsePoly,
    a0,
    a1,
    a2,
    a3,
    a4,
    equals_zero,
    format_poly,
    format_ratfun,
    parse_poly,
    parse_ratfun,
    reduce_mod_relation,
    relation_poly,
    substitute,
    t,
    term_limit,
    w,
    x,
    y,
    z,
)


class TestAdd:
    def test_cancellation(self):
        assert (x + t) + (-x) == t

    def test_zero_identity(self):
        p = 3 * x * y - t**2
        assert 0 + p == p
        assert p + SparsePoly.zero() == p

    def test_fraction_sum(self):
        assert 1 / x + 1 / y == (x + y) / (x * y)

    def test_same_denominator_shortcut(self):
        f = x / t + y / t
        assert f == (x + y) / t


class TestMul:
    def test_difference_of_squares(self):
        assert (w - 1) * (w + 1) == w**2 - 1

    def test_one_identity(self):
        p = x**2 * y - 7 * z
        assert p * 1 == p
        assert (p / t) * 1 == p / t

    def test_inverse_pair(self):
        assert (x / y) * (y / x) == RatFun.const(1)


class TestDiff:
    def test_poly_partial(self):
        assert (x**2 * y**3).diff(Gen.Y) == 3 * x**2 * y**2

    def test_constant_in_t(self):
        assert SparsePoly.const(Fraction(5, 3)).diff(Gen.T).is_zero

    def test_quotient_rule(self):
        assert (1 / x).diff(Gen.X) == RatFun(-SparsePoly.const(1), x**2)

    def test_denominator_free_shortcut(self):
        f = (x**2 + t) / (t * (1 - t))
        assert f.diff(Gen.X) == (2 * x) / (t * (1 - t))


class TestSubstitute:
    def test_reciprocal(self):
        assert substitute(x**2 + 1, {Gen.X: 1 / y}) == (1 + y**2) / (y**2)

    def test_partial_bindings_leave_rest_alone(self):
        p = x * y + z
        assert substitute(p, {Gen.X: t}) == (t * y + z).as_ratfun()

    def test_simultaneous_not_sequential(self):
        # x and y swap in one step; sequential application would collapse
        got = substitute(x - y, {Gen.X: y.as_ratfun(), Gen.Y: x.as_ratfun()})
        assert got == (y - x).as_ratfun()

    def test_denominator_vanishes(self):
        f = 1 / (x - y)
        with pytest.raises(DenominatorVanishes):
            substitute(f, {Gen.X: y.as_ratfun()})


class TestEqualsZero:
    def test_telescoping(self):
        f = (x**2 - 1) / (x - 1) - (x + 1)
        assert equals_zero(f)

    def test_plain_generator(self):
        assert not equals_zero(a0.as_ratfun())

    def test_relation_not_identically_zero(self):
        assert not equals_zero(relation_poly().as_ratfun())


class TestReduceModRelation:
    def test_annihilates_relation(self):
        assert reduce_mod_relation(relation_poly()).is_zero

    def test_relation_free_input_unchanged(self):
        assert reduce_mod_relation(x * y) == (x * y).as_ratfun()

    def test_direct_square(self):
        expected = (1 - 2 * a1 - 3 * a2 - 2 * a3 - a4) ** 2
        assert reduce_mod_relation(a0**2) == expected.as_ratfun()

    def test_idempotent(self):
        f = (a0 + x) ** 2 / (a0 * t - 1)
        once = reduce_mod_relation(f)
        assert reduce_mod_relation(once) == once


class TestTotalDegree:
    def test_constant(self):
        assert SparsePoly.const(9).total_degree(PHASE_GENS) == 0

    def test_restricted_vars(self):
        assert (x**2 * y**3).total_degree([Gen.X]) == 2

    def test_zero_poly_raises(self):
        with pytest.raises(ZeroPolynomial):
            SparsePoly.zero().total_degree()


class TestEvalExact:
    def test_simple(self):
        f = (x + 1) / (x - 1)
        assert f.eval_exact({Gen.X: 3}) == 2

    def test_identically_zero(self):
        f = (x - x).as_ratfun()
        assert f.eval_exact({Gen.X: Fraction(17, 5)}) == 0

    def test_pole(self):
        with pytest.raises(PoleAtPoint):
            (1 / x).eval_exact({Gen.X: 0})

    def test_missing_binding_rejected(self):
        with pytest.raises(ValueError):
            (x + y).eval({Gen.X: 1})


class TestSerialization:
    def test_poly_round_trip(self):
        p = x**2 * y**3 - Fraction(1, 2) * z * w + 3 * t - a0 * a4
        text = format_poly(p)
        assert parse_poly(text) == p

    def test_ratfun_round_trip(self):
        f = (x**2 - a1) / (t * (1 - t))
        text = format_ratfun(f)
        assert parse_ratfun(text) == f

    def test_deterministic(self):
        p = x + y + z + w + t + a0 + a1 + a2 + a3 + a4
        assert format_poly(p) == format_poly(parse_poly(format_poly(p)))

    def test_zero(self):
        assert format_poly(SparsePoly.zero()) == "0"
        assert parse_poly("0").is_zero

    def test_rational_coefficients(self):
        p = parse_poly("-3/4*x^2*y + 2*t - 1/2")
        assert p == x**2 * y * Fraction(-3, 4) + 2 * t - Fraction(1, 2)

    def test_unknown_name_rejected(self):
        with pytest.raises(ParseError):
            parse_ratfun("x + q")

    def test_trailing_garbage_rejected(self):
        with pytest.raises(ParseError):
            parse_ratfun("x + 1 )")


class TestGuards:
    def test_term_limit(self):
        big = (x + y + z + w + 1) ** 3
        with term_limit(10):
            with pytest.raises(ExpressionTooLarge):
                big * big
        # cap lifted outside the block
        assert isinstance(big * big, SparsePoly)

    def test_zero_denominator(self):
        with pytest.raises(DenominatorVanishes):
            RatFun(x, SparsePoly.zero())

    def test_negative_exponent_power(self):
        assert (x.as_ratfun()) ** (-2) == 1 / (x**2)

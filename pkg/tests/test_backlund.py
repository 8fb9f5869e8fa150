"""Tests for the reflection generators, Coxeter relations and divisors."""

import random
from fractions import Fraction

import pytest

from cpvi.backlund import (
    backlund_component_residual,
    compose,
    coxeter_matrix,
    coxeter_suite,
    divisor_flow_derivative,
    divisor_suite_symbolic,
    exp_formula,
    generator,
    identity_map,
    invariant_divisor,
    random_alpha,
    symmetry_suite,
    verify_backlund,
    verify_coxeter_pair,
    verify_involution,
)
from cpvi.errors import PoleAtPoint
from cpvi.poly import (
    Gen,
    RELATION_WEIGHTS,
    RatFun,
    SparsePoly,
    equals_zero,
    reduce_mod_relation,
    substitute,
    t,
    w,
    x,
    y,
    z,
)
from cpvi.report import FAIL, PASS, PASS_MOD_RELATION

PHASE = (Gen.X, Gen.Y, Gen.Z, Gen.W)


class TestGenerators:
    def test_s0_point_image(self):
        img, beta = generator(0).apply_point((1, 2, 3, 4), Fraction(5), (1, 0, 0, 0, 0))
        assert img == (Fraction(3, 2), 2, 3, 4)
        assert beta == (-1, 1, 0, 0, 0)

    def test_s2_coordinate_images(self):
        m = generator(2)
        f2 = invariant_divisor(2)
        assert m.coords[0] == RatFun.gen(Gen.X) + RatFun(SparsePoly.gen(Gen.A2)) / f2
        assert m.coords[1] == RatFun.gen(Gen.Y)
        assert m.coords[2] == RatFun.gen(Gen.Z) + RatFun(2 * w * SparsePoly.gen(Gen.A2)) / f2
        assert m.coords[3] == RatFun.gen(Gen.W)

    def test_s3_with_zero_parameter_is_identity(self):
        m = generator(3)
        frozen = [substitute(c, {Gen.A3: 0}) for c in m.coords]
        assert frozen == [RatFun.gen(g) for g in PHASE]

    def test_only_s2_touches_time(self):
        assert [generator(i).explicit_t for i in range(5)] == [
            False, False, True, False, False]

    def test_pole_s1_at_x_zero(self):
        with pytest.raises(PoleAtPoint):
            generator(1).apply_point((0, 2, 3, 4), Fraction(2), (0, 1, 0, 0, -1))

    def test_pole_s4_at_w_one(self):
        with pytest.raises(PoleAtPoint):
            generator(4).apply_point((1, 2, 3, 1), Fraction(2), (0, 0, 0, 0, 1))

    def test_identity_word(self):
        img, beta = identity_map().apply_point((1, 2, 3, 4), Fraction(7), (1, 0, 0, 0, 0))
        assert img == (1, 2, 3, 4) and beta == (1, 0, 0, 0, 0)

    def test_parameter_maps_preserve_relation(self):
        # row combination with the weights must reproduce the weights
        for i in range(5):
            m = generator(i)
            for col in range(5):
                assert sum(RELATION_WEIGHTS[r] * m.param_matrix[r][col]
                           for r in range(5)) == RELATION_WEIGHTS[col]
            assert m.param_shift == (0, 0, 0, 0, 0)

    def test_divisors(self):
        assert invariant_divisor(0) == y
        assert invariant_divisor(1) == x
        assert invariant_divisor(2) == y + w**2 - t
        assert invariant_divisor(3) == z
        assert invariant_divisor(4) == w - 1


class TestSymmetry:
    def test_all_generators_map_solutions_to_solutions(self):
        rep = symmetry_suite()
        assert rep.ok
        for c in rep.checks:
            assert c.status in (PASS, PASS_MOD_RELATION)
            assert c.method == "symbolic"

    def test_s3_holds_identically(self):
        rep = verify_backlund(3)
        assert all(c.status == PASS for c in rep.checks)

    def test_s2_requires_time_partial(self):
        # dropping dX/dt from the chain rule must break the identity
        res = backlund_component_residual(2, 0, include_time_partial=False)
        assert not equals_zero(res)
        assert not equals_zero(reduce_mod_relation(res))

    def test_s2_x_residual_with_time_partial(self):
        res = backlund_component_residual(2, 0, include_time_partial=True)
        assert equals_zero(reduce_mod_relation(res))


class TestCoxeter:
    def test_matrix_shape(self):
        m = coxeter_matrix()
        assert all(m[i][i] == 1 for i in range(5))
        assert m[0][1] == m[1][2] == m[3][4] == 3
        assert m[2][3] == 4
        assert m[0][2] == m[0][3] == m[0][4] == m[1][3] == m[1][4] == m[2][4] == 2
        assert m == tuple(tuple(m[j][i] for j in range(5)) for i in range(5))

    def test_involutions_symbolic(self):
        for i in range(5):
            assert verify_involution(i) == (True, True)

    def test_double_edge_pair(self):
        rep = verify_coxeter_pair(2, 3, n_points=50)
        assert rep.ok
        phase = [c for c in rep.checks if "phase" in c.check_id][0]
        assert "order 4" in phase.detail

    def test_disjoint_pair_commutes(self):
        rep = verify_coxeter_pair(0, 4, n_points=20)
        assert rep.ok

    def test_s1_squared_parameter_matrix(self):
        m = generator(1)
        sq = compose(m, m)
        assert sq.param_matrix == tuple(
            tuple(int(i == j) for j in range(5)) for i in range(5))

    def test_full_suite(self):
        rep = coxeter_suite(n_points=50)
        assert rep.ok


class TestExpFormula:
    def test_first_order_shift(self):
        assert exp_formula(0, RatFun.gen(Gen.X), 1) == generator(0).coords[0]

    def test_second_order_vanishes_for_s2_z(self):
        f2 = invariant_divisor(2)
        inner = substitute(SparsePoly.const(2) * w, {})  # {f2, z} = 2w
        from cpvi.hamiltonians import poisson_bracket

        assert poisson_bracket(f2, 2 * w).is_zero
        assert exp_formula(2, RatFun.gen(Gen.Z), 2) == generator(2).coords[2]

    def test_order_two_reproduces_every_generator(self):
        for i in range(5):
            m = generator(i)
            for k, g in enumerate(PHASE):
                assert exp_formula(i, RatFun.gen(g), 2) == m.coords[k]

    def test_order_three_term_is_zero_on_coordinates(self):
        for i in range(5):
            for g in PHASE:
                assert exp_formula(i, RatFun.gen(g), 3) == exp_formula(i, RatFun.gen(g), 2)

    def test_series_on_own_divisor_terminates_immediately(self):
        # {f_i, f_i} = 0 kills every correction term, so the series fixes
        # f_i; the coordinate pullback agrees (divisor class preserved)
        for i in range(5):
            fi = invariant_divisor(i).as_ratfun()
            assert exp_formula(i, fi, 4) == fi
            assert generator(i).pullback(invariant_divisor(i)) == fi


class TestInvariantDivisors:
    def test_suite_passes(self):
        rep = divisor_suite_symbolic()
        assert rep.ok
        for c in rep.checks:
            assert c.status in (PASS, PASS_MOD_RELATION)

    def test_flow_derivative_vanishes_case_zero(self):
        assert equals_zero(divisor_flow_derivative(0))

    def test_flow_derivative_vanishes_case_one(self):
        assert equals_zero(divisor_flow_derivative(1))

    def test_random_alpha_satisfies_relation(self):
        rng = random.Random(0)
        for _ in range(20):
            vals = random_alpha(rng)
            assert sum(wg * v for wg, v in zip(RELATION_WEIGHTS, vals)) == 1

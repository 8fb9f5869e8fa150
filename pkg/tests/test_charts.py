"""Tests for the holomorphy charts."""

import pytest

from cpvi.charts import (
    chart,
    holomorphy_suite,
    transformed_hamiltonian,
    transformed_hamiltonian_detailed,
    verify_degree_condition,
    verify_roundtrip,
    verify_symplectic_pairs,
)
from cpvi.errors import NonPolynomial
from cpvi.hamiltonians import principal_xy, principal_zw
from cpvi.poly import Gen, PHASE_GENS, RatFun, a0, substitute, x, y


class TestChartDefinitions:
    def test_chart0_inverse_closed_form(self):
        inv = chart(0).inverse
        assert inv.coords[0] == 1 / x
        assert inv.coords[1] == (-(y * x + a0) * x).as_ratfun()

    def test_chart2_has_explicit_time(self):
        assert chart(2).forward.explicit_t
        assert chart(2).inverse.explicit_t
        assert not chart(0).forward.explicit_t

    def test_denominator_variables(self):
        assert [chart(j).denominator_variable for j in range(5)] == [
            Gen.X, Gen.Y, Gen.X, Gen.W, Gen.Z]

    def test_inverse_poles_live_on_one_hyperplane(self):
        for j in range(5):
            ch = chart(j)
            v = ch.denominator_variable
            for comp in ch.inverse.coords:
                assert comp.den.generators_used() <= {v}

    def test_round_trips(self):
        for j in range(5):
            assert verify_roundtrip(j)

    def test_symplectic_pairs(self):
        for j in range(5):
            assert verify_symplectic_pairs(j)


class TestTransformedHamiltonian:
    def test_all_charts_polynomial(self):
        for j in range(5):
            p, needed_relation = transformed_hamiltonian_detailed(j)
            assert not p.is_zero
            assert needed_relation == (j == 2)

    def test_chart2_negative_control(self):
        with pytest.raises(NonPolynomial) as exc_info:
            transformed_hamiltonian(2, correction=False)
        offending = exc_info.value.args[1]
        assert offending  # the failing monomials are reported

    def test_correction_unnecessary_elsewhere(self):
        # adding +x to a chart that does not need it must break nothing
        # structural for chart 0 (still polynomial: 1/x times t(1-t) is
        # absorbed by the same pole bookkeeping) -- but for chart 3 the
        # extra term has no pole at all and stays polynomial trivially
        p = transformed_hamiltonian(3, correction=True)
        assert not p.is_zero

    def test_degree_condition(self):
        assert verify_degree_condition() == 6

    def test_principal_part_degrees(self):
        assert principal_xy().cleared().total_degree(PHASE_GENS) == 5
        assert principal_zw().cleared().total_degree(PHASE_GENS) == 6

    def test_chart0_result_restricts_consistently(self):
        # the chart fixes (z, w), so specializing the new pair at the
        # image of a generic old point must reproduce t(1-t)*H there
        from cpvi.hamiltonians import coupled_polynomial
        from fractions import Fraction

        p = transformed_hamiltonian(0)
        old = {Gen.X: Fraction(2), Gen.Y: Fraction(3), Gen.Z: Fraction(1),
               Gen.W: Fraction(5), Gen.T: Fraction(7),
               Gen.A0: Fraction(1), Gen.A1: Fraction(1), Gen.A2: Fraction(-1),
               Gen.A3: Fraction(1), Gen.A4: Fraction(1)}
        img = {g: c.eval_exact(old) for g, c in zip(
            (Gen.X, Gen.Y, Gen.Z, Gen.W), chart(0).forward.coords)}
        new_point = dict(old)
        new_point.update(img)
        assert p.eval(new_point) == coupled_polynomial().eval(old)


class TestSuite:
    def test_holomorphy_suite_green(self):
        rep = holomorphy_suite()
        assert rep.ok
        by_id = {c.check_id: c for c in rep.checks}
        assert by_id["holomorphy/r2"].status == "pass-mod-relation"
        assert by_id["holomorphy/r0"].status == "pass"
        assert by_id["holomorphy/r2-negative-control"].status == "pass"

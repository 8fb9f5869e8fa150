"""Tests for the adaptive Runge-Kutta integrator."""

import math

import pytest

from cpvi.errors import BlowUp, StepLimitExceeded
from cpvi.odeint import IntegratorConfig, solve


def test_exponential_endpoint():
    rtol = 1e-10
    res = solve(lambda t, v: [v[0]], 0.0, [1.0], 1.0,
                IntegratorConfig(rtol=rtol, atol=1e-13))
    assert abs(res.ys[-1][0] - math.e) < 10 * rtol


def test_zero_field_constant_trajectory():
    res = solve(lambda t, v: [0.0, 0.0], 0.0, [2.5, -1.0], 3.0)
    assert all(s == (2.5, -1.0) for s in res.ys)


def test_backward_integration():
    res = solve(lambda t, v: [v[0]], 1.0, [math.e], 0.0,
                IntegratorConfig(rtol=1e-10, atol=1e-13))
    assert abs(res.ys[-1][0] - 1.0) < 1e-8


def test_fixed_step_order_at_least_four_and_a_half():
    errs = []
    for h in (0.05, 0.025, 0.0125):
        res = solve(lambda t, v: [v[0]], 0.0, [1.0], 1.0,
                    IntegratorConfig(fixed_step=h))
        errs.append(abs(res.ys[-1][0] - math.e))
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(len(errs) - 1)]
    assert min(orders) >= 4.5


def test_tolerance_sweep_reduces_error():
    errs = []
    for rtol in (1e-5, 1e-7, 1e-9):
        res = solve(lambda t, v: [v[0] * math.cos(t)], 0.0, [1.0], 2.0,
                    IntegratorConfig(rtol=rtol, atol=rtol * 1e-2))
        errs.append(abs(res.ys[-1][0] - math.exp(math.sin(2.0))))
    assert errs[0] > errs[1] > errs[2]


def test_step_limit_exceeded():
    with pytest.raises(StepLimitExceeded) as exc_info:
        solve(lambda t, v: [v[0]], 0.0, [1.0], 50.0,
              IntegratorConfig(max_steps=5, magnitude_cap=1e300))
    assert exc_info.value.last_t is not None


def test_blow_up_near_movable_singularity():
    # v' = v^2 from v(0) = 1 blows up at t = 1
    with pytest.raises((BlowUp, StepLimitExceeded)):
        solve(lambda t, v: [v[0] ** 2], 0.0, [1.0], 2.0,
              IntegratorConfig(magnitude_cap=1e6))


def test_rejections_are_counted():
    def stiffish(tv, v):
        return [-50.0 * v[0] + 10.0 * math.sin(40.0 * tv)]

    res = solve(stiffish, 0.0, [1.0], 1.0,
                IntegratorConfig(rtol=1e-8, atol=1e-10, initial_step=0.5))
    assert res.rejections > 0
    assert res.steps == len(res.ts) - 1


def test_bad_tolerances_rejected():
    with pytest.raises(ValueError):
        IntegratorConfig(rtol=0.0)

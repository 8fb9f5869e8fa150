"""Adaptive explicit Runge-Kutta integration (Dormand-Prince 5(4) pair).

Seven stages, fifth-order propagation with an embedded fourth-order error
estimate and proportional-integral step-size control.  A fixed-step mode
(no error control) is provided for convergence-order measurements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import BlowUp, StepLimitExceeded

# Butcher tableau
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_B5 = (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0)
# difference between the 5th- and embedded 4th-order weights
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 5.0
# PI controller exponents for a 4th-order error estimate
_PI_ALPHA = 0.7 / 5.0
_PI_BETA = 0.4 / 5.0


@dataclass(frozen=True)
class IntegratorConfig:
    rtol: float = 1e-9
    atol: float = 1e-12
    max_steps: int = 1_000_000
    initial_step: float | None = None
    magnitude_cap: float = 1e8
    fixed_step: float | None = None

    def __post_init__(self):
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("tolerances must be positive")


@dataclass
class OdeResult:
    ts: list[float] = field(default_factory=list)
    ys: list[tuple[float, ...]] = field(default_factory=list)
    steps: int = 0
    rejections: int = 0


def _rk_step(f, t, yv, h, k1):
    n = len(yv)
    ks = [k1]
    for s in range(1, 7):
        coeffs = _A[s]
        ys = list(yv)
        for i in range(n):
            acc = 0.0
            for a, k in zip(coeffs, ks):
                acc += a * k[i]
            ys[i] += h * acc
        ks.append(f(t + _C[s] * h, ys))
    y_new = list(yv)
    for i in range(n):
        acc = 0.0
        for b, k in zip(_B5, ks):
            if b:
                acc += b * k[i]
        y_new[i] += h * acc
    err = [0.0] * n
    for i in range(n):
        acc = 0.0
        for e, k in zip(_E, ks):
            if e:
                acc += e * k[i]
        err[i] = h * acc
    return y_new, err, ks[6]


def solve(
    f: Callable[[float, Sequence[float]], Sequence[float]],
    t0: float,
    y0: Sequence[float],
    t1: float,
    cfg: IntegratorConfig | None = None,
) -> OdeResult:
    """Integrate y' = f(t, y) from t0 to t1 (forward or backward).

    Raises StepLimitExceeded when the step budget runs out before t1
    (typically a movable singularity; the exception carries the last good
    t) and BlowUp when any component passes the magnitude cap.
    """
    cfg = cfg or IntegratorConfig()
    if t1 == t0:
        return OdeResult(ts=[t0], ys=[tuple(y0)], steps=0)
    direction = 1.0 if t1 > t0 else -1.0
    span = abs(t1 - t0)

    res = OdeResult()
    tv = float(t0)
    yv = [float(v) for v in y0]
    res.ts.append(tv)
    res.ys.append(tuple(yv))

    if cfg.fixed_step is not None:
        h = abs(cfg.fixed_step) * direction
        k1 = f(tv, yv)
        while (t1 - tv) * direction > 1e-14 * span:
            if res.steps >= cfg.max_steps:
                raise StepLimitExceeded(f"step limit at t={tv}", last_t=tv)
            step = h if abs(t1 - tv) > abs(h) else (t1 - tv)
            y_new, _, k_last = _rk_step(f, tv, yv, step, k1)
            tv += step
            yv = y_new
            k1 = k_last  # first-same-as-last property of the pair
            res.steps += 1
            res.ts.append(tv)
            res.ys.append(tuple(yv))
            _cap_check(yv, tv, cfg)
        return res

    h = cfg.initial_step if cfg.initial_step is not None else span / 100.0
    h = min(abs(h), span) * direction
    err_prev = 1e-4
    k1 = f(tv, yv)
    while (t1 - tv) * direction > 1e-14 * span:
        if res.steps + res.rejections >= cfg.max_steps:
            raise StepLimitExceeded(
                f"step limit exceeded at t={tv} (movable singularity?)", last_t=tv)
        if abs(h) > abs(t1 - tv):
            h = t1 - tv
        y_new, err, k_last = _rk_step(f, tv, yv, h, k1)
        # weighted RMS error norm
        acc = 0.0
        for i, e in enumerate(err):
            scale = cfg.atol + cfg.rtol * max(abs(yv[i]), abs(y_new[i]))
            q = e / scale
            acc += q * q
        norm = (acc / len(yv)) ** 0.5
        if norm <= 1.0:
            tv += h
            yv = y_new
            k1 = k_last
            res.steps += 1
            res.ts.append(tv)
            res.ys.append(tuple(yv))
            _cap_check(yv, tv, cfg)
            fac = _SAFETY * (norm or 1e-16) ** (-_PI_ALPHA) * err_prev ** _PI_BETA
            err_prev = max(norm, 1e-16)
            h *= min(_FAC_MAX, max(_FAC_MIN, fac))
        else:
            res.rejections += 1
            fac = _SAFETY * norm ** (-_PI_ALPHA)
            h *= min(1.0, max(_FAC_MIN, fac))
    return res


def _cap_check(yv, tv, cfg):
    for v in yv:
        if abs(v) > cfg.magnitude_cap or v != v:
            raise BlowUp(f"component magnitude {v!r} exceeds cap at t={tv}", last_t=tv)

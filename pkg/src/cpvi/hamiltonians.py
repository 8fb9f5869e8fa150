"""The coupled Painleve VI Hamiltonian, its principal parts, and field machinery.

The system is canonical in two pairs, (x, y) and (z, w), with time t:

    dx/dt = dH/dy,  dy/dt = -dH/dx,  dz/dt = dH/dw,  dw/dt = -dH/dz.

H itself is a polynomial divided by t(1-t); it is stored as a RatFun and
never pre-cleared so vector fields stay directly comparable across
coordinate changes.  The Poisson bracket is fixed by {y,x} = {w,z} = 1
(all other generator pairs commute), oriented so {H, u} reproduces the
canonical equations above.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import BadParameterRelation
from .poly import (
    Gen,
    RatFun,
    RELATION_WEIGHTS,
    SparsePoly,
    a0,
    a1,
    a2,
    a3,
    a4,
    t,
    w,
    x,
    y,
    z,
)

PVI_RELATION_WEIGHTS = (1, 1, 2, 1, 1)


@dataclass(frozen=True)
class Hamiltonian:
    """A Hamiltonian value plus a label for reports and dumps.

    Phase variables are always x, y, z, w; time is t; a0..a4 are the
    parameters (or, for the Painleve VI template, its five parameters).
    """

    value: RatFun
    label: str = "H"

    def cleared(self) -> SparsePoly:
        """Numerator after multiplying out the time denominator."""
        return self.value.num


@dataclass(frozen=True)
class VectorField:
    """Right-hand sides (dx/dt, dy/dt, dz/dt, dw/dt) as rational functions."""

    fx: RatFun
    fy: RatFun
    fz: RatFun
    fw: RatFun

    def components(self) -> tuple[RatFun, RatFun, RatFun, RatFun]:
        return (self.fx, self.fy, self.fz, self.fw)


@lru_cache(maxsize=None)
def coupled_polynomial() -> SparsePoly:
    """t(1-t)H for the coupled system, expanded to canonical form.

    Transcribed line by line from the defining expression; see
    principal_xy / principal_zw for the two restrictions, which are
    transcribed independently so the suite can cross-check them.
    """
    xy_part = (
        x**2 * y**3
        + ((1 - 2 * t) * x - 2 * a1 - a2 - a3) * x * y**2
        + ((t - 1) * t * x**2
           + ((4 * a1 + 4 * a2 + 3 * a3 + a4) * t - (2 * a1 + 2 * a2 + 2 * a3 + a4)) * x
           + a1 * (a1 + a2 + a3)) * y
        - (1 - t) * t * a0 * x
    )
    zw_part = (
        -(z**2) * w**4
        + 2 * a3 * z * w**3
        + ((1 + t) * z**2 + 2 * (2 * a1 + 2 * a2 + a3) * z - a3**2) * w**2
        - 2 * (((-2 * a1 - 2 * a2 - a3 - a4) * t + (2 * a1 + 2 * a2 + 2 * a3 + a4)) * z
               + a3 * (2 * a1 + 2 * a2 + a3)) * w
        - t * (z + 4 * a1 + 4 * a2 + 2 * a3) * z
    )
    coupling = (
        t * x * z
        + (1 - t) * x * z * w
        - x * z * w**2
        - x * y * z
        + x * y * z * w
        - a1 * (w - 1) * z
        + a3 * x * w
    ) * y
    return xy_part + zw_part.scale(Fraction(1, 4)) + coupling


@lru_cache(maxsize=None)
def time_denominator() -> SparsePoly:
    """t(1-t) = t - t^2."""
    return t * (1 - t)


@lru_cache(maxsize=None)
def coupled_hamiltonian() -> Hamiltonian:
    """The full coupled Hamiltonian H, with all five parameters symbolic."""
    return Hamiltonian(RatFun(coupled_polynomial(), time_denominator()), label="coupled")


@lru_cache(maxsize=None)
def principal_xy() -> Hamiltonian:
    """Principal part in the (x, y) plane: the z = w = 0 restriction of H."""
    p = (
        x**2 * y**3
        + ((1 - 2 * t) * x - 2 * a1 - a2 - a3) * x * y**2
        + ((t - 1) * t * x**2
           + ((4 * a1 + 4 * a2 + 3 * a3 + a4) * t - (2 * a1 + 2 * a2 + 2 * a3 + a4)) * x
           + a1 * (a1 + a2 + a3)) * y
        - (1 - t) * t * a0 * x
    )
    return Hamiltonian(RatFun(p, time_denominator()), label="principal-xy")


@lru_cache(maxsize=None)
def principal_zw() -> Hamiltonian:
    """Principal part in the (z, w) plane: the x = y = 0 restriction of H."""
    p = (
        -(z**2) * w**4
        + 2 * a3 * z * w**3
        + ((1 + t) * z**2 + 2 * (2 * a1 + 2 * a2 + a3) * z - a3**2) * w**2
        - 2 * (((-2 * a1 - 2 * a2 - a3 - a4) * t + (2 * a1 + 2 * a2 + 2 * a3 + a4)) * z
               + a3 * (2 * a1 + 2 * a2 + a3)) * w
        - t * (z + 4 * a1 + 4 * a2 + 2 * a3) * z
    )
    return Hamiltonian(RatFun(p.scale(Fraction(1, 4)), time_denominator()), label="principal-zw")


@lru_cache(maxsize=None)
def pvi_template() -> Hamiltonian:
    """The sixth Painleve Hamiltonian H_VI in slot form.

    Slots: generator x is the PVI position, y the momentum, t the time,
    and a0..a4 stand for the five PVI parameters b0..b4 (which must
    satisfy b0 + b1 + 2 b2 + b3 + b4 = 1).  Callers specialize the slots
    with `substitute`.
    """
    b0, b1, b2, b3, b4 = a0, a1, a2, a3, a4
    num = (
        y**2 * (x - t) * (x - 1) * x
        - ((b0 - 1) * (x - 1) * x + b3 * (x - t) * x + b4 * (x - t) * (x - 1)) * y
        + b2 * (b1 + b2) * x
    )
    return Hamiltonian(RatFun(num, t * (t - 1)), label="pvi")


def pvi_hamiltonian(beta: Sequence[Fraction | int] | None = None) -> Hamiltonian:
    """H_VI, either fully symbolic (beta None) or with numeric parameters.

    Numeric parameters must satisfy b0 + b1 + 2 b2 + b3 + b4 = 1 exactly;
    otherwise BadParameterRelation is raised.
    """
    tmpl = pvi_template()
    if beta is None:
        return tmpl
    vals = [Fraction(b) for b in beta]
    if len(vals) != 5:
        raise BadParameterRelation("expected five parameters")
    if sum(wgt * b for wgt, b in zip(PVI_RELATION_WEIGHTS, vals)) != 1:
        raise BadParameterRelation(
            "parameters violate b0 + b1 + 2*b2 + b3 + b4 = 1")
    bound = tmpl.value.substitute(
        {g: v for g, v in zip((Gen.A0, Gen.A1, Gen.A2, Gen.A3, Gen.A4), vals)})
    return Hamiltonian(bound, label="pvi")


def poisson_bracket(f, g):
    """Canonical bracket with {y,x} = {w,z} = 1 and all other pairs zero.

    {f,g} = f_y g_x - f_x g_y + f_w g_z - f_z g_w.  Polynomial inputs give
    a polynomial result; otherwise a RatFun.
    """
    return (
        f.diff(Gen.Y) * g.diff(Gen.X)
        - f.diff(Gen.X) * g.diff(Gen.Y)
        + f.diff(Gen.W) * g.diff(Gen.Z)
        - f.diff(Gen.Z) * g.diff(Gen.W)
    )


def vector_field(h: Hamiltonian | RatFun) -> VectorField:
    """Canonical right-hand sides of the Hamiltonian equations for h."""
    v = h.value if isinstance(h, Hamiltonian) else v_coerce(h)
    return VectorField(
        fx=v.diff(Gen.Y),
        fy=-v.diff(Gen.X),
        fz=v.diff(Gen.W),
        fw=-v.diff(Gen.Z),
    )


def v_coerce(h) -> RatFun:
    if isinstance(h, RatFun):
        return h
    if isinstance(h, SparsePoly):
        return h.as_ratfun()
    return RatFun.const(h)


_PHASE = (Gen.X, Gen.Y, Gen.Z, Gen.W)


def transported_time_derivative(expr: RatFun, field: VectorField) -> RatFun:
    """Total t-derivative of expr along the flow of field.

    Computes sum_u (d expr/d u) f_u + d expr/d t.  When the four field
    components share one denominator the sum is assembled over a single
    common denominator, which avoids the swell of repeated pairwise
    cross-multiplication.
    """
    comps = field.components()
    n, d = expr.num, expr.den
    den0 = comps[0].den
    if all(c.den.terms == den0.terms for c in comps):
        acc = SparsePoly.zero()
        for u, comp in zip(_PHASE, comps):
            if comp.num.is_zero:
                continue
            acc = acc + (n.diff(u) * d - n * d.diff(u)) * comp.num
        acc = acc + (n.diff(Gen.T) * d - n * d.diff(Gen.T)) * den0
        return RatFun(acc, d * d * den0)
    total = expr.diff(Gen.T)
    for u, comp in zip(_PHASE, comps):
        total = total + expr.diff(u) * comp
    return total


def parameter_vector(values: Sequence) -> tuple[Fraction, ...]:
    vals = tuple(Fraction(v) for v in values)
    if len(vals) != 5:
        raise ValueError("expected five parameters a0..a4")
    return vals


def check_parameter_relation(alpha: Sequence) -> bool:
    """Exact test of a0 + 2 a1 + 3 a2 + 2 a3 + a4 = 1."""
    vals = parameter_vector(alpha)
    return sum(wgt * v for wgt, v in zip(RELATION_WEIGHTS, vals)) == 1

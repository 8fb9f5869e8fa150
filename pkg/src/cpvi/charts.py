"""Holomorphy charts: five birational coordinate systems that keep the
system polynomial.

Each chart composes a coordinate inversion with a triangular polynomial
shear, e.g. the first one sends (x, y) to (1/x, -(yx + a0)x).  Pulling
the cleared Hamiltonian back through a chart's inverse must give a
polynomial in the new variables (with coefficients rational in t); the
chart that rewrites the (x, y) pair with the t-dependent shear needs the
Hamiltonian corrected by +x first.  Polynomiality is decided monomial by
monomial, never via gcd: every inverse has all its poles on one
coordinate hyperplane, so the cleared denominator is a pure power of a
single variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .backlund import IDENTITY_MATRIX, BirationalMap, compose
from .errors import NonPolynomial
from .hamiltonians import (
    coupled_polynomial,
    poisson_bracket,
    principal_xy,
    principal_zw,
    time_denominator,
)
from .poly import (
    Gen,
    PHASE_GENS,
    RatFun,
    SparsePoly,
    a0,
    a1,
    a2,
    a3,
    a4,
    format_poly,
    reduce_mod_relation,
    substitute,
    t,
    w,
    x,
    y,
    z,
)
from .report import FAIL, PASS, PASS_MOD_RELATION, Report, SYMBOLIC, timed_check


@dataclass(frozen=True)
class Chart:
    """A holomorphy chart: forward map, closed-form inverse, pole variable."""

    index: int
    forward: BirationalMap
    inverse: BirationalMap
    denominator_variable: Gen
    # which canonical pair the chart rewrites ("xy" or "zw")
    pair: str


def _map(label: str, cx, cy, cz, cw) -> BirationalMap:
    def r(v):
        return v if isinstance(v, RatFun) else v.as_ratfun()

    return BirationalMap(label, (r(cx), r(cy), r(cz), r(cw)), IDENTITY_MATRIX)


@lru_cache(maxsize=None)
def chart(j: int) -> Chart:
    """The j-th holomorphy chart with its derived closed-form inverse."""
    if j == 0:
        fwd = _map("r0", 1 / x, -(y * x + a0) * x, z, w)
        inv = _map("r0inv", 1 / x, -(y * x + a0) * x, z, w)
        return Chart(0, fwd, inv, Gen.X, "xy")
    if j == 1:
        fwd = _map("r1", -(x * y - a1) * y, 1 / y, z, w)
        inv = _map("r1inv", -(x * y - a1) * y, 1 / y, z, w)
        return Chart(1, fwd, inv, Gen.Y, "xy")
    if j == 2:
        fwd = _map("r2", 1 / x, -((y + w**2 - t) * x + a2) * x, z - 2 * x * w, w)
        inv = _map(
            "r2inv",
            1 / x,
            (t - w**2).as_ratfun() - (y * x + a2) * x,
            z.as_ratfun() + (2 * w) / x,
            w,
        )
        return Chart(2, fwd, inv, Gen.X, "xy")
    if j == 3:
        fwd = _map("r3", x, y, -(z * w - a3) * w, 1 / w)
        inv = _map("r3inv", x, y, -(z * w - a3) * w, 1 / w)
        return Chart(3, fwd, inv, Gen.W, "zw")
    if j == 4:
        fwd = _map("r4", x, y, 1 / z, -((w - 1) * z + a4) * z)
        inv = _map("r4inv", x, y, 1 / z, (1 - z * (w * z + a4)).as_ratfun())
        return Chart(4, fwd, inv, Gen.Z, "zw")
    raise ValueError(f"chart index out of range: {j}")


def transformed_hamiltonian_detailed(
    j: int, correction: bool | None = None
) -> tuple[SparsePoly, bool]:
    """Pull the cleared Hamiltonian back through chart j's inverse.

    Returns (polynomial, needed_relation): t(1-t) times the Hamiltonian
    in the new coordinates, and whether the parameter relation had to be
    imposed to clear the pole.  Chart 2 needs both the +x correction and
    the relation (its residual pole carries exactly the relation's defect
    as coefficient); the other charts are polynomial outright.

    `correction` controls the +x term (defaults to exactly the chart
    that requires it); passing False for chart 2 is the negative control
    and raises NonPolynomial with the offending monomials.
    """
    ch = chart(j)
    target = coupled_polynomial()
    if correction is None:
        correction = j == 2
    if correction:
        target = target + time_denominator() * x
    result = substitute(target, ch.inverse.bindings())
    if result.is_polynomial:
        return result.num, False
    reduced = reduce_mod_relation(result)
    if reduced.is_polynomial:
        return reduced.num, True
    result = reduced
    den = result.den
    v = int(ch.denominator_variable)
    if len(den.terms) != 1:
        raise NonPolynomial(
            f"chart {j}: denominator {format_poly(den)} is not a monomial", [])
    mono = next(iter(den.terms))
    if any(e and i != v for i, e in enumerate(mono)):
        raise NonPolynomial(
            f"chart {j}: denominator {format_poly(den)} involves a foreign variable", [])
    k = mono[v]
    offending = sorted(m for m in result.num.terms if m[v] < k)
    raise NonPolynomial(
        f"chart {j}: {len(offending)} monomial(s) not divisible by "
        f"{ch.denominator_variable.label}^{k} even modulo the parameter relation",
        offending,
    )


def transformed_hamiltonian(j: int, correction: bool | None = None) -> SparsePoly:
    return transformed_hamiltonian_detailed(j, correction)[0]


def verify_roundtrip(j: int) -> bool:
    """forward o inverse = inverse o forward = identity, symbolically."""
    ch = chart(j)
    for comp in (compose(ch.forward, ch.inverse), compose(ch.inverse, ch.forward)):
        for k, g in enumerate(PHASE_GENS):
            if comp.coords[k] != RatFun.gen(g):
                return False
    return True


def verify_symplectic_pairs(j: int) -> bool:
    """{y_j, x_j} = 1 and {w_j, z_j} = 1 for the chart's images."""
    cs = chart(j).forward.coords
    return (
        poisson_bracket(cs[1], cs[0]) == RatFun.const(1)
        and poisson_bracket(cs[3], cs[2]) == RatFun.const(1)
    )


def verify_degree_condition() -> int:
    """Total degree of the cleared Hamiltonian in the phase variables."""
    return coupled_polynomial().total_degree(PHASE_GENS)


def holomorphy_suite() -> Report:
    rep = Report("holomorphy")

    def a1_check():
        deg = verify_degree_condition()
        if deg == 6:
            return PASS, "cleared Hamiltonian has phase degree 6"
        return FAIL, f"phase degree {deg} != 6"

    timed_check(rep, "holomorphy/degree", SYMBOLIC, a1_check)

    def deg_detail():
        k1 = principal_xy().cleared().total_degree(PHASE_GENS)
        k2 = principal_zw().cleared().total_degree(PHASE_GENS)
        ok = (k1, k2) == (5, 6)
        return (PASS if ok else FAIL), f"principal parts have phase degrees {k1} and {k2}"

    timed_check(rep, "holomorphy/degree-principal-parts", SYMBOLIC, deg_detail)

    for j in range(5):
        def poly_check(j=j):
            p, needed_relation = transformed_hamiltonian_detailed(j)
            deg = p.total_degree(PHASE_GENS)
            note = "+x corrected, " if j == 2 else ""
            status = PASS_MOD_RELATION if needed_relation else PASS
            return status, (f"{note}polynomial with {len(p)} terms, phase degree {deg}; "
                            "normalization: cleared Hamiltonian over t(1-t)")

        timed_check(rep, f"holomorphy/r{j}", SYMBOLIC, poly_check)

        def roundtrip_check(j=j):
            ok = verify_roundtrip(j)
            return (PASS if ok else FAIL), "forward/inverse compose to identity"

        timed_check(rep, f"holomorphy/roundtrip/r{j}", SYMBOLIC, roundtrip_check)

        def sympl_check(j=j):
            ok = verify_symplectic_pairs(j)
            return (PASS if ok else FAIL), "canonical pair brackets equal 1"

        timed_check(rep, f"holomorphy/symplectic/r{j}", SYMBOLIC, sympl_check)

    def negative_control():
        try:
            transformed_hamiltonian(2, correction=False)
        except NonPolynomial as exc:
            return PASS, f"uncorrected chart 2 rejected: {exc.args[0]}"
        return FAIL, "uncorrected chart 2 unexpectedly polynomial"

    timed_check(rep, "holomorphy/r2-negative-control", SYMBOLIC, negative_control)
    return rep

"""Backlund symmetry of the coupled system: the five reflection generators.

The generators s_0..s_4 are birational maps on (x, y, z, w) combined with
a linear reflection of the parameters (a0..a4).  They realize the affine
Weyl group of type E6^(2): nodes 0-1, 1-2 and 3-4 of the Dynkin diagram
are joined by single edges (braid order 3), nodes 2-3 by the double edge
(order 4), and all remaining pairs commute.  Each node i carries an
invariant divisor f_i whose vanishing locus is preserved by the flow when
a_i = 0:

    f_0 = y,  f_1 = x,  f_2 = y + w^2 - t,  f_3 = z,  f_4 = w - 1.

The generator attached to f_i shifts coordinates by multiples of a_i/f_i
and is reproduced, on every coordinate, by the order-2 truncation of the
Poisson-exponential series  g -> g + (a_i/f_i){f_i,g} + ...
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .errors import ExpressionTooLarge, PoleAtPoint
from .hamiltonians import (
    VectorField,
    coupled_hamiltonian,
    coupled_polynomial,
    poisson_bracket,
    time_denominator,
    transported_time_derivative,
    vector_field,
)
from .poly import (
    Gen,
    RatFun,
    RELATION_WEIGHTS,
    SparsePoly,
    equals_zero,
    substitute,
    t,
    term_limit,
    w,
    x,
    y,
    z,
)
from .report import (
    FAIL,
    PASS,
    PASS_MOD_RELATION,
    Report,
    SAMPLED,
    SYMBOLIC,
    CheckResult,
    zero_status,
)

_PHASE = (Gen.X, Gen.Y, Gen.Z, Gen.W)
_PARAMS = (Gen.A0, Gen.A1, Gen.A2, Gen.A3, Gen.A4)


@dataclass(frozen=True)
class BirationalMap:
    """Rational images of (x, y, z, w) plus an affine action on a0..a4.

    Time t is never transformed.  `param_matrix` rows give the new
    parameters as integer combinations of the old ones; `param_shift` is
    the affine part (zero for the reflection generators, used by charts).
    """

    label: str
    coords: tuple[RatFun, RatFun, RatFun, RatFun]
    param_matrix: tuple[tuple[int, ...], ...]
    param_shift: tuple[int, ...] = (0, 0, 0, 0, 0)

    @property
    def explicit_t(self) -> bool:
        return any(c.depends_on(Gen.T) for c in self.coords)

    def param_images(self) -> list[SparsePoly]:
        """New parameters as (linear) polynomials in the old ones."""
        out = []
        for row, shift in zip(self.param_matrix, self.param_shift):
            p = SparsePoly.const(shift)
            for g, coef in zip(_PARAMS, row):
                if coef:
                    p = p + SparsePoly.gen(g).scale(coef)
            out.append(p)
        return out

    def bindings(self) -> dict[Gen, RatFun | SparsePoly]:
        """Substitution dict realizing the pullback g -> g o map."""
        binds: dict[Gen, RatFun | SparsePoly] = {
            g: c for g, c in zip(_PHASE, self.coords)
        }
        for g, img in zip(_PARAMS, self.param_images()):
            binds[g] = img
        return binds

    def pullback(self, f: RatFun | SparsePoly) -> RatFun:
        return substitute(f, self.bindings())

    def apply_param(self, alpha: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(
            sum(coef * a for coef, a in zip(row, alpha)) + shift
            for row, shift in zip(self.param_matrix, self.param_shift)
        )

    def apply_point(
        self,
        phase: Sequence[Fraction],
        tval: Fraction,
        alpha: Sequence[Fraction],
    ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """Exact image of a point; raises PoleAtPoint on the map's pole set."""
        point: dict[Gen, Fraction] = {Gen.T: Fraction(tval)}
        for g, v in zip(_PHASE, phase):
            point[g] = Fraction(v)
        for g, v in zip(_PARAMS, alpha):
            point[g] = Fraction(v)
        image = tuple(c.eval_exact(point) for c in self.coords)
        return image, self.apply_param([Fraction(a) for a in alpha])


def _mat_mul(a, b):
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(5)) for j in range(5))
        for i in range(5)
    )


def _mat_vec(a, v):
    return tuple(sum(a[i][k] * v[k] for k in range(5)) for i in range(5))


IDENTITY_MATRIX = tuple(tuple(int(i == j) for j in range(5)) for i in range(5))


def compose(outer: BirationalMap, inner: BirationalMap) -> BirationalMap:
    """The map 'apply inner first, then outer'."""
    binds = inner.bindings()
    coords = tuple(substitute(c, binds) for c in outer.coords)
    matrix = _mat_mul(outer.param_matrix, inner.param_matrix)
    shift = tuple(
        s + o
        for s, o in zip(_mat_vec(outer.param_matrix, inner.param_shift), outer.param_shift)
    )
    return BirationalMap(f"{outer.label}*{inner.label}", coords, matrix, shift)


@lru_cache(maxsize=None)
def identity_map() -> BirationalMap:
    coords = tuple(RatFun.gen(g) for g in _PHASE)
    return BirationalMap("id", coords, IDENTITY_MATRIX)


@lru_cache(maxsize=None)
def invariant_divisor(i: int) -> SparsePoly:
    """The divisor f_i attached to node i of the diagram."""
    return (y, x, y + w**2 - t, z, w - 1)[i]


# Substitution that solves f_i = 0 for one variable, used to restrict to
# the divisor.
_DIVISOR_SOLVE: tuple[tuple[Gen, object], ...] = (
    (Gen.Y, 0),
    (Gen.X, 0),
    (Gen.Y, None),  # y = t - w^2, built lazily below
    (Gen.Z, 0),
    (Gen.W, 1),
)


def divisor_solution_binding(i: int) -> dict[Gen, object]:
    g, val = _DIVISOR_SOLVE[i]
    if val is None:
        val = t - w**2
    return {g: val}


@lru_cache(maxsize=None)
def generator(i: int) -> BirationalMap:
    """The reflection generator s_i, transcribed directly (not via the
    exponential series, so the two constructions cross-check each other).
    """
    xr, yr, zr, wr = (RatFun.gen(g) for g in _PHASE)
    A = [SparsePoly.gen(g) for g in _PARAMS]
    f = invariant_divisor(i)
    if i == 0:
        coords = (xr + RatFun(A[0]) / f, yr, zr, wr)
        matrix = ((-1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                  (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))
    elif i == 1:
        coords = (xr, yr - RatFun(A[1]) / f, zr, wr)
        matrix = ((1, 1, 0, 0, 0), (0, -1, 0, 0, 0), (0, 1, 1, 0, 0),
                  (0, 0, 0, 1, 0), (0, 0, 0, 0, 1))
    elif i == 2:
        shift = RatFun(A[2]) / f
        coords = (xr + shift, yr, zr + RatFun((2 * w) * A[2]) / f, wr)
        matrix = ((1, 0, 0, 0, 0), (0, 1, 1, 0, 0), (0, 0, -1, 0, 0),
                  (0, 0, 2, 1, 0), (0, 0, 0, 0, 1))
    elif i == 3:
        coords = (xr, yr, zr, wr - RatFun(A[3]) / f)
        matrix = ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 1, 0),
                  (0, 0, 0, -1, 0), (0, 0, 0, 1, 1))
    elif i == 4:
        coords = (xr, yr, zr + RatFun(A[4]) / f, wr)
        matrix = ((1, 0, 0, 0, 0), (0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                  (0, 0, 0, 1, 1), (0, 0, 0, 0, -1))
    else:
        raise ValueError(f"generator index out of range: {i}")
    return BirationalMap(f"s{i}", coords, matrix)


@lru_cache(maxsize=None)
def coxeter_matrix() -> tuple[tuple[int, ...], ...]:
    """Braid orders m_ij read off the twisted affine E6 diagram."""
    m = [[2] * 5 for _ in range(5)]
    for i in range(5):
        m[i][i] = 1
    for i, j in ((0, 1), (1, 2), (3, 4)):
        m[i][j] = m[j][i] = 3
    m[2][3] = m[3][2] = 4
    return tuple(tuple(row) for row in m)


def exp_formula(i: int, g: RatFun | SparsePoly, order: int) -> RatFun:
    """Truncated Poisson-exponential series for the action of s_i on g.

    s_i(g) = g + (a_i/f_i){f_i,g} + (1/2!)(a_i/f_i)^2 {f_i,{f_i,g}} + ...
    truncated after the given order.  On coordinate functions the series
    terminates by order 2.
    """
    if order < 0:
        raise ValueError("order must be non-negative")
    f = invariant_divisor(i)
    ratio = RatFun(SparsePoly.gen(_PARAMS[i])) / f
    acc = g + RatFun.const(0)
    nested = g
    for k in range(1, order + 1):
        nested = poisson_bracket(f, nested)
        if equals_zero(nested if isinstance(nested, RatFun) else nested.as_ratfun()):
            break
        acc = acc + ratio**k * nested * Fraction(1, math.factorial(k))
    return acc


# --- exact random sampling -------------------------------------------------


def random_alpha(rng: random.Random) -> tuple[Fraction, ...]:
    """Random exact parameters satisfying a0 + 2a1 + 3a2 + 2a3 + a4 = 1."""
    tail = [Fraction(rng.randint(-24, 24), rng.randint(1, 8)) for _ in range(4)]
    head = 1 - sum(wgt * v for wgt, v in zip(RELATION_WEIGHTS[1:], tail))
    return (head, *tail)


def random_phase(rng: random.Random) -> tuple[Fraction, ...]:
    return tuple(Fraction(rng.randint(-10**6, 10**6)) for _ in range(4))


def random_time(rng: random.Random) -> Fraction:
    while True:
        v = Fraction(rng.randint(-10**6, 10**6), rng.randint(1, 997))
        if v not in (0, 1):
            return v


# --- symmetry verification -------------------------------------------------


def backlund_component_residual(i: int, slot: int, include_time_partial: bool = True) -> RatFun:
    """Transported derivative minus target field, for one coordinate slot.

    The residual is identically zero (possibly modulo the parameter
    relation) exactly when s_i maps solutions to solutions in that
    component.  Dropping the explicit time partial (only s_2 has one)
    gives the negative control.
    """
    m = generator(i)
    field = vector_field(coupled_hamiltonian())
    comp = m.coords[slot]
    lhs = transported_time_derivative(comp, field)
    if not include_time_partial:
        lhs = lhs - comp.diff(Gen.T)
    rhs = substitute(field.components()[slot], m.bindings())
    return lhs - rhs


def _sampled_backlund_deviation(i: int, slot: int, n_points: int, rng: random.Random) -> Fraction:
    """Max |lhs - rhs| over exact random relation-constrained points."""
    m = generator(i)
    field = vector_field(coupled_hamiltonian())
    comp = m.coords[slot]
    partials = [comp.diff(g) for g in _PHASE] + [comp.diff(Gen.T)]
    worst = Fraction(0)
    done = 0
    while done < n_points:
        alpha = random_alpha(rng)
        phase = random_phase(rng)
        tv = random_time(rng)
        point = {Gen.T: tv}
        point.update(zip(_PHASE, phase))
        point.update(zip(_PARAMS, alpha))
        try:
            lhs = sum(
                (p.eval_exact(point) * f.eval_exact(point)
                 for p, f in zip(partials, field.components())),
                start=partials[4].eval_exact(point),
            )
            image, beta = m.apply_point(phase, tv, alpha)
            ipoint = {Gen.T: tv}
            ipoint.update(zip(_PHASE, image))
            ipoint.update(zip(_PARAMS, beta))
            rhs = field.components()[slot].eval_exact(ipoint)
        except PoleAtPoint:
            continue
        worst = max(worst, abs(lhs - rhs))
        done += 1
    return worst


def verify_backlund(i: int, max_terms: int | None = 2_000_000, seed: int = 7) -> Report:
    """Check symbolically that s_i maps solutions to solutions.

    Each coordinate is verified by comparing the chain-rule transport of
    its image along the flow with the canonical field of the transformed
    parameters evaluated at the image.  On expression blow-up the check
    falls back to exact evaluation at random points and says so.
    """
    rep = Report(f"symmetry-s{i}")
    rng = random.Random(seed + i)
    for slot, name in enumerate("xyzw"):
        start = time.perf_counter()
        method = SYMBOLIC
        try:
            with term_limit(max_terms):
                status = zero_status(backlund_component_residual(i, slot))
            detail = "" if status else "residual is not zero"
            status = status or FAIL
        except ExpressionTooLarge:
            method = SAMPLED
            worst = _sampled_backlund_deviation(i, slot, 50, rng)
            status = PASS if worst == 0 else FAIL
            detail = "50 exact relation-constrained points" if worst == 0 else f"max deviation {worst}"
        except Exception as exc:  # noqa: BLE001
            status, detail = FAIL, f"{type(exc).__name__}: {exc}"
        elapsed = (time.perf_counter() - start) * 1000.0
        rep.add(CheckResult(f"symmetry/s{i}/{name}", method, status, detail, elapsed))
    return rep


def symmetry_suite() -> Report:
    rep = Report("symmetry")
    for i in range(5):
        rep.extend(verify_backlund(i))
    return rep


# --- Coxeter relations -------------------------------------------------


def verify_involution(i: int) -> tuple[bool, bool]:
    """s_i o s_i = identity, symbolically on coordinates and parameters."""
    m = generator(i)
    sq = compose(m, m)
    coords_ok = all(
        sq.coords[k] == RatFun.gen(g) for k, g in enumerate(_PHASE)
    )
    params_ok = sq.param_matrix == IDENTITY_MATRIX and all(s == 0 for s in sq.param_shift)
    return coords_ok, params_ok


def _apply_word(word, phase, tv, alpha):
    for k in word:
        phase, alpha = generator(k).apply_point(phase, tv, alpha)
    return phase, alpha


def verify_coxeter_pair(i: int, j: int, n_points: int = 50, seed: int = 11) -> Report:
    """(s_i s_j)^{m_ij} = id: parameters exactly, phase at random exact points."""
    rep = Report(f"coxeter-{i}{j}")
    m = coxeter_matrix()[i][j]

    def param_check():
        prod = _mat_mul(generator(i).param_matrix, generator(j).param_matrix)
        acc = IDENTITY_MATRIX
        for _ in range(m):
            acc = _mat_mul(acc, prod)
        ok = acc == IDENTITY_MATRIX
        return (PASS if ok else FAIL), f"order {m}"

    from .report import timed_check

    timed_check(rep, f"coxeter/param/s{i}s{j}", SYMBOLIC, param_check)

    def phase_check():
        rng = random.Random(seed * 100 + 10 * i + j)
        word = [i, j] * m
        checked = 0
        attempts = 0
        while checked < n_points:
            attempts += 1
            if attempts > 40 * n_points:
                return FAIL, "could not find enough pole-free sample points"
            phase = random_phase(rng)
            tv = random_time(rng)
            alpha = random_alpha(rng)
            try:
                image, beta = _apply_word(word, phase, tv, alpha)
            except PoleAtPoint:
                continue
            if image != phase or beta != alpha:
                return FAIL, f"word (s{i}s{j})^{m} moved a point"
            checked += 1
        return PASS, f"{checked} exact points, order {m}"

    timed_check(rep, f"coxeter/phase/s{i}s{j}", SAMPLED, phase_check)
    return rep


def coxeter_suite(n_points: int = 50, seed: int = 11) -> Report:
    rep = Report("coxeter")
    from .report import timed_check

    for i in range(5):
        def inv_check(i=i):
            coords_ok, params_ok = verify_involution(i)
            ok = coords_ok and params_ok
            return (PASS if ok else FAIL), "coords and params"

        timed_check(rep, f"coxeter/involution/s{i}", SYMBOLIC, inv_check)
    for i in range(5):
        for j in range(i + 1, 5):
            rep.extend(verify_coxeter_pair(i, j, n_points=n_points, seed=seed))
    return rep


# --- invariant divisors -------------------------------------------------


def divisor_flow_derivative(i: int) -> RatFun:
    """D(f_i) along the flow with a_i = 0, restricted to {f_i = 0}."""
    p0 = substitute(coupled_polynomial(), {_PARAMS[i]: 0})
    h0 = RatFun(p0.num, time_denominator())
    field = vector_field(h0)
    deriv = transported_time_derivative(invariant_divisor(i).as_ratfun(), field)
    return substitute(deriv, divisor_solution_binding(i))


def _zero_status_on_divisor(res: RatFun, i: int) -> str | None:
    """zero_status, but the parameter relation is applied with a_i = 0.

    With a_i pinned to zero the constraint restricts to the remaining
    parameters, so eliminate a4 when i = 0 and a0 otherwise.
    """
    if equals_zero(res):
        return PASS
    weights = dict(zip(_PARAMS, RELATION_WEIGHTS))
    elim = Gen.A4 if i == 0 else Gen.A0
    rep = SparsePoly.const(1)
    for g, wgt in weights.items():
        if g in (elim, _PARAMS[i]):
            continue
        rep = rep - SparsePoly.gen(g).scale(wgt)
    if equals_zero(substitute(res, {elim: rep})):
        return PASS_MOD_RELATION
    return None


def invariant_divisor_check(i: int) -> Report:
    rep = Report(f"divisor-f{i}")
    from .report import timed_check

    def chk():
        res = divisor_flow_derivative(i)
        status = _zero_status_on_divisor(res, i)
        if status is None:
            return FAIL, "flow derivative does not vanish on the divisor"
        return status, "flow derivative vanishes on {f_i = 0} with a_i = 0"

    timed_check(rep, f"divisors/f{i}", SYMBOLIC, chk)
    return rep


def divisor_suite_symbolic() -> Report:
    rep = Report("divisors")
    for i in range(5):
        rep.extend(invariant_divisor_check(i))
    return rep

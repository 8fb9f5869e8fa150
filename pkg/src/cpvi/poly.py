"""Exact sparse multivariate polynomial and rational function arithmetic.

Everything in this package lives in one fixed polynomial ring: rational
coefficients, ten generators in a fixed order

    x, y, z, w, t, a0, a1, a2, a3, a4

where x, y, z, w are the phase variables, t is time and a0..a4 the
parameters.  A monomial is a 10-tuple of non-negative exponents; a
polynomial is a dict mapping monomials to nonzero rational coefficients
(``int`` or ``Fraction`` -- both exact).  Monomials compare
lexicographically in the generator order above, which fixes a canonical
term order for printing and sign normalization.

Rational functions are stored as a numerator/denominator pair.  There is
deliberately *no* multivariate gcd: normalization only removes common
monomial content and scalar content, and equality is decided by
cross-multiplication.  That keeps the arithmetic simple and exact at the
cost of non-unique representations, which is all identity testing needs.
"""

from __future__ import annotations

import enum
import threading
from contextlib import contextmanager
from fractions import Fraction
from math import gcd, lcm
from operator import add as _iadd
from typing import Iterable, Iterator, Mapping, Union

from .errors import (
    DenominatorVanishes,
    ExpressionTooLarge,
    ParseError,
    PoleAtPoint,
    ZeroPolynomial,
)


class Gen(enum.IntEnum):
    """The ten generators, in their fixed canonical order."""

    X = 0
    Y = 1
    Z = 2
    W = 3
    T = 4
    A0 = 5
    A1 = 6
    A2 = 7
    A3 = 8
    A4 = 9

    @property
    def label(self) -> str:
        return _GEN_LABELS[self]


_GEN_LABELS = ("x", "y", "z", "w", "t", "a0", "a1", "a2", "a3", "a4")
_LABEL_TO_GEN = {lbl: Gen(i) for i, lbl in enumerate(_GEN_LABELS)}

NGENS = 10
PHASE_GENS = (Gen.X, Gen.Y, Gen.Z, Gen.W)
PARAM_GENS = (Gen.A0, Gen.A1, Gen.A2, Gen.A3, Gen.A4)

Mono = tuple  # 10-tuple of ints
Coeff = Union[int, Fraction]
Scalar = Union[int, Fraction]

_ZERO_MONO: Mono = (0,) * NGENS


# --- expression-swell guard ---------------------------------------------

# Composed birational words can blow up; callers may cap the number of
# stored terms and fall back to point testing on ExpressionTooLarge.
_guard = threading.local()


def _active_limit() -> int | None:
    return getattr(_guard, "limit", None)


@contextmanager
def term_limit(max_terms: int | None) -> Iterator[None]:
    """Cap the term count of every polynomial built inside the block.

    Exceeding the cap raises :class:`ExpressionTooLarge` instead of
    exhausting memory.  ``None`` removes the cap.
    """
    prev = _active_limit()
    _guard.limit = max_terms
    try:
        yield
    finally:
        _guard.limit = prev


def _check_size(terms: dict) -> None:
    limit = _active_limit()
    if limit is not None and len(terms) > limit:
        raise ExpressionTooLarge(f"{len(terms)} terms exceeds ceiling {limit}")


def _as_coeff(c) -> Coeff:
    if isinstance(c, int):
        return c
    if isinstance(c, Fraction):
        return int(c) if c.denominator == 1 else c
    raise TypeError(f"coefficient must be int or Fraction, got {type(c).__name__}")


class SparsePoly:
    """Sparse polynomial over the rationals in the fixed 10-generator ring.

    Immutable.  ``terms`` maps exponent tuples to nonzero coefficients;
    two polynomials are equal iff the maps are equal.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Mono, Coeff] | None = None):
        clean: dict[Mono, Coeff] = {}
        if terms:
            for mono, c in terms.items():
                if len(mono) != NGENS or any(e < 0 for e in mono):
                    raise ValueError(f"bad monomial {mono!r}")
                c = _as_coeff(Fraction(c) if not isinstance(c, (int, Fraction)) else c)
                if c:
                    clean[tuple(mono)] = c
        _check_size(clean)
        object.__setattr__(self, "terms", clean)

    # internal fast path: trusts that `terms` is already canonical
    @classmethod
    def _make(cls, terms: dict[Mono, Coeff]) -> "SparsePoly":
        _check_size(terms)
        p = object.__new__(cls)
        object.__setattr__(p, "terms", terms)
        return p

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # --- constructors ---

    @classmethod
    def zero(cls) -> "SparsePoly":
        return cls._make({})

    @classmethod
    def const(cls, c: Scalar) -> "SparsePoly":
        c = _as_coeff(c if isinstance(c, (int, Fraction)) else Fraction(c))
        return cls._make({_ZERO_MONO: c} if c else {})

    @classmethod
    def gen(cls, g: Gen | int) -> "SparsePoly":
        mono = [0] * NGENS
        mono[int(g)] = 1
        return cls._make({tuple(mono): 1})

    # --- predicates / views ---

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and _ZERO_MONO in self.terms)

    def constant_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_constant:
            raise ValueError("not a constant polynomial")
        return Fraction(self.terms[_ZERO_MONO])

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.terms == SparsePoly.const(other).terms
        return NotImplemented

    __hash__ = None  # mutable-dict backed; use sorted_terms() as a key if needed

    def sorted_terms(self) -> list[tuple[Mono, Coeff]]:
        """Terms in descending lexicographic monomial order (canonical)."""
        return sorted(self.terms.items(), key=lambda kv: kv[0], reverse=True)

    def leading_coeff(self) -> Coeff:
        if not self.terms:
            return 0
        return self.terms[max(self.terms)]

    def generators_used(self) -> set[Gen]:
        used: set[Gen] = set()
        for mono in self.terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(Gen(i))
        return used

    def depends_on(self, g: Gen | int) -> bool:
        i = int(g)
        return any(mono[i] for mono in self.terms)

    # --- arithmetic ---

    def _coerce(self, other) -> "SparsePoly | None":
        if isinstance(other, SparsePoly):
            return other
        if isinstance(other, (int, Fraction)):
            return SparsePoly.const(other)
        return None

    def __add__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        if not self.terms:
            return q
        if not q.terms:
            return self
        out = dict(self.terms)
        for mono, c in q.terms.items():
            v = out.get(mono)
            if v is None:
                out[mono] = c
            else:
                v = v + c
                if v:
                    out[mono] = v
                else:
                    del out[mono]
        return SparsePoly._make(out)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly._make({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other):
        q = self._coerce(other)
        if q is None:
            return NotImplemented
        a, b = self.terms, q.terms
        if not a or not b:
            return SparsePoly.zero()
        if len(a) > len(b):
            a, b = b, a
        out: dict[Mono, Coeff] = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                m = tuple(map(_iadd, m1, m2))
                v = out.get(m)
                if v is None:
                    out[m] = c1 * c2
                else:
                    v = v + c1 * c2
                    if v:
                        out[m] = v
                    else:
                        del out[m]
        return SparsePoly._make(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = SparsePoly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base_needed = n > 1
            n >>= 1
            if base_needed:
                base = base * base
        return result

    def scale(self, c: Scalar) -> "SparsePoly":
        if not c:
            return SparsePoly.zero()
        return SparsePoly._make({m: _as_coeff(Fraction(v) * c if isinstance(c, Fraction) else v * c)
                                 for m, v in self.terms.items()})

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(self, SparsePoly.const(other))
        if isinstance(other, SparsePoly):
            return RatFun(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return RatFun(SparsePoly.const(other), self)
        return NotImplemented

    # --- calculus / structure ---

    def diff(self, g: Gen | int) -> "SparsePoly":
        """Exact partial derivative with respect to one generator."""
        i = int(g)
        out: dict[Mono, Coeff] = {}
        for mono, c in self.terms.items():
            e = mono[i]
            if not e:
                continue
            m = list(mono)
            m[i] = e - 1
            out[tuple(m)] = c * e
        return SparsePoly._make(out)

    def total_degree(self, gens: Iterable[Gen | int] | None = None) -> int:
        """Max over terms of the exponent sum restricted to ``gens``.

        Raises :class:`ZeroPolynomial` on the zero polynomial.
        """
        if not self.terms:
            raise ZeroPolynomial("total degree of the zero polynomial is undefined")
        if gens is None:
            idx = range(NGENS)
        else:
            idx = [int(g) for g in gens]
        return max(sum(mono[i] for i in idx) for mono in self.terms)

    def degree_in(self, g: Gen | int) -> int:
        i = int(g)
        if not self.terms:
            return 0
        return max(mono[i] for mono in self.terms)

    def eval(self, point: Mapping[Gen | int, Scalar]) -> Fraction:
        """Exact value at a rational point binding every generator that occurs."""
        vals: dict[int, Fraction] = {int(g): Fraction(v) for g, v in point.items()}
        missing = [Gen(i).label for i in range(NGENS)
                   if i not in vals and self.depends_on(i)]
        if missing:
            raise ValueError(f"point does not bind generator(s): {', '.join(missing)}")
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = Fraction(c)
            for i, e in enumerate(mono):
                if e:
                    term *= vals[i] ** e
            total += term
        return total

    def eval_float(self, values) -> float:
        """Double-precision value; ``values`` is a full 10-sequence."""
        total = 0.0
        for mono, c in self.terms.items():
            term = float(c)
            for i, e in enumerate(mono):
                if e:
                    term *= values[i] ** e
            total += term
        return total

    def monomial_min_exponents(self):
        it = iter(self.terms)
        first = next(it)
        mins = list(first)
        for mono in it:
            for i, e in enumerate(mono):
                if e < mins[i]:
                    mins[i] = e
        return mins

    def shift_down(self, shifts) -> "SparsePoly":
        """Divide by the monomial with the given exponent vector."""
        out = {}
        for mono, c in self.terms.items():
            out[tuple(e - s for e, s in zip(mono, shifts))] = c
        return SparsePoly._make(out)

    def substitute(self, bindings: Mapping) -> "RatFun":
        return substitute(self, bindings)

    def as_ratfun(self) -> "RatFun":
        return RatFun(self, _ONE_POLY)

    def __str__(self) -> str:
        return format_poly(self)

    def __repr__(self) -> str:
        return f"SparsePoly({format_poly(self)})"


_ONE_POLY = SparsePoly._make({_ZERO_MONO: 1})
_ZERO_POLY = SparsePoly._make({})


def _scalar_content(*polys: SparsePoly) -> Fraction:
    """gcd of numerators / lcm of denominators over all coefficients."""
    den_l = 1
    num_g = 0
    for p in polys:
        for c in p.terms.values():
            if isinstance(c, int):
                num_g = gcd(num_g, c)
            else:
                num_g = gcd(num_g, c.numerator)
                den_l = lcm(den_l, c.denominator)
    return Fraction(num_g, den_l)


class RatFun:
    """Quotient of two sparse polynomials, lazily normalized.

    Normalization divides out common monomial content and scalar content
    and fixes the denominator's leading sign; no multivariate gcd is ever
    computed.  Equality is decided by cross-multiplication, so distinct
    internal representations of the same function still compare equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: SparsePoly, den: SparsePoly | None = None):
        if den is None:
            den = _ONE_POLY
        if den.is_zero:
            raise DenominatorVanishes("denominator is the zero polynomial")
        if num.is_zero:
            object.__setattr__(self, "num", _ZERO_POLY)
            object.__setattr__(self, "den", _ONE_POLY)
            return
        # common monomial content
        nmin = num.monomial_min_exponents()
        dmin = den.monomial_min_exponents()
        shifts = [min(a, b) for a, b in zip(nmin, dmin)]
        if any(shifts):
            num = num.shift_down(shifts)
            den = den.shift_down(shifts)
        # fold a constant denominator into the numerator
        if den.is_constant:
            c = den.constant_value()
            if c != 1:
                num = num.scale(1 / c)
            object.__setattr__(self, "num", num)
            object.__setattr__(self, "den", _ONE_POLY)
            return
        # joint scalar content -> integer, jointly primitive coefficients
        content = _scalar_content(num, den)
        if content != 1:
            num = num.scale(1 / content)
            den = den.scale(1 / content)
        if den.leading_coeff() < 0:
            num = num.scale(-1)
            den = den.scale(-1)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RatFun is immutable")

    # --- constructors ---

    @classmethod
    def const(cls, c: Scalar) -> "RatFun":
        return cls(SparsePoly.const(c))

    @classmethod
    def gen(cls, g: Gen | int) -> "RatFun":
        return cls(SparsePoly.gen(g))

    # --- predicates ---

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.is_constant

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def __eq__(self, other) -> bool:
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        return (self.num * q.den) == (q.num * self.den)

    __hash__ = None

    # --- arithmetic ---

    def __add__(self, other):
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        if self.den.terms == q.den.terms:
            return RatFun(self.num + q.num, self.den)
        return RatFun(self.num * q.den + q.num * self.den, self.den * q.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFun(-self.num, self.den)

    def __sub__(self, other):
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        return self + (-q)

    def __rsub__(self, other):
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        return q + (-self)

    def __mul__(self, other):
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        return RatFun(self.num * q.num, self.den * q.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        return RatFun(self.num * q.den, self.den * q.num)

    def __rtruediv__(self, other):
        q = _to_ratfun(other)
        if q is None:
            return NotImplemented
        return q / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise ValueError("rational function powers must be integers")
        if n < 0:
            return RatFun(self.den ** (-n), self.num ** (-n))
        return RatFun(self.num ** n, self.den ** n)

    # --- calculus ---

    def diff(self, g: Gen | int) -> "RatFun":
        """Exact partial derivative (quotient rule)."""
        i = int(g)
        if not self.den.depends_on(i):
            return RatFun(self.num.diff(i), self.den)
        n, d = self.num, self.den
        return RatFun(n.diff(i) * d - n * d.diff(i), d * d)

    def substitute(self, bindings: Mapping) -> "RatFun":
        return substitute(self, bindings)

    def eval_exact(self, point: Mapping[Gen | int, Scalar]) -> Fraction:
        """Exact rational value; raises :class:`PoleAtPoint` on a zero denominator."""
        d = self.den.eval(point)
        if d == 0:
            raise PoleAtPoint(f"denominator vanishes at {dict(point)!r}")
        return self.num.eval(point) / d

    def eval_float(self, values) -> float:
        d = self.den.eval_float(values)
        if d == 0.0:
            raise PoleAtPoint("denominator vanishes at evaluation point")
        return self.num.eval_float(values) / d

    def depends_on(self, g: Gen | int) -> bool:
        return self.num.depends_on(g) or self.den.depends_on(g)

    def generators_used(self) -> set[Gen]:
        return self.num.generators_used() | self.den.generators_used()

    def __str__(self) -> str:
        return format_ratfun(self)

    def __repr__(self) -> str:
        return f"RatFun({format_ratfun(self)})"


def _to_ratfun(v) -> RatFun | None:
    if isinstance(v, RatFun):
        return v
    if isinstance(v, SparsePoly):
        return v.as_ratfun()
    if isinstance(v, (int, Fraction)):
        return RatFun.const(v)
    return None


ZERO = RatFun.const(0)
ONE = RatFun.const(1)


def equals_zero(f: RatFun | SparsePoly) -> bool:
    """True iff ``f`` is identically zero (numerator canonically empty)."""
    if isinstance(f, SparsePoly):
        return f.is_zero
    return f.num.is_zero


# --- substitution --------------------------------------------------------


def _substitute_poly(p: SparsePoly, bindings: dict[int, RatFun]) -> RatFun:
    """Compose ``p`` with rational bindings over one common denominator.

    The result is sum_m c_m * prod_i num_i^{e_i} den_i^{M_i - e_i} over
    prod_i den_i^{M_i} with M_i the max exponent of generator i, which
    avoids the denominator snowball of repeated pairwise cross sums.
    """
    if p.is_zero:
        return RatFun(_ZERO_POLY)
    maxes = {i: p.degree_in(i) for i in bindings}
    active = {i: b for i, b in bindings.items() if maxes[i] > 0}
    if not active:
        return p.as_ratfun()
    num_pows: dict[int, list[SparsePoly]] = {}
    den_pows: dict[int, list[SparsePoly]] = {}
    for i, b in active.items():
        npow = [_ONE_POLY]
        dpow = [_ONE_POLY]
        for _ in range(maxes[i]):
            npow.append(npow[-1] * b.num)
            dpow.append(dpow[-1] * b.den)
        num_pows[i] = npow
        den_pows[i] = dpow
    total = _ZERO_POLY
    for mono, c in p.terms.items():
        rest = list(mono)
        piece = None
        for i in active:
            e = rest[i]
            rest[i] = 0
            factor = num_pows[i][e] * den_pows[i][maxes[i] - e]
            piece = factor if piece is None else piece * factor
        piece = piece.scale(c) if piece is not None else SparsePoly.const(c)
        base = SparsePoly._make({tuple(rest): 1})
        if base.terms != {_ZERO_MONO: 1}:
            piece = piece * base
        total = total + piece
    common_den = _ONE_POLY
    for i in active:
        common_den = common_den * den_pows[i][maxes[i]]
    return RatFun(total, common_den)


def substitute(f: SparsePoly | RatFun, bindings: Mapping) -> RatFun:
    """Exact simultaneous substitution; unbound generators map to themselves.

    Binding values may be RatFun, SparsePoly, int or Fraction.  Raises
    :class:`DenominatorVanishes` if the composed denominator is
    identically zero.
    """
    rb: dict[int, RatFun] = {}
    for g, v in bindings.items():
        r = _to_ratfun(v)
        if r is None:
            raise TypeError(f"cannot bind generator to {type(v).__name__}")
        rb[int(g)] = r
    if isinstance(f, SparsePoly):
        return _substitute_poly(f, rb)
    num_sub = _substitute_poly(f.num, rb)
    den_sub = _substitute_poly(f.den, rb)
    if den_sub.num.is_zero:
        raise DenominatorVanishes("denominator becomes identically zero under substitution")
    return num_sub / den_sub


def total_degree(p: SparsePoly, gens: Iterable[Gen | int] | None = None) -> int:
    return p.total_degree(gens)


# Left side of the parameter constraint a0 + 2 a1 + 3 a2 + 2 a3 + a4 = 1.
RELATION_WEIGHTS = (1, 2, 3, 2, 1)


def relation_poly() -> SparsePoly:
    """a0 + 2 a1 + 3 a2 + 2 a3 + a4 - 1."""
    p = SparsePoly.const(-1)
    for g, wgt in zip(PARAM_GENS, RELATION_WEIGHTS):
        p = p + SparsePoly.gen(g).scale(wgt)
    return p


def reduce_mod_relation(f: RatFun | SparsePoly) -> RatFun:
    """Eliminate a0 via a0 = 1 - 2 a1 - 3 a2 - 2 a3 - a4.

    a0 has unit coefficient in the constraint, so no new denominators are
    introduced; the result never mentions a0.
    """
    rep = SparsePoly.const(1)
    for g, wgt in zip(PARAM_GENS[1:], RELATION_WEIGHTS[1:]):
        rep = rep - SparsePoly.gen(g).scale(wgt)
    return substitute(f, {Gen.A0: rep})


# --- textual serialization ------------------------------------------------


def _format_coeff(c: Coeff) -> str:
    f = Fraction(c)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def format_poly(p: SparsePoly) -> str:
    """Human-readable infix form, deterministic (descending lex term order)."""
    if p.is_zero:
        return "0"
    parts: list[str] = []
    for mono, c in p.sorted_terms():
        f = Fraction(c)
        mag = abs(f)
        factors = []
        for i, e in enumerate(mono):
            if e == 1:
                factors.append(_GEN_LABELS[i])
            elif e > 1:
                factors.append(f"{_GEN_LABELS[i]}^{e}")
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{_format_coeff(mag)}*{body}"
        else:
            body = _format_coeff(mag)
        if not parts:
            parts.append(body if f > 0 else f"-{body}")
        else:
            parts.append(f"+ {body}" if f > 0 else f"- {body}")
    return " ".join(parts)


def format_ratfun(f: RatFun) -> str:
    if f.den == _ONE_POLY:
        return format_poly(f.num)
    return f"({format_poly(f.num)})/({format_poly(f.den)})"


class _Tokenizer:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.tok: tuple[str, str] | None = None
        self.advance()

    def advance(self) -> None:
        s, i = self.text, self.pos
        while i < len(s) and s[i].isspace():
            i += 1
        if i >= len(s):
            self.tok = ("end", "")
            self.pos = i
            return
        ch = s[i]
        if ch.isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            self.tok = ("num", s[i:j])
            self.pos = j
        elif ch.isalpha():
            j = i
            while j < len(s) and (s[j].isalnum() or s[j] == "_"):
                j += 1
            self.tok = ("name", s[i:j])
            self.pos = j
        elif ch in "+-*/^()":
            self.tok = ("op", ch)
            self.pos = i + 1
        else:
            raise ParseError(f"unexpected character {ch!r} at position {i}")


def _parse_expr(tz: _Tokenizer) -> RatFun:
    acc = _parse_term(tz)
    while tz.tok == ("op", "+") or tz.tok == ("op", "-"):
        op = tz.tok[1]
        tz.advance()
        rhs = _parse_term(tz)
        acc = acc + rhs if op == "+" else acc - rhs
    return acc


def _parse_term(tz: _Tokenizer) -> RatFun:
    acc = _parse_unary(tz)
    while tz.tok == ("op", "*") or tz.tok == ("op", "/"):
        op = tz.tok[1]
        tz.advance()
        rhs = _parse_unary(tz)
        if op == "*":
            acc = acc * rhs
        else:
            if rhs.is_zero:
                raise ParseError("division by zero")
            acc = acc / rhs
    return acc


def _parse_unary(tz: _Tokenizer) -> RatFun:
    sign = 1
    while tz.tok == ("op", "-") or tz.tok == ("op", "+"):
        if tz.tok[1] == "-":
            sign = -sign
        tz.advance()
    f = _parse_factor(tz)
    return f if sign > 0 else -f


def _parse_factor(tz: _Tokenizer) -> RatFun:
    kind, val = tz.tok
    if kind == "num":
        base = RatFun.const(int(val))
        tz.advance()
    elif kind == "name":
        g = _LABEL_TO_GEN.get(val)
        if g is None:
            raise ParseError(f"unknown generator {val!r}")
        base = RatFun.gen(g)
        tz.advance()
    elif tz.tok == ("op", "("):
        tz.advance()
        base = _parse_expr(tz)
        if tz.tok != ("op", ")"):
            raise ParseError("expected ')'")
        tz.advance()
    else:
        raise ParseError(f"unexpected token {val!r}")
    if tz.tok == ("op", "^"):
        tz.advance()
        kind, val = tz.tok
        if kind != "num":
            raise ParseError("exponent must be a non-negative integer")
        base = base ** int(val)
        tz.advance()
    return base


def parse_ratfun(text: str) -> RatFun:
    """Parse the grammar emitted by :func:`format_ratfun` (and more)."""
    tz = _Tokenizer(text)
    f = _parse_expr(tz)
    if tz.tok != ("end", ""):
        raise ParseError(f"trailing input at position {tz.pos}")
    return f


def parse_poly(text: str) -> SparsePoly:
    f = parse_ratfun(text)
    if not f.is_polynomial:
        raise ParseError("input is not a polynomial")
    return f.num


# convenience generator singletons
x = SparsePoly.gen(Gen.X)
y = SparsePoly.gen(Gen.Y)
z = SparsePoly.gen(Gen.Z)
w = SparsePoly.gen(Gen.W)
t = SparsePoly.gen(Gen.T)
a0 = SparsePoly.gen(Gen.A0)
a1 = SparsePoly.gen(Gen.A1)
a2 = SparsePoly.gen(Gen.A2)
a3 = SparsePoly.gen(Gen.A3)
a4 = SparsePoly.gen(Gen.A4)

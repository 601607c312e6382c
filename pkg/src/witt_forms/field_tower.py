"""Iterated Laurent series fields ``B((t1))((t2))...((th))``.

Elements are exact rational functions in the tower variables with rational
coefficients.  Inside ``B((t1))...((th))`` the outermost variable ``th`` is
infinitely smaller than every power of the inner ones, so leading terms,
valuations and signs are all read off the monomial that is minimal in the
anti-lexicographic order (last exponent most significant).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

from sympy.polys.domains import QQ
from sympy.polys.orderings import lex
from sympy.polys.rings import PolyElement, PolyRing

from .errors import DivisionByZero, FieldMismatch, ZeroElement

__all__ = [
    "Base",
    "FieldTower",
    "FieldElement",
    "Ordering",
    "ValueVector",
    "sign_at",
    "valuation",
    "leading_unit_residue",
    "split_unit",
    "enumerate_orderings",
    "is_square",
    "leading_term",
]


class Base(enum.Enum):
    RATIONALS = "Q"
    REAL_CLOSED = "R"


@lru_cache(maxsize=None)
def _ring(variables: tuple[str, ...]) -> PolyRing:
    return PolyRing(variables, QQ, lex)


def _qq(value) -> object:
    f = Fraction(value)
    return QQ(f.numerator, f.denominator)


def _to_fraction(c) -> Fraction:
    return Fraction(int(c.numerator), int(c.denominator))


def _anti_lex(monomial: tuple[int, ...]) -> tuple[int, ...]:
    return monomial[::-1]


def _lead(p: PolyElement) -> tuple[tuple[int, ...], object]:
    mono = min(p.keys(), key=_anti_lex)
    return mono, p[mono]


@dataclass(frozen=True)
class FieldTower:
    """The field ``base((variables[0]))...((variables[-1]))``."""

    base: Base
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        if any(not v for v in self.variables):
            raise ValueError("variable names must be nonempty")
        if len(set(self.variables)) != len(self.variables):
            raise ValueError(f"duplicate tower variables: {self.variables}")

    @property
    def height(self) -> int:
        return len(self.variables)

    @property
    def ring(self) -> PolyRing:
        return _ring(self.variables)

    def subtower(self, var: str | None = None) -> "FieldTower":
        """Tower with ``var`` (default: the outermost variable) removed."""
        if not self.variables:
            raise ValueError("tower of height 0 has no subtower")
        var = self.variables[-1] if var is None else var
        return FieldTower(self.base, tuple(v for v in self.variables if v != var))

    def __call__(self, value) -> "FieldElement":
        """Coerce an int, Fraction, variable name or element into the tower."""
        if isinstance(value, FieldElement):
            if value.tower != self:
                raise FieldMismatch(f"{value.tower} vs {self}")
            return value
        if isinstance(value, str):
            return self.var(value)
        return FieldElement(self, self.ring.ground_new(_qq(value)), self.ring.one)

    def var(self, name: str) -> "FieldElement":
        idx = self.variables.index(name)
        return FieldElement(self, self.ring.gens[idx], self.ring.one)

    def gens(self) -> tuple["FieldElement", ...]:
        return tuple(self.var(v) for v in self.variables)

    @cached_property
    def zero(self) -> "FieldElement":
        return self(0)

    @cached_property
    def one(self) -> "FieldElement":
        return self(1)

    def monomial(self, exponents: Sequence[int], coeff=1) -> "FieldElement":
        e = FieldElement(self, self.ring.ground_new(_qq(coeff)), self.ring.one)
        for name, k in zip(self.variables, exponents):
            e = e * self.var(name) ** k
        return e

    def __str__(self) -> str:
        if not self.variables:
            return self.base.value
        return f"{self.base.value}[[{','.join(self.variables)}]]"


def _cancel(num: PolyElement, den: PolyElement) -> tuple[PolyElement, PolyElement]:
    if den == 1:
        return num, den
    g = num.gcd(den)
    if g == 1:
        return num, den
    return num.exquo(g), den.exquo(g)


def _monic_den(tower: "FieldTower", num: PolyElement, den: PolyElement) -> "FieldElement":
    _, c = _lead(den)
    if c != 1:
        num, den = num.quo_ground(c), den.quo_ground(c)
    return FieldElement(tower, num, den, reduced=True)


class FieldElement:
    """An element of a :class:`FieldTower` in reduced-fraction normal form.

    ``num`` and ``den`` are coprime polynomials; the coefficient of the
    anti-lex minimal monomial of ``den`` is 1.  Two elements are equal exactly
    when their normal forms coincide.
    """

    __slots__ = ("tower", "num", "den", "_hash")

    def __init__(self, tower: FieldTower, num: PolyElement, den: PolyElement, *, reduced=False):
        if not den:
            raise DivisionByZero("zero denominator")
        if not num:
            num, den = tower.ring.zero, tower.ring.one
        elif not reduced:
            _, num, den = num.cofactors(den)
            _, c = _lead(den)
            if c != 1:
                num = num.quo_ground(c)
                den = den.quo_ground(c)
        self.tower = tower
        self.num = num
        self.den = den
        self._hash = None

    # -- coercion -------------------------------------------------------
    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.tower != self.tower:
                raise FieldMismatch(f"{self.tower} vs {other.tower}")
            return other
        if isinstance(other, (int, Fraction)):
            return self.tower(other)
        return NotImplemented

    # -- arithmetic -----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num:
            return o
        if not o.num:
            return self
        if self.den == o.den:
            if self.den == 1:
                return FieldElement(self.tower, self.num + o.num, self.den, reduced=True)
            return FieldElement(self.tower, self.num + o.num, self.den)
        return FieldElement(self.tower, self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return FieldElement(self.tower, -self.num, self.den, reduced=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num or not o.num:
            return self.tower.zero
        if self.den == 1 and o.den == 1:
            return FieldElement(self.tower, self.num * o.num, self.den, reduced=True)
        # cross-cancel: the product of reduced fractions stays reduced
        a_num, b_den = _cancel(self.num, o.den)
        b_num, a_den = _cancel(o.num, self.den)
        return _monic_den(self.tower, a_num * b_num, a_den * b_den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.num:
            raise DivisionByZero("inverse of zero")
        return FieldElement(self.tower, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(self.tower, self.num**k, self.den**k, reduced=True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = self.tower(other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.tower == other.tower and self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.tower, frozenset(self.num.items()), frozenset(self.den.items())))
        return self._hash

    # -- inspection -----------------------------------------------------
    def is_constant(self) -> bool:
        return self.num.is_ground and self.den.is_ground

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not a constant")
        return _to_fraction(self.num.LC if self.num else QQ(0)) / _to_fraction(self.den.LC)

    def is_monomial(self) -> bool:
        return len(self.num) == 1 and len(self.den) == 1

    def __str__(self) -> str:
        n = format_poly(self.num, self.tower.variables)
        if self.den == self.tower.ring.one:
            return n
        d = format_poly(self.den, self.tower.variables)
        if len(self.num) > 1:
            n = f"({n})"
        if len(self.den) > 1 or not self.den.is_ground:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"FieldElement({self}; {self.tower})"


def format_poly(p: PolyElement, variables: Sequence[str]) -> str:
    """Render a polynomial in the element grammar; terms ordered by anti-lex."""
    if not p:
        return "0"
    parts = []
    for mono in sorted(p.keys(), key=_anti_lex):
        c = _to_fraction(p[mono])
        factors = [v if k == 1 else f"{v}^{k}" for v, k in zip(variables, mono) if k]
        mag = abs(c)
        if not factors:
            body = str(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = f"{mag}*" + "*".join(factors)
        parts.append(("-" if c < 0 else "+", body))
    sign, body = parts[0]
    out = ("-" if sign == "-" else "") + body
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


class ValueVector(tuple):
    """A value in ``Q^h`` ordered anti-lexicographically (last coordinate first)."""

    def __new__(cls, coords: Iterable = ()):
        return super().__new__(cls, (Fraction(c) for c in coords))

    def _key(self):
        return tuple(reversed(self))

    def __lt__(self, other):
        return self._key() < ValueVector(other)._key()

    def __le__(self, other):
        return self._key() <= ValueVector(other)._key()

    def __gt__(self, other):
        return self._key() > ValueVector(other)._key()

    def __ge__(self, other):
        return self._key() >= ValueVector(other)._key()

    def __eq__(self, other):
        return tuple.__eq__(self, tuple(other)) if isinstance(other, tuple) else NotImplemented

    def __ne__(self, other):
        eq = self.__eq__(other)
        return eq if eq is NotImplemented else not eq

    __hash__ = tuple.__hash__

    def __add__(self, other):
        return ValueVector(a + b for a, b in zip(self, other, strict=True))

    def __sub__(self, other):
        return ValueVector(a - b for a, b in zip(self, other, strict=True))

    def __neg__(self):
        return ValueVector(-a for a in self)

    def scale(self, c) -> "ValueVector":
        return ValueVector(Fraction(c) * a for a in self)

    def is_integral(self) -> bool:
        return all(a.denominator == 1 for a in self)

    def __repr__(self):
        return "(" + ", ".join(str(a) for a in self) + ")"


@dataclass(frozen=True)
class Ordering:
    """One ordering of a tower field: each tower variable is a positive or
    negative infinitesimal.  Both supported bases carry a unique ordering."""

    tower: FieldTower
    signs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "signs", tuple(int(s) for s in self.signs))
        if len(self.signs) != self.tower.height or any(s not in (1, -1) for s in self.signs):
            raise ValueError(f"bad sign vector {self.signs} for {self.tower}")

    @property
    def base(self) -> Base:
        return self.tower.base

    def label(self) -> str:
        inner = ",".join(f"{v}{'>' if s > 0 else '<'}0" for v, s in zip(self.tower.variables, self.signs))
        return f"({inner})"

    def __str__(self):
        return self.label()


def enumerate_orderings(tower: FieldTower) -> list[Ordering]:
    """All ``2**h`` orderings, in a fixed order (``+`` before ``-``, inner variable slowest)."""
    return [Ordering(tower, s) for s in itertools.product((1, -1), repeat=tower.height)]


def _poly_sign(p: PolyElement, signs: Sequence[int]) -> int:
    mono, c = _lead(p)
    s = 1 if c > 0 else -1
    for e, si in zip(mono, signs):
        if e % 2 and si < 0:
            s = -s
    return s


def sign_at(e: FieldElement, P: Ordering) -> int:
    """Sign of ``e`` at the ordering ``P``; 0 for zero."""
    if e.tower != P.tower:
        raise FieldMismatch(f"{e.tower} vs {P.tower}")
    if not e:
        return 0
    return _poly_sign(e.num, P.signs) * _poly_sign(e.den, P.signs)


def leading_term(e: FieldElement) -> tuple[Fraction, tuple[int, ...]]:
    """Leading coefficient and exponent vector of ``e`` (exponents may be negative)."""
    if not e:
        raise ZeroElement("zero has no leading term")
    mn, cn = _lead(e.num)
    md, cd = _lead(e.den)
    return _to_fraction(cn) / _to_fraction(cd), tuple(a - b for a, b in zip(mn, md))


def valuation(e: FieldElement) -> ValueVector:
    if not e:
        raise ZeroElement("valuation of zero")
    return ValueVector(leading_term(e)[1])


def _low_part(p: PolyElement, idx: int, sub: PolyRing) -> tuple[int, PolyElement]:
    k = min(m[idx] for m in p.keys())
    terms = {m[:idx] + m[idx + 1:]: c for m, c in p.items() if m[idx] == k}
    return k, sub.from_dict(terms)


def split_unit(e: FieldElement, var: str | None = None) -> tuple[int, FieldElement]:
    """Write ``e = var**k * u`` with ``u`` a unit at ``var``; return ``k`` and the
    residue of ``u`` (``u`` at ``var = 0``), an element of the subtower."""
    if not e:
        raise ZeroElement("split of zero")
    tower = e.tower
    var = tower.variables[-1] if var is None else var
    idx = tower.variables.index(var)
    sub = tower.subtower(var)
    kn, pn = _low_part(e.num, idx, sub.ring)
    kd, pd = _low_part(e.den, idx, sub.ring)
    return kn - kd, FieldElement(sub, pn, pd)


def leading_unit_residue(e: FieldElement, var: str | None = None) -> FieldElement:
    return split_unit(e, var)[1]


def _is_rational_square(q: Fraction) -> bool:
    from math import isqrt

    if q <= 0:
        return False
    return isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def is_square(e: FieldElement) -> bool:
    """Whether ``e`` is a square in the (Henselian) iterated Laurent series field."""
    if not e:
        return True
    if e.tower.height == 0:
        q = e.constant_value()
        return q > 0 if e.tower.base is Base.REAL_CLOSED else _is_rational_square(q)
    k, u = split_unit(e)
    return k % 2 == 0 and is_square(u)

"""Diagonal quadratic forms over tower fields and the Witt ring ``W(F)``."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Callable, Iterable, Mapping, Sequence, Union

from sympy import primefactors

from ._linalg import congruence_diagonalize
from .errors import FieldMismatch, SingularForm, ZeroElement
from .field_tower import (
    Base,
    FieldElement,
    FieldTower,
    Ordering,
    enumerate_orderings,
    sign_at,
    split_unit,
)

__all__ = [
    "QuadraticForm",
    "SignKernel",
    "ModPKernel",
    "Fundamental",
    "WittRingPrimeIdeal",
    "diagonalize",
    "signature_at",
    "signature_vector",
    "springer_residues",
    "residue_profile",
    "is_witt_zero",
    "is_anisotropic",
    "hilbert_symbol",
    "INF",
    "fundamental_ideal_member",
    "prime_ideal_member",
    "is_torsion",
    "indicator_form",
    "realize_positive_pattern",
    "realize_vanishing_pattern",
]

INF = "inf"


@dataclass(frozen=True)
class QuadraticForm:
    """The diagonal form ``<a1, ..., an>``; Witt-ring addition is ``+`` and
    multiplication is ``*``."""

    tower: FieldTower
    entries: tuple[FieldElement, ...] = ()

    def __post_init__(self):
        entries = tuple(self.tower(e) for e in self.entries)
        if any(not e for e in entries):
            raise SingularForm("diagonal entries must be nonzero")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, tower: FieldTower, *entries) -> "QuadraticForm":
        return cls(tower, tuple(entries))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def _check(self, other: "QuadraticForm"):
        if other.tower != self.tower:
            raise FieldMismatch(f"{self.tower} vs {other.tower}")

    def __add__(self, other):
        if not isinstance(other, QuadraticForm):
            return NotImplemented
        self._check(other)
        return QuadraticForm(self.tower, self.entries + other.entries)

    def __neg__(self):
        return QuadraticForm(self.tower, tuple(-e for e in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, QuadraticForm):
            self._check(other)
            return QuadraticForm(self.tower, tuple(a * b for a in self.entries for b in other.entries))
        if isinstance(other, int):
            return QuadraticForm(self.tower, self.entries * other) if other >= 0 else (-self) * (-other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, int):
            return self * other
        return NotImplemented

    def scaled(self, a) -> "QuadraticForm":
        a = self.tower(a)
        return QuadraticForm(self.tower, tuple(a * e for e in self.entries))

    def __str__(self):
        return "<" + ", ".join(str(e) for e in self.entries) + ">"


@dataclass(frozen=True)
class SignKernel:
    ordering: Ordering


@dataclass(frozen=True)
class ModPKernel:
    ordering: Ordering
    p: int

    def __post_init__(self):
        if self.p <= 2 or primefactors(self.p) != [self.p]:
            raise ValueError(f"ModPKernel needs an odd prime, got {self.p}")


@dataclass(frozen=True)
class Fundamental:
    pass


WittRingPrimeIdeal = Union[SignKernel, ModPKernel, Fundamental]


def diagonalize(gram: Sequence[Sequence[FieldElement]]) -> QuadraticForm:
    if not gram:
        raise ValueError("empty Gram matrix has no field; build QuadraticForm(tower) instead")
    tower = gram[0][0].tower
    entries = congruence_diagonalize([[tower(e) for e in row] for row in gram])
    return QuadraticForm(tower, tuple(entries))


def signature_at(q: QuadraticForm, P: Ordering) -> int:
    return sum(sign_at(e, P) for e in q.entries)


def signature_vector(q: QuadraticForm) -> dict[Ordering, int]:
    return {P: signature_at(q, P) for P in enumerate_orderings(q.tower)}


def springer_residues(q: QuadraticForm) -> tuple[QuadraticForm, QuadraticForm]:
    """First and second residue forms with respect to the outermost variable."""
    if q.tower.height == 0:
        raise ValueError("Springer residues need a tower of height >= 1")
    sub = q.tower.subtower()
    even, odd = [], []
    for e in q.entries:
        k, u = split_unit(e)
        (odd if k % 2 else even).append(u)
    return QuadraticForm(sub, tuple(even)), QuadraticForm(sub, tuple(odd))


def residue_profile(q: QuadraticForm) -> dict[tuple[int, ...], QuadraticForm]:
    """Iterated residue forms over the base field, keyed by the parity of each
    variable's exponent (innermost first); empty residues are omitted."""
    if q.tower.height == 0:
        return {(): q} if q.dim else {}
    first, second = springer_residues(q)
    out = {}
    for parity, r in ((0, first), (1, second)):
        for key, form in residue_profile(r).items():
            out[key + (parity,)] = form
    return out


# -- Hilbert symbols and the rational base --------------------------------

def _vp(n: int, p: int) -> int:
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def _split_p(a: Fraction, p: int) -> tuple[int, int]:
    """``a = p**alpha * u`` with ``u`` a p-adic unit; returns ``alpha`` and ``u`` as an
    integer residue modulo ``8`` (``p == 2``) or ``p``."""
    num, den = a.numerator, a.denominator
    alpha = _vp(abs(num), p) - _vp(den, p)
    un = num // p ** _vp(abs(num), p)
    ud = den // p ** _vp(den, p)
    mod = 8 if p == 2 else p
    return alpha, (un * pow(ud, -1, mod)) % mod


def _legendre(u: int, p: int) -> int:
    return 1 if pow(u, (p - 1) // 2, p) == 1 else -1


def hilbert_symbol(a, b, place) -> int:
    """The Hilbert symbol ``(a, b)_place`` of nonzero rationals; ``place`` is a
    prime or :data:`INF`."""
    a, b = Fraction(a), Fraction(b)
    if not a or not b:
        raise ZeroElement("Hilbert symbol of zero")
    if place == INF or place == math.inf:
        return -1 if a < 0 and b < 0 else 1
    p = int(place)
    if p < 2:
        raise ValueError(f"bad place {place!r}")
    alpha, u = _split_p(a, p)
    beta, v = _split_p(b, p)
    if p == 2:
        eps = lambda w: ((w - 1) // 2) % 2
        omega = lambda w: ((w * w - 1) // 8) % 2
        e = eps(u) * eps(v) + alpha * omega(v) + beta * omega(u)
        return -1 if e % 2 else 1
    s = -1 if (alpha * beta * (p - 1) // 2) % 2 else 1
    if beta % 2:
        s *= _legendre(u, p)
    if alpha % 2:
        s *= _legendre(v, p)
    return s


def _hasse(entries: Sequence[Fraction], p) -> int:
    s = 1
    for i in range(len(entries)):
        for j in range(i + 1, len(entries)):
            s *= hilbert_symbol(entries[i], entries[j], p)
    return s


def _rational_hyperbolic(entries: Sequence[Fraction]) -> bool:
    n = len(entries)
    if n % 2:
        return False
    if sum(1 if a > 0 else -1 for a in entries):
        return False
    disc = reduce(lambda x, y: x * y, entries, Fraction(1)) * (-1) ** (n // 2)
    if not _square_q(disc):
        return False
    hyper = [Fraction(1), Fraction(-1)] * (n // 2)
    primes = {2}
    for a in entries:
        primes.update(primefactors(a.numerator))
        primes.update(primefactors(a.denominator))
    return all(_hasse(entries, p) == _hasse(hyper, p) for p in sorted(primes))


def _square_q(q: Fraction) -> bool:
    from math import isqrt

    return q > 0 and isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def is_witt_zero(q: QuadraticForm) -> bool:
    """Whether ``q`` is hyperbolic: recursive Springer descent to the base."""
    if q.tower.height:
        first, second = springer_residues(q)
        return is_witt_zero(first) and is_witt_zero(second)
    values = [e.constant_value() for e in q.entries]
    if q.tower.base is Base.REAL_CLOSED:
        return sum(1 if a > 0 else -1 for a in values) == 0
    return _rational_hyperbolic(values)


def _local_square(a: Fraction, p: int) -> bool:
    alpha, u = _split_p(a, p)
    if alpha % 2:
        return False
    return u % 8 == 1 if p == 2 else _legendre(u, p) == 1


def _rational_anisotropic(entries: Sequence[Fraction]) -> bool:
    """Hasse-Minkowski with the local isotropy criteria by dimension."""
    n = len(entries)
    if n == 0 or n == 1:
        return True
    if all(a > 0 for a in entries) or all(a < 0 for a in entries):
        return True
    if n >= 5:
        return False
    d = reduce(lambda x, y: x * y, entries, Fraction(1))
    if n == 2:
        return not _square_q(-d)
    primes = {2}
    for a in entries:
        primes.update(primefactors(a.numerator))
        primes.update(primefactors(a.denominator))
    for p in sorted(primes):
        eps = _hasse(entries, p)
        if n == 3 and hilbert_symbol(-1, -d, p) != eps:
            return True
        if n == 4 and _local_square(d, p) and eps != hilbert_symbol(-1, -1, p):
            return True
    return False


def is_anisotropic(q: QuadraticForm) -> bool:
    """No nontrivial zero.  Over a Laurent tower a form is anisotropic exactly
    when both Springer residues are."""
    if q.tower.height:
        return all(is_anisotropic(r) for r in springer_residues(q))
    values = [e.constant_value() for e in q.entries]
    if q.tower.base is Base.REAL_CLOSED:
        return all(a > 0 for a in values) or all(a < 0 for a in values)
    return _rational_anisotropic(values)


# -- ideals and torsion ---------------------------------------------------

def fundamental_ideal_member(q: QuadraticForm) -> bool:
    return q.dim % 2 == 0


def prime_ideal_member(q: QuadraticForm, ideal: WittRingPrimeIdeal) -> bool:
    if isinstance(ideal, SignKernel):
        return signature_at(q, ideal.ordering) == 0
    if isinstance(ideal, ModPKernel):
        return signature_at(q, ideal.ordering) % ideal.p == 0
    if isinstance(ideal, Fundamental):
        return fundamental_ideal_member(q)
    raise TypeError(f"not a prime ideal of W(F): {ideal!r}")


def is_torsion(q: QuadraticForm) -> bool:
    return all(v == 0 for v in signature_vector(q).values())


# -- sign pattern realization ---------------------------------------------

def indicator_form(P: Ordering) -> QuadraticForm:
    """``(x) <1, s_i t_i>`` over the tower variables; signature ``2**h`` at ``P``
    and 0 at every other ordering."""
    F = P.tower
    q = QuadraticForm(F, (F.one,))
    for name, s in zip(F.variables, P.signs):
        q = q * QuadraticForm(F, (F.one, F.var(name) * s))
    return q


def _pattern(f, orderings) -> dict[Ordering, int]:
    if callable(f):
        return {P: f(P) for P in orderings}
    return {P: f[P] for P in orderings}


def realize_positive_pattern(F: FieldTower, f: Mapping[Ordering, int] | Callable[[Ordering], int]) -> QuadraticForm:
    """A form whose signature has sign ``f(P)`` at every ordering."""
    orderings = enumerate_orderings(F)
    pat = _pattern(f, orderings)
    if any(v not in (1, -1) for v in pat.values()):
        raise ValueError("sign pattern values must be +1 or -1")
    if all(v == 1 for v in pat.values()):
        return QuadraticForm(F, (F.one,))
    if all(v == -1 for v in pat.values()):
        return QuadraticForm(F, (-F.one,))
    q = QuadraticForm(F)
    for P in orderings:
        ind = indicator_form(P)
        q = q + (ind if pat[P] == 1 else -ind)
    return q


def realize_vanishing_pattern(F: FieldTower, U: Iterable[Ordering]) -> QuadraticForm:
    """A form whose signature vanishes exactly on ``U``."""
    U = set(U)
    q = QuadraticForm(F)
    for P in enumerate_orderings(F):
        if P not in U:
            q = q + indicator_form(P)
    return q

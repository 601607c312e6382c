"""Seeded random elements, forms and Gram matrices for property checks."""
from __future__ import annotations

import random
from fractions import Fraction

from .algebras_involutions import AlgebraElement, AlgebraWithInvolution, involve, nrd, sym_basis
from .errors import NonInvertible, SingularForm, UnsupportedAlgebraShape
from .field_tower import FieldElement, FieldTower
from .hermitian_signatures import HermitianForm
from .quadratic_witt import QuadraticForm

__all__ = [
    "rng",
    "random_element",
    "random_quadratic_form",
    "random_symmetric_unit",
    "random_hermitian_form",
    "random_hermitian_gram",
]


def rng(seed: int | None = 0) -> random.Random:
    return random.Random(seed)


def _coeff(r: random.Random, bound: int) -> Fraction:
    num = 0
    while not num:
        num = r.randint(-bound, bound)
    return Fraction(num, r.choice((1, 1, 1, 2, 3)))


def _poly(F: FieldTower, r: random.Random, terms: int, degree: int, bound: int) -> FieldElement:
    out = F.zero
    for _ in range(terms):
        exps = [r.randint(0, degree) for _ in F.variables]
        out = out + F.monomial(exps, _coeff(r, bound))
    return out


def random_element(F: FieldTower, r: random.Random, terms: int = 3, degree: int = 2, bound: int = 5,
                   denominators: bool = True) -> FieldElement:
    """A nonzero rational function: a short polynomial times a monomial
    (possibly with negative exponents), divided by ``1 + ...`` about half the
    time when ``denominators`` is set."""
    while True:
        num = _poly(F, r, r.randint(1, terms), degree, bound)
        if num:
            break
    shift = F.monomial([r.randint(-1, 1) for _ in F.variables])
    value = num * shift
    if denominators and F.variables and r.random() < 0.5:
        den = F.one + _poly(F, r, 1, degree, bound) * F.var(r.choice(F.variables))
        if den:
            value = value / den
    return value


def random_quadratic_form(F: FieldTower, r: random.Random, max_dim: int = 4, **kw) -> QuadraticForm:
    return QuadraticForm(F, tuple(random_element(F, r, **kw) for _ in range(r.randint(1, max_dim))))


def random_symmetric_unit(A: AlgebraWithInvolution, r: random.Random, **kw) -> AlgebraElement:
    basis = sym_basis(A)
    while True:
        u = A.zero
        for e in basis:
            if r.random() < 0.6:
                u = u + e * random_element(A.tower, r, **kw)
        if u and nrd(u):
            return u


def random_hermitian_form(A: AlgebraWithInvolution, r: random.Random, max_rank: int = 3, **kw) -> HermitianForm:
    return HermitianForm(A, tuple(random_symmetric_unit(A, r, **kw) for _ in range(r.randint(1, max_rank))))


def random_hermitian_gram(A: AlgebraWithInvolution, r: random.Random, n: int, **kw) -> list[list[AlgebraElement]]:
    """An invertible ``n x n`` hermitian matrix over ``A`` (retries until the
    congruence diagonalization succeeds)."""
    from .algebras_involutions import hermitian_diagonalize

    while True:
        g = [[A.zero] * n for _ in range(n)]
        for p in range(n):
            g[p][p] = random_symmetric_unit(A, r, **kw)
            for q in range(p + 1, n):
                u = A.zero
                if r.random() < 0.7:
                    u = A.element([random_element(A.tower, r, **kw) if r.random() < 0.5 else A.tower.zero
                                   for _ in range(A.dim)])
                g[p][q] = u
                g[q][p] = involve(u)
        try:
            hermitian_diagonalize(A, g)
        except (SingularForm, NonInvertible, UnsupportedAlgebraShape):
            continue
        return g

"""Division algebras with involution over tower fields.

Three shapes are supported: the field itself with the identity, a quadratic
extension ``F(sqrt d)`` with conjugation, and a quaternion algebra
``(a, b)_F`` with basis ``1, i, j, k`` (``i^2 = a``, ``j^2 = b``,
``ij = k = -ji``) carrying either quaternion conjugation or ``Int(s)`` composed
with it for a pure quaternion ``s``.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from ._linalg import congruence_diagonalize, nullspace
from .errors import FieldMismatch, NonInvertible, SingularForm, UnsupportedAlgebraShape, ZeroElement
from .field_tower import (
    FieldElement,
    FieldTower,
    Ordering,
    ValueVector,
    enumerate_orderings,
    is_square,
    sign_at,
    valuation,
)
from .quadratic_witt import QuadraticForm, is_witt_zero


class AlgebraKind(enum.Enum):
    BASE = "base"
    ETALE = "etale"
    QUATERNION = "quat"


class InvolutionType(enum.Enum):
    ORTHOGONAL = "orthogonal"
    SYMPLECTIC = "symplectic"
    UNITARY = "unitary"


_BASIS_NAMES = {
    AlgebraKind.BASE: ("1",),
    AlgebraKind.ETALE: ("1", "w"),
    AlgebraKind.QUATERNION: ("1", "i", "j", "k"),
}


@dataclass(frozen=True, eq=True)
class AlgebraWithInvolution:
    """A division algebra ``D`` over ``tower`` with an involution.

    Use the :func:`base_algebra`, :func:`etale_algebra` and
    :func:`quaternion_algebra` constructors.  For the orthogonal quaternion
    case ``orth_s`` holds the coordinates of the pure quaternion ``s`` of
    ``sigma = Int(s) o gamma``.
    """

    tower: FieldTower
    kind: AlgebraKind
    a: FieldElement | None = None
    b: FieldElement | None = None
    d: FieldElement | None = None
    orth_s: tuple[FieldElement, ...] | None = None

    @property
    def dim(self) -> int:
        return {AlgebraKind.BASE: 1, AlgebraKind.ETALE: 2, AlgebraKind.QUATERNION: 4}[self.kind]

    @property
    def involution_type(self) -> InvolutionType:
        if self.kind is AlgebraKind.ETALE:
            return InvolutionType.UNITARY
        if self.kind is AlgebraKind.QUATERNION and self.orth_s is None:
            return InvolutionType.SYMPLECTIC
        return InvolutionType.ORTHOGONAL

    @property
    def basis_names(self) -> tuple[str, ...]:
        return _BASIS_NAMES[self.kind]

    def element(self, coords: Sequence) -> "AlgebraElement":
        return AlgebraElement(self, tuple(self.tower(c) for c in coords))

    def scalar(self, c) -> "AlgebraElement":
        F = self.tower
        return self.element([F(c)] + [F.zero] * (self.dim - 1))

    def basis(self) -> tuple["AlgebraElement", ...]:
        F = self.tower
        return tuple(
            self.element([F.one if r == c else F.zero for c in range(self.dim)]) for r in range(self.dim)
        )

    @property
    def one(self) -> "AlgebraElement":
        return self.scalar(1)

    @property
    def zero(self) -> "AlgebraElement":
        return self.scalar(0)

    def gen(self, name: str) -> "AlgebraElement":
        return self.basis()[self.basis_names.index(name)]

    @cached_property
    def s(self) -> "AlgebraElement | None":
        return None if self.orth_s is None else AlgebraElement(self, self.orth_s)

    @cached_property
    def _s_inverse(self):
        return None if self.orth_s is None else self.s.inverse()

    def is_division(self) -> bool:
        if self.kind is AlgebraKind.BASE:
            return True
        if self.kind is AlgebraKind.ETALE:
            return not is_square(self.d)
        return not is_witt_zero(norm_form(self))

    def spec(self) -> str:
        """The algebra in the CLI grammar."""
        if self.kind is AlgebraKind.BASE:
            return "base"
        if self.kind is AlgebraKind.ETALE:
            return f"etale(d={self.d})"
        inv = "symp" if self.orth_s is None else f"orth({self.s})"
        return f"quat(a={self.a}, b={self.b}; inv={inv})"

    def __str__(self):
        return f"{self.spec()} over {self.tower}"


def base_algebra(F: FieldTower) -> AlgebraWithInvolution:
    return AlgebraWithInvolution(F, AlgebraKind.BASE)


def etale_algebra(F: FieldTower, d) -> AlgebraWithInvolution:
    """``F(sqrt d)`` with conjugation.  A square ``d`` is accepted: the algebra is
    then split (``F x F`` with the exchange involution) and every ordering is nil."""
    d = F(d)
    if not d:
        raise ZeroElement("d must be nonzero")
    return AlgebraWithInvolution(F, AlgebraKind.ETALE, d=d)


def quaternion_algebra(F: FieldTower, a, b, orthogonal=None) -> AlgebraWithInvolution:
    """``(a, b)_F`` with quaternion conjugation, or ``Int(s) o gamma`` when
    ``orthogonal`` gives the pure quaternion ``s`` (coordinates or element)."""
    a, b = F(a), F(b)
    if not a or not b:
        raise ZeroElement("a and b must be nonzero")
    if orthogonal is None:
        return AlgebraWithInvolution(F, AlgebraKind.QUATERNION, a=a, b=b)
    coords = orthogonal.coords if isinstance(orthogonal, AlgebraElement) else tuple(F(c) for c in orthogonal)
    if len(coords) != 4 or coords[0]:
        raise UnsupportedAlgebraShape("s must be a pure quaternion")
    alg = AlgebraWithInvolution(F, AlgebraKind.QUATERNION, a=a, b=b, orth_s=tuple(coords))
    if not nrd(alg.s):
        raise NonInvertible("s must be invertible")
    return alg


class AlgebraElement:
    __slots__ = ("algebra", "coords", "_hash")

    def __init__(self, algebra: AlgebraWithInvolution, coords: tuple[FieldElement, ...]):
        if len(coords) != algebra.dim:
            raise ValueError(f"expected {algebra.dim} coordinates")
        self.algebra = algebra
        self.coords = coords
        self._hash = None

    def _coerce(self, other):
        if isinstance(other, AlgebraElement):
            if other.algebra != self.algebra:
                raise FieldMismatch("elements of different algebras")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.algebra.scalar(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.algebra, tuple(a + b for a, b in zip(self.coords, o.coords)))

    __radd__ = __add__

    def __neg__(self):
        return AlgebraElement(self.algebra, tuple(-a for a in self.coords))

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
        if isinstance(other, (int, Fraction, FieldElement)):
            c = self.algebra.tower(other)
            return AlgebraElement(self.algebra, tuple(c * a for a in self.coords))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return AlgebraElement(self.algebra, _multiply(self.algebra, self.coords, o.coords))

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self * other
        return NotImplemented

    def inverse(self) -> "AlgebraElement":
        n = nrd(self)
        if not n:
            raise NonInvertible(f"{self} is not invertible")
        return _conj_norm(self) * n.inverse()

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self * self.algebra.tower(other).inverse()
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
        out = self.algebra.one
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __bool__(self):
        return any(self.coords)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            other = self.algebra.scalar(other)
        if not isinstance(other, AlgebraElement):
            return NotImplemented
        return self.algebra == other.algebra and self.coords == other.coords

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.algebra, self.coords))
        return self._hash

    def is_scalar(self) -> bool:
        return not any(self.coords[1:])

    def __str__(self):
        parts = []
        for c, name in zip(self.coords, self.algebra.basis_names):
            if not c:
                continue
            cs = str(c)
            bare = (c.is_monomial() or c.is_constant()) and "/" not in cs
            if name == "1":
                parts.append(cs if bare else f"({cs})")
            elif c == 1:
                parts.append(name)
            elif c == -1:
                parts.append(f"-{name}")
            else:
                parts.append(f"{cs}*{name}" if bare else f"({cs})*{name}")
        if not parts:
            return "0"
        out = parts[0]
        for p in parts[1:]:
            out += f" - {p[1:]}" if p.startswith("-") else f" + {p}"
        return out

    def __repr__(self):
        return f"AlgebraElement({self})"


def _multiply(A: AlgebraWithInvolution, u, v):
    if A.kind is AlgebraKind.BASE:
        return (u[0] * v[0],)
    if A.kind is AlgebraKind.ETALE:
        return (u[0] * v[0] + A.d * u[1] * v[1], u[0] * v[1] + u[1] * v[0])
    a, b = A.a, A.b
    a0, a1, a2, a3 = u
    b0, b1, b2, b3 = v
    return (
        a0 * b0 + a * a1 * b1 + b * a2 * b2 - a * b * a3 * b3,
        a0 * b1 + a1 * b0 - b * a2 * b3 + b * a3 * b2,
        a0 * b2 + a2 * b0 + a * a1 * b3 - a * a3 * b1,
        a0 * b3 + a3 * b0 + a1 * b2 - a2 * b1,
    )


def _conj_norm(u: AlgebraElement) -> AlgebraElement:
    """The canonical conjugate with ``conj(u) u = nrd(u)``."""
    A = u.algebra
    if A.kind is AlgebraKind.BASE:
        return AlgebraElement(A, (A.tower.one,))
    return AlgebraElement(A, (u.coords[0],) + tuple(-c for c in u.coords[1:]))


def algebra_arith(op: str, u: AlgebraElement, v: AlgebraElement | None = None) -> AlgebraElement:
    ops = {
        "add": lambda: u + v,
        "sub": lambda: u - v,
        "mul": lambda: u * v,
        "div": lambda: u / v,
        "neg": lambda: -u,
        "inv": lambda: u.inverse(),
    }
    return ops[op]()


def gamma(u: AlgebraElement) -> AlgebraElement:
    """Quaternion (or quadratic) conjugation."""
    A = u.algebra
    if A.kind is AlgebraKind.BASE:
        return u
    return AlgebraElement(A, (u.coords[0],) + tuple(-c for c in u.coords[1:]))


def involve(u: AlgebraElement) -> AlgebraElement:
    """Apply the algebra's involution."""
    A = u.algebra
    if A.kind is AlgebraKind.BASE:
        return u
    if A.orth_s is None:
        return gamma(u)
    return A.s * gamma(u) * A._s_inverse


def trd(u: AlgebraElement) -> FieldElement:
    if u.algebra.kind is AlgebraKind.BASE:
        return u.coords[0]
    return u.coords[0] * 2


def nrd(u: AlgebraElement) -> FieldElement:
    A = u.algebra
    c = u.coords
    if A.kind is AlgebraKind.BASE:
        return c[0]
    if A.kind is AlgebraKind.ETALE:
        return c[0] * c[0] - A.d * c[1] * c[1]
    return c[0] * c[0] - A.a * c[1] * c[1] - A.b * c[2] * c[2] + A.a * A.b * c[3] * c[3]


def norm_form(A: AlgebraWithInvolution) -> QuadraticForm:
    F = A.tower
    if A.kind is AlgebraKind.BASE:
        return QuadraticForm(F, (F.one,))
    if A.kind is AlgebraKind.ETALE:
        return QuadraticForm(F, (F.one, -A.d))
    return QuadraticForm(F, (F.one, -A.a, -A.b, A.a * A.b))


def is_symmetric(u: AlgebraElement) -> bool:
    return involve(u) == u


def sym_basis(A: AlgebraWithInvolution) -> list[AlgebraElement]:
    """An F-basis of the symmetric elements (for the unitary case: of the
    elements fixed by conjugation)."""
    if A.kind is not AlgebraKind.QUATERNION or A.orth_s is None:
        return [A.one]
    F = A.tower
    cols = [involve(e) - e for e in A.basis()]
    rows = [[cols[c].coords[r] for c in range(A.dim)] for r in range(A.dim)]
    return [A.element(v) for v in nullspace(rows, F.zero, F.one)]


# -- orderings ------------------------------------------------------------

def is_split_at(A: AlgebraWithInvolution, P: Ordering) -> bool:
    if A.kind is AlgebraKind.BASE:
        return True
    if A.kind is AlgebraKind.ETALE:
        return sign_at(A.d, P) > 0
    return sign_at(A.a, P) > 0 or sign_at(A.b, P) > 0


def is_nil(A: AlgebraWithInvolution, P: Ordering) -> bool:
    t = A.involution_type
    if A.kind is AlgebraKind.BASE:
        return False
    if t is InvolutionType.ORTHOGONAL:
        return not is_split_at(A, P)
    return is_split_at(A, P)


def nil_orderings(A: AlgebraWithInvolution) -> list[Ordering]:
    return [P for P in enumerate_orderings(A.tower) if is_nil(A, P)]


def non_nil_orderings(A: AlgebraWithInvolution) -> list[Ordering]:
    return [P for P in enumerate_orderings(A.tower) if not is_nil(A, P)]


# -- valuations -----------------------------------------------------------

@dataclass(frozen=True)
class QuaternionValuationData:
    value_group_basis: tuple[ValueVector, ...]
    index: int
    residue: str  # "base" when the residue algebra is the base field
    residue_degree: int


def _mod2_class(v: ValueVector) -> tuple[int, ...]:
    return tuple(int(c) % 2 for c in v)


def _check_valuation_shape(A: AlgebraWithInvolution):
    if A.kind is not AlgebraKind.QUATERNION:
        raise UnsupportedAlgebraShape("valuations are supported for quaternion algebras only")
    if not (A.a.is_monomial() and A.b.is_monomial()):
        raise UnsupportedAlgebraShape("a and b must be monomials times constants")
    ca, cb = _mod2_class(valuation(A.a)), _mod2_class(valuation(A.b))
    cab = tuple((x + y) % 2 for x, y in zip(ca, cb))
    if not any(ca) or not any(cb) or not any(cab):
        raise UnsupportedAlgebraShape("v(a), v(b) must be independent modulo 2*Gamma_F")


def _norm_terms(A):
    F = A.tower
    return (F.one, -A.a, -A.b, A.a * A.b)


def quaternion_valuation(u: AlgebraElement) -> ValueVector:
    """``v(u) = v(nrd u) / 2``, computed as half the minimum over the four
    norm terms (their values are pairwise distinct for the supported shape)."""
    A = u.algebra
    _check_valuation_shape(A)
    if not u:
        raise ZeroElement("valuation of zero")
    vals = [
        (valuation(c) + valuation(c)) + valuation(t)
        for c, t in zip(u.coords, _norm_terms(A))
        if c
    ]
    return min(vals).scale(Fraction(1, 2))


def dominant_coordinate(u: AlgebraElement) -> int:
    """Index of the basis coordinate attaining the valuation of ``u``."""
    A = u.algebra
    _check_valuation_shape(A)
    best = None
    for idx, (c, t) in enumerate(zip(u.coords, _norm_terms(A))):
        if c:
            v = valuation(c) + valuation(c) + valuation(t)
            if best is None or v < best[0]:
                best = (v, idx)
    if best is None:
        raise ZeroElement("zero element")
    return best[1]


def _hnf_rows(rows: list[list[int]]) -> list[list[int]]:
    from sympy import Matrix
    from sympy.matrices.normalforms import hermite_normal_form

    m = hermite_normal_form(Matrix(rows).T).T
    return [[int(x) for x in m.row(r)] for r in range(m.rows) if any(m.row(r))]


def valuation_data(A: AlgebraWithInvolution) -> QuaternionValuationData:
    _check_valuation_shape(A)
    h = A.tower.height
    vi = quaternion_valuation(A.gen("i"))
    vj = quaternion_valuation(A.gen("j"))
    # lattice in units of 1/2: Gamma_F = 2 Z^h plus 2 v(i), 2 v(j)
    rows = [[2 if r == c else 0 for c in range(h)] for r in range(h)]
    rows += [[int(2 * x) for x in vi], [int(2 * x) for x in vj]]
    basis = _hnf_rows(rows)
    det = 1
    for r, row in enumerate(basis):
        det *= row[r]
    index = 2**h // abs(det)
    basis_vv = tuple(ValueVector(Fraction(x, 2) for x in row) for row in basis)
    degree = 4 // index
    return QuaternionValuationData(basis_vv, index, "base" if degree == 1 else f"degree {degree}", degree)


def hermitian_diagonalize(A: AlgebraWithInvolution, gram: Sequence[Sequence[AlgebraElement]]) -> list[AlgebraElement]:
    """Symmetric invertible diagonal entries congruent to a hermitian Gram matrix."""
    g = [[e if isinstance(e, AlgebraElement) else A.scalar(e) for e in row] for row in gram]
    try:
        diag = congruence_diagonalize(g, involve)
    except NonInvertible as exc:
        raise UnsupportedAlgebraShape(f"algebra is not a division algebra: {exc}") from exc
    return diag

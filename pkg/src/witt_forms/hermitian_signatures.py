"""Hermitian forms over ``(D, sigma)`` and their M- and H-signatures.

M-signatures are realized through twisted trace forms
``x -> Trd(sigma(x) s x w)`` (summed over diagonal entries ``s``), with one
symmetric ``w`` fixed per ordering.  At a non-nil ordering ``P`` the signature
is ``n_P`` times an M-signature, ``n_P`` read off the splitting behaviour of
``D`` at ``P``.  H-signatures then fix the remaining sign with a tuple of
reference forms.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

from .algebras_involutions import (
    AlgebraElement,
    AlgebraKind,
    AlgebraWithInvolution,
    InvolutionType,
    dominant_coordinate,
    hermitian_diagonalize,
    involve,
    is_nil,
    is_split_at,
    nrd,
    sym_basis,
    trd,
    valuation_data,
)
from .errors import FieldMismatch, InvalidReferenceTuple, NoReferenceTuple, SingularForm, UnsupportedAlgebraShape
from .tristate import UNKNOWN, Unknown
from ._linalg import bareiss_pivots
from .field_tower import Base, FieldElement, Ordering, _lead, _poly_sign, enumerate_orderings, leading_term, sign_at
from .quadratic_witt import (
    QuadraticForm,
    diagonalize,
    is_witt_zero,
    realize_positive_pattern,
    realize_vanishing_pattern,
    signature_at,
)

__all__ = [
    "HermitianForm",
    "ReferenceTuple",
    "MatrixForm",
    "trace_form",
    "morita_constant",
    "trace_signature_at",
    "m_signature_at",
    "m_signature_vector",
    "is_reference_tuple",
    "default_reference_tuple",
    "h_signature_at",
    "total_h_signature",
    "single_reference",
    "twist_reference",
    "compare_references",
    "is_torsion",
    "is_hyperbolic",
    "jacobson_form",
    "morita_collapse",
    "matrix_m_signature_at",
    "morita_invariance_check",
    "larmour_residues",
]


@dataclass(frozen=True)
class HermitianForm:
    """The diagonal form ``<s1, ..., sn>_sigma`` with symmetric invertible entries."""

    algebra: AlgebraWithInvolution
    entries: tuple[AlgebraElement, ...] = ()

    def __post_init__(self):
        A = self.algebra
        entries = tuple(e if isinstance(e, AlgebraElement) else A.scalar(e) for e in self.entries)
        for e in entries:
            if e.algebra != A:
                raise FieldMismatch("entry from a different algebra")
            if involve(e) != e:
                raise ValueError(f"entry {e} is not symmetric")
            if not nrd(e):
                raise SingularForm(f"entry {e} is not invertible")
        object.__setattr__(self, "entries", entries)

    @classmethod
    def of(cls, algebra: AlgebraWithInvolution, *entries) -> "HermitianForm":
        return cls(algebra, tuple(entries))

    @property
    def rank(self) -> int:
        return len(self.entries)

    def __add__(self, other):
        if not isinstance(other, HermitianForm):
            return NotImplemented
        if other.algebra != self.algebra:
            raise FieldMismatch("forms over different algebras")
        return HermitianForm(self.algebra, self.entries + other.entries)

    def __neg__(self):
        return HermitianForm(self.algebra, tuple(-e for e in self.entries))

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, q):
        """``q * h`` for a quadratic form ``q`` (the W(F)-module action) or an int."""
        if isinstance(q, int):
            if q < 0:
                return (-self).__rmul__(-q)
            return HermitianForm(self.algebra, self.entries * q)
        if isinstance(q, QuadraticForm):
            if q.tower != self.algebra.tower:
                raise FieldMismatch("quadratic form over a different field")
            return HermitianForm(self.algebra, tuple(e * a for a in q.entries for e in self.entries))
        return NotImplemented

    def reduced(self) -> "HermitianForm":
        """Drop pairs ``s, -s`` (hyperbolic planes); same Witt class."""
        return HermitianForm(self.algebra, _cancel_pairs(self.entries))

    def __str__(self):
        return "<" + ", ".join(str(e) for e in self.entries) + ">"


def _cancel_pairs(entries):
    pending = Counter()
    out = []
    for e in entries:
        if pending[-e]:
            pending[-e] -= 1
        else:
            pending[e] += 1
    for e in entries:
        if pending[e]:
            pending[e] -= 1
            out.append(e)
    return tuple(out)


# -- trace forms ----------------------------------------------------------

def _trace_gram(s: AlgebraElement) -> list[list[FieldElement]]:
    basis = s.algebra.basis()
    left = [involve(e) * s for e in basis]
    return [[trd(l * e) for e in basis] for l in left]


def trace_form(h: HermitianForm) -> QuadraticForm:
    """The trace form of ``h`` over ``F``, diagonalized entry by entry."""
    q = QuadraticForm(h.algebra.tower)
    for s in h.entries:
        q = q + diagonalize(_trace_gram(s))
    return q


def _twisted_gram(s: AlgebraElement, w: AlgebraElement) -> list[list[FieldElement]]:
    basis = s.algebra.basis()
    left = [involve(e) * s for e in basis]
    return [[trd(l * e * w) for e in basis] for l in left]


@lru_cache(maxsize=256)
def _trace_tensor(A: AlgebraWithInvolution, w: AlgebraElement):
    """``K[a][b][c] = D^2 Trd(sigma(e_a) e_c e_b w)`` as polynomials, so the
    twisted Gram of ``<d>`` is ``sum_c d_c K[a][b][c]`` up to the square ``D^2``."""
    F = A.tower
    basis = A.basis()
    left = [involve(e) for e in basis]
    n = len(basis)
    K = [[[trd(left[a] * basis[c] * basis[b] * w) for c in range(n)] for b in range(n)] for a in range(n)]
    den = F.ring.one
    for plane in K:
        for row in plane:
            for k in row:
                den = den.lcm(k.den)
    square = FieldElement(F, den * den, F.ring.one, reduced=True)
    return tuple(tuple(tuple((k * square).num for k in row) for row in plane) for plane in K)


def _primitive_direction(s: AlgebraElement):
    """``s = c * d`` with ``d`` polynomial coordinates, coprime, and the first
    nonzero coordinate monic in its leading term."""
    ring = s.algebra.tower.ring
    den = ring.one
    for x in s.coords:
        den = den.lcm(x.den)
    nums = [x.num * den.exquo(x.den) if x else ring.zero for x in s.coords]
    g = ring.zero
    for v in nums:
        if v:
            g = v if not g else g.gcd(v)
    nums = [v.exquo(g) if v else v for v in nums]
    idx = next(n for n, v in enumerate(nums) if v)
    _, lc = _lead(nums[idx])
    nums = tuple(v.quo_ground(lc) for v in nums)
    c = s.coords[idx] / FieldElement(s.algebra.tower, nums[idx], ring.one)
    return c, nums


def _poly_signatures(gram, tower) -> tuple[int, ...]:
    """Signature at every ordering of a symmetric polynomial matrix
    (Jacobi: count sign agreements between consecutive leading minors)."""
    pivots = bareiss_pivots(gram, lambda a, b: a.exquo(b))
    out = []
    for P in enumerate_orderings(tower):
        prev, total = 1, 0
        for d in pivots:
            sd = _poly_sign(d, P.signs)
            total += sd * prev
            prev = sd
        out.append(total)
    return tuple(out)


def _contract(K, coords):
    n = len(K)
    ring_zero = coords[0] * 0
    gram = []
    for a in range(n):
        row = []
        for b in range(n):
            v = ring_zero
            for c, dc in enumerate(coords):
                if dc and K[a][b][c]:
                    v = v + dc * K[a][b][c]
            row.append(v)
        gram.append(row)
    return gram


def _twist_candidates(A: AlgebraWithInvolution):
    basis = sym_basis(A)
    yield A.one
    yield from basis
    for n, s in enumerate(basis):
        for t in basis[n + 1:]:
            yield s + t
            yield s - t


@lru_cache(maxsize=64)
def _twists(A: AlgebraWithInvolution) -> tuple[AlgebraElement | None, ...]:
    """Per ordering, a symmetric ``w`` making ``Trd(sigma(x) s x w)`` faithful.

    In a split model ``sigma`` is adjoint to a form ``Phi`` and the twisted trace
    form is ``(Phi s) (x) (w Phi^-1)``; the untwisted one (``w = 1``) vanishes
    identically wherever ``Phi`` is indefinite.  ``w`` is accepted when
    ``Trd(sigma(x) w x w)`` has nonzero signature at ``P``.
    """
    out = []
    for P in enumerate_orderings(A.tower):
        if is_nil(A, P):
            out.append(None)
            continue
        for w in _twist_candidates(A):
            if nrd(w) and signature_at(diagonalize(_twisted_gram(w, w)), P):
                out.append(w)
                break
        else:
            raise NoReferenceTuple(f"no twisting element found at {P}")
    return tuple(out)


@lru_cache(maxsize=8192)
def _direction_signatures(A: AlgebraWithInvolution, coords, w: AlgebraElement) -> tuple[int, ...]:
    return _poly_signatures(_contract(_trace_tensor(A, w), coords), A.tower)


def _entry_trace_signature(s: AlgebraElement, w: AlgebraElement, P: Ordering, idx: int) -> int:
    # T_<c d> = <c> (x) T_<d>, so only the primitive direction d is diagonalized
    c, direction = _primitive_direction(s)
    return sign_at(c, P) * _direction_signatures(s.algebra, direction, w)[idx]


def morita_constant(A: AlgebraWithInvolution, P: Ordering) -> int:
    """``n_P``: trace-form signature divided by M-signature; 0 at nil orderings."""
    if is_nil(A, P):
        return 0
    if A.kind is AlgebraKind.BASE:
        return 1
    if A.kind is AlgebraKind.ETALE:
        return 2
    if A.involution_type is InvolutionType.SYMPLECTIC:
        return 4
    return 2


def trace_signature_at(h: HermitianForm, P: Ordering) -> int:
    """Signature at ``P`` of the twisted trace form ``x -> Trd(sigma(x) h x w_P)``
    (0 at nil orderings, where no twist is fixed)."""
    idx = enumerate_orderings(h.algebra.tower).index(P)
    w = _twists(h.algebra)[idx]
    if w is None:
        return 0
    return sum(_entry_trace_signature(s, w, P, idx) for s in h.entries)


def m_signature_at(h: HermitianForm, P: Ordering) -> int:
    n = morita_constant(h.algebra, P)
    if not n:
        return 0
    total = trace_signature_at(h, P)
    if total % n:
        raise ArithmeticError(f"trace signature {total} not divisible by n_P={n} at {P}")
    return total // n


def m_signature_vector(h: HermitianForm) -> dict[Ordering, int]:
    return {P: m_signature_at(h, P) for P in enumerate_orderings(h.algebra.tower)}


# -- reference tuples and H-signatures ------------------------------------

@dataclass(frozen=True)
class ReferenceTuple:
    algebra: AlgebraWithInvolution
    forms: tuple[HermitianForm, ...]

    @classmethod
    def of(cls, forms: Sequence[HermitianForm], algebra: AlgebraWithInvolution | None = None) -> "ReferenceTuple":
        forms = tuple(forms)
        if algebra is None:
            if not forms:
                raise InvalidReferenceTuple("empty tuple needs an explicit algebra")
            algebra = forms[0].algebra
        if any(f.algebra != algebra for f in forms):
            raise InvalidReferenceTuple("reference forms over different algebras")
        return cls(algebra, forms)

    def __iter__(self):
        return iter(self.forms)

    def __len__(self):
        return len(self.forms)


def _as_tuple(H) -> ReferenceTuple:
    return H if isinstance(H, ReferenceTuple) else ReferenceTuple.of(H)


def is_reference_tuple(H, algebra: AlgebraWithInvolution | None = None) -> bool:
    H = ReferenceTuple.of(tuple(H), algebra) if not isinstance(H, ReferenceTuple) else H
    A = H.algebra
    for P in enumerate_orderings(A.tower):
        if is_nil(A, P):
            continue
        if not any(m_signature_at(h, P) for h in H.forms):
            return False
    return True


def default_reference_tuple(A: AlgebraWithInvolution) -> ReferenceTuple:
    """Rank-one forms ``<s>`` over a basis of symmetric elements, extended by
    ``<s + t>``, ``<s - t>`` if the basis alone does not cover every ordering."""
    return _default_reference_tuple(A)


@lru_cache(maxsize=64)
def _default_reference_tuple(A: AlgebraWithInvolution) -> ReferenceTuple:
    basis = sym_basis(A)
    forms = [HermitianForm(A, (s,)) for s in basis]
    H = ReferenceTuple(A, tuple(forms))
    if is_reference_tuple(H):
        return H
    for n, s in enumerate(basis):
        for t in basis[n + 1:]:
            for u in (s + t, s - t):
                if nrd(u):
                    forms.append(HermitianForm(A, (u,)))
    H = ReferenceTuple(A, tuple(forms))
    if not is_reference_tuple(H):
        raise NoReferenceTuple(f"no reference tuple found in the generating family for {A}")
    return H


def _delta(H: ReferenceTuple, P: Ordering) -> int:
    for ref in H.forms:
        v = m_signature_at(ref, P)
        if v:
            return 1 if v > 0 else -1
    raise InvalidReferenceTuple(f"no reference form has nonzero signature at {P}")


def h_signature_at(h: HermitianForm, H, P: Ordering) -> int:
    H = _as_tuple(H)
    if h.algebra != H.algebra:
        raise FieldMismatch("form and reference tuple over different algebras")
    if is_nil(h.algebra, P):
        return 0
    return _delta(H, P) * m_signature_at(h, P)


def total_h_signature(h: HermitianForm, H=None) -> dict[Ordering, int]:
    H = default_reference_tuple(h.algebra) if H is None else _as_tuple(H)
    return {P: h_signature_at(h, H, P) for P in enumerate_orderings(h.algebra.tower)}


def single_reference(H) -> HermitianForm:
    """One form ``h0`` with positive H-signature at every non-nil ordering
    (so that the one-element tuple ``(h0,)`` gives the same H-signature)."""
    H = _as_tuple(H)
    A = H.algebra
    F = A.tower
    orderings = enumerate_orderings(F)
    if not is_reference_tuple(H):
        raise InvalidReferenceTuple("not a tuple of reference forms")
    if not H.forms:
        return HermitianForm(A, (A.one,))
    h = H.forms[0]
    for nxt in H.forms[1:]:
        support = [P for P in orderings if h_signature_at(h, H, P)]
        q = realize_vanishing_pattern(F, support)
        h = (h + q * nxt).reduced()
    f = {P: 1 if is_nil(A, P) or h_signature_at(h, H, P) > 0 else -1 for P in orderings}
    return (realize_positive_pattern(F, f) * h).reduced()


def twist_reference(f: Mapping[Ordering, int] | Callable[[Ordering], int], H) -> HermitianForm:
    """``h_f`` with ``sign^(h_f) = f * sign^H``."""
    H = _as_tuple(H)
    h0 = single_reference(H)
    q = realize_positive_pattern(H.algebra.tower, f)
    return (q * h0).reduced()


def compare_references(H, H2) -> dict[Ordering, int]:
    """The sign function ``f`` (1 on nil orderings) with ``sign^H2 = f * sign^H``."""
    H, H2 = _as_tuple(H), _as_tuple(H2)
    h0 = single_reference(H)
    out = {}
    for P in enumerate_orderings(H.algebra.tower):
        if is_nil(H.algebra, P):
            out[P] = 1
        else:
            out[P] = 1 if h_signature_at(h0, H2, P) > 0 else -1
    return out


def is_torsion(h: HermitianForm, H=None) -> bool:
    return not any(total_h_signature(h, H).values())


def jacobson_form(h: HermitianForm) -> QuadraticForm:
    """``x -> h(x, x)`` as a quadratic form over ``F`` when the involution is the
    canonical one (symmetric entries are then scalars): ``<a1, ...> (x) N``
    with ``N`` the norm form.  It determines the Witt class of ``h``."""
    A = h.algebra
    if A.kind is AlgebraKind.QUATERNION and A.involution_type is InvolutionType.ORTHOGONAL:
        raise UnsupportedAlgebraShape("orthogonal involutions have no Jacobson form")
    F = A.tower
    if A.kind is AlgebraKind.BASE:
        norm = QuadraticForm(F, (F.one,))
    elif A.kind is AlgebraKind.ETALE:
        norm = QuadraticForm(F, (F.one, -A.d))
    else:
        norm = QuadraticForm(F, (F.one, -A.a, -A.b, A.a * A.b))
    return QuadraticForm(F, tuple(s.coords[0] for s in h.entries)) * norm


def is_hyperbolic(h: HermitianForm) -> bool | Unknown:
    """Whether ``[h] = 0`` in ``W(A, sigma)``; :data:`UNKNOWN` when no complete
    invariant is available and the computable ones vanish."""
    A = h.algebra
    if h.rank % 2:
        return False
    if any(m_signature_vector(h).values()):
        return False
    if not (A.kind is AlgebraKind.QUATERNION and A.involution_type is InvolutionType.ORTHOGONAL):
        return is_witt_zero(jacobson_form(h))
    try:
        return not any(larmour_residues(h))
    except UnsupportedAlgebraShape:
        return UNKNOWN


# -- Morita collapse ------------------------------------------------------

@dataclass(frozen=True)
class MatrixForm:
    """A diagonal form ``<G1, ..., Gr>`` over ``M_n(D)`` with conjugate-transpose
    involution; each ``G`` is an ``n x n`` hermitian matrix over ``D``."""

    algebra: AlgebraWithInvolution
    blocks: tuple[tuple[tuple[AlgebraElement, ...], ...], ...]

    @classmethod
    def of(cls, algebra, *blocks) -> "MatrixForm":
        return cls(algebra, tuple(tuple(tuple(row) for row in g) for g in blocks))

    @property
    def n(self) -> int:
        return len(self.blocks[0]) if self.blocks else 0


def morita_collapse(gram: Sequence[Sequence[AlgebraElement]], algebra: AlgebraWithInvolution | None = None) -> HermitianForm:
    """The hermitian form over ``D`` Morita-equivalent to ``<G>`` over ``M_n(D)``."""
    A = algebra or gram[0][0].algebra
    return HermitianForm(A, tuple(hermitian_diagonalize(A, gram)))


def _collapse_form(m: MatrixForm) -> HermitianForm:
    h = HermitianForm(m.algebra)
    for g in m.blocks:
        h = h + morita_collapse(g, m.algebra)
    return h


@lru_cache(maxsize=1024)
def _block_signatures(g: tuple[tuple[AlgebraElement, ...], ...], w: AlgebraElement) -> tuple[int, ...]:
    """Signatures of ``x -> Trd(x* G x w)`` on column vectors ``x`` in ``D^n``.
    The trace form of ``<G>`` over ``M_n(D)`` (twisted by the scalar matrix
    ``w``) is ``n`` copies of this block."""
    A = g[0][0].algebra
    ring = A.tower.ring
    # congruence by diag(lam_r): lam_r clears the denominators of row r, and
    # the (r, t) entry is multiplied by lam_r * lam_t
    lam = []
    for row in g:
        den = ring.one
        for e in row:
            for x in e.coords:
                den = den.lcm(x.den)
        lam.append(den)
    polys = [[tuple(x.num * (lam[r] * lam[t]).exquo(x.den) if x else ring.zero for x in e.coords)
              for t, e in enumerate(row)] for r, row in enumerate(g)]
    K = _trace_tensor(A, w)
    n, dim = len(g), A.dim
    idx = [(r, a) for r in range(n) for a in range(dim)]
    gram = []
    for r, a in idx:
        row = []
        for t, b in idx:
            v = ring.zero
            for c, dc in enumerate(polys[r][t]):
                if dc and K[a][b][c]:
                    v = v + dc * K[a][b][c]
            row.append(v)
        gram.append(row)
    return _poly_signatures(gram, A.tower)


def matrix_m_signature_at(m: MatrixForm, P: Ordering) -> int:
    """M-signature over ``M_n(D)`` computed without diagonalizing over ``D``:
    trace-form signature over ``n * n_P(D)``."""
    n_p = morita_constant(m.algebra, P)
    if not n_p:
        return 0
    pos = enumerate_orderings(m.algebra.tower).index(P)
    w = _twists(m.algebra)[pos]
    total = sum(m.n * _block_signatures(g, w)[pos] for g in m.blocks)
    if total % (m.n * n_p):
        raise ArithmeticError("matrix trace signature not divisible by n * n_P")
    return total // (m.n * n_p)


def _matrix_h_signature(m: MatrixForm, refs: Sequence[MatrixForm], P: Ordering) -> int:
    if is_nil(m.algebra, P):
        return 0
    for ref in refs:
        v = matrix_m_signature_at(ref, P)
        if v:
            return (1 if v > 0 else -1) * matrix_m_signature_at(m, P)
    raise InvalidReferenceTuple(f"matrix reference tuple vanishes at {P}")


def morita_invariance_check(h_matrix: MatrixForm, H_matrix: Sequence[MatrixForm]) -> bool:
    """H-signature over ``M_n(D)`` equals that of the collapsed form with the
    collapsed reference tuple, at every ordering; ranks agree."""
    A = h_matrix.algebra
    collapsed = _collapse_form(h_matrix)
    collapsed_refs = ReferenceTuple.of([_collapse_form(r) for r in H_matrix], A)
    if collapsed.rank != h_matrix.n * len(h_matrix.blocks):
        return False
    for P in enumerate_orderings(A.tower):
        if _matrix_h_signature(h_matrix, H_matrix, P) != h_signature_at(collapsed, collapsed_refs, P):
            return False
    return True


# -- Larmour residues -----------------------------------------------------

def _check_larmour_shape(A: AlgebraWithInvolution):
    if A.kind is not AlgebraKind.QUATERNION or A.involution_type is not InvolutionType.ORTHOGONAL:
        raise UnsupportedAlgebraShape("Larmour residues need an orthogonal quaternion algebra")
    if A.tower.height != 2 or A.tower.base is not Base.REAL_CLOSED:
        raise UnsupportedAlgebraShape("Larmour residues need R((x))((y))")
    valuation_data(A)  # raises for unsupported a, b
    for c in (A.a, A.b):
        if leading_term(c)[0] < 0:
            raise UnsupportedAlgebraShape("a and b must have positive constants")
    s = A.s
    if sum(1 for c in s.coords if c) != 1:
        raise UnsupportedAlgebraShape("s must be a multiple of i, j or k")


@lru_cache(maxsize=16)
def _larmour_character(A: AlgebraWithInvolution):
    """For each symmetric uniformizer ``e``: the exponent classes and constant
    signs of ``lambda_d`` with ``sigma(d) e d = lambda_d e`` for ``d`` in ``i, j``."""
    _check_larmour_shape(A)
    units = sym_basis(A)
    table = []
    for e in units:
        rows = []
        for d in (A.gen("i"), A.gen("j")):
            w = involve(d) * e * d
            idx = next(n for n, c in enumerate(e.coords) if c)
            lam = w.coords[idx] / e.coords[idx]
            if w != e * lam:
                raise UnsupportedAlgebraShape("uniformizer is not an eigenvector of conjugation")
            c, mono = leading_term(lam)
            rows.append((tuple(m % 2 for m in mono), 1 if c > 0 else -1))
        table.append(rows)
    return units, table


def _solve_mod2(target, gens):
    for e1 in (0, 1):
        for e2 in (0, 1):
            v = tuple((e1 * a + e2 * b) % 2 for a, b in zip(gens[0][0], gens[1][0]))
            if v == target:
                return e1, e2
    raise UnsupportedAlgebraShape("monomial class not reachable by conjugation")


def larmour_residues(h: HermitianForm) -> tuple[int, ...]:
    """Signatures of the residue forms attached to the symmetric uniformizers
    (``1, j, k`` for the orthogonal involution ``Int(i) o gamma``).

    An entry whose dominant term is ``c * m * e`` (``m`` a monomial, ``e`` a
    uniformizer) is isometric to ``<c' e>`` after conjugating by ``i`` and
    ``j``; it contributes ``sign(c')`` to the component of ``e``.
    """
    A = h.algebra
    units, table = _larmour_character(A)
    unit_pos = [next(n for n, c in enumerate(u.coords) if c) for u in units]
    out = [0] * len(units)
    for s in h.entries:
        pos = dominant_coordinate(s)
        comp = unit_pos.index(pos)
        coef = s.coords[pos] / units[comp].coords[pos]
        c, mono = leading_term(coef)
        e1, e2 = _solve_mod2(tuple(m % 2 for m in mono), table[comp])
        sign = 1 if c > 0 else -1
        if e1:
            sign *= table[comp][0][1]
        if e2:
            sign *= table[comp][1][1]
        out[comp] += sign
    return tuple(out)

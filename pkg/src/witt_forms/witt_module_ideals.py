"""Prime m-ideals ``(I, N)`` of the ``W(F)``-module ``W(A, sigma)`` and pairs of
morphisms ``(W(F), W(A, sigma)) -> (Z, Z)``.

Membership tests are exact where a complete invariant is available and
three-valued otherwise; primality is property-tested on samples.
"""
from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache, reduce
from math import gcd
from typing import Mapping, Sequence, Union

from sympy import Matrix

from .algebras_involutions import (
    AlgebraElement,
    AlgebraKind,
    AlgebraWithInvolution,
    InvolutionType,
    is_nil,
    norm_form,
    nrd,
    sym_basis,
    valuation_data,
)
from .errors import NotAMorphism, TrivialMorphism, UndecidableSample, UnsupportedAlgebraShape
from .field_tower import FieldElement, Ordering, enumerate_orderings, sign_at
from .hermitian_signatures import (
    HermitianForm,
    ReferenceTuple,
    default_reference_tuple,
    h_signature_at,
    is_hyperbolic,
    larmour_residues,
    single_reference,
    total_h_signature,
)
from .quadratic_witt import (
    Fundamental,
    ModPKernel,
    QuadraticForm,
    SignKernel,
    WittRingPrimeIdeal,
    is_anisotropic,
    prime_ideal_member,
    realize_vanishing_pattern,
    signature_at,
)
from .tristate import UNKNOWN, Unknown

__all__ = [
    "SignHKernel",
    "ModPHKernel",
    "IAsigma",
    "IFtimesW",
    "CustomGenerators",
    "Submodule",
    "MIdealDescriptor",
    "PrimeCheckReport",
    "Classification",
    "FamilyFa",
    "PairMorphism",
    "membership",
    "image_generator",
    "sample_family",
    "prime_m_ideal_check",
    "classify_prime_m_ideal",
    "paper_example_algebra",
    "paper_example_report",
    "boxtimes",
    "fa_prime_criterion_check",
    "recover_morphism",
    "morphisms_equivalent",
    "separating_form",
]


@dataclass(frozen=True)
class SignHKernel:
    ordering: Ordering


@dataclass(frozen=True)
class ModPHKernel:
    """``p W(A, sigma) + ker sign^H_P``."""

    ordering: Ordering
    p: int


@dataclass(frozen=True)
class IAsigma:
    """Classes of even rank."""


@dataclass(frozen=True)
class IFtimesW:
    """``I(F) W(A, sigma)``."""


@dataclass(frozen=True)
class CustomGenerators:
    """The subgroup generated by the given forms."""

    generators: tuple[HermitianForm, ...]


Submodule = Union[SignHKernel, ModPHKernel, IAsigma, IFtimesW, CustomGenerators]


@dataclass(frozen=True)
class MIdealDescriptor:
    algebra: AlgebraWithInvolution
    ideal: WittRingPrimeIdeal
    submodule: Submodule
    reference: ReferenceTuple | None = None

    @property
    def H(self) -> ReferenceTuple:
        return self.reference or default_reference_tuple(self.algebra)


# -- image generator -------------------------------------------------------

def _table_generator(A: AlgebraWithInvolution) -> int:
    if A.kind is AlgebraKind.QUATERNION and A.involution_type is InvolutionType.ORTHOGONAL:
        return 2
    return 1


@lru_cache(maxsize=256)
def image_generator(A: AlgebraWithInvolution, P: Ordering) -> int:
    """Positive generator ``c0`` of the image of ``sign^H_P``.

    The case table decides; a scan of rank-one forms guards it (the scanned
    values must all be multiples of ``c0`` and reach ``c0``)."""
    if is_nil(A, P):
        raise ValueError(f"{P} is nil for {A}; the H-signature is zero there")
    c0 = _table_generator(A)
    H = default_reference_tuple(A)
    values = {abs(h_signature_at(HermitianForm(A, (s,)), H, P)) for s in _unit_scan(A)}
    values.discard(0)
    if not values or reduce(gcd, values) != c0:
        raise ArithmeticError(f"image generator scan {sorted(values)} disagrees with table value {c0}")
    return c0


def _unit_scan(A: AlgebraWithInvolution) -> list[AlgebraElement]:
    basis = sym_basis(A)
    out = list(basis)
    for n, s in enumerate(basis):
        for t in basis[n + 1:]:
            out.extend((s + t, s - t))
    return [u for u in out if nrd(u)]


# -- membership -------------------------------------------------------------

def _larmour_or_none(h: HermitianForm):
    try:
        return larmour_residues(h)
    except UnsupportedAlgebraShape:
        return None


def _integer_echelon(rows: Sequence[Sequence[int]], width: int) -> list[list[int]]:
    """Echelon basis (Euclid on the first ``width`` columns) of the lattice
    spanned by ``rows``; trailing columns ride along."""
    rows = [list(r) for r in rows if any(r[:width])]
    out = []
    for c in range(width):
        live = [r for r in rows if r[c]]
        rows = [r for r in rows if not r[c]]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[c]))
            piv, nxt = live[0], [live[0]]
            for r in live[1:]:
                m = r[c] // piv[c]
                r = [a - m * b for a, b in zip(r, piv)]
                (nxt if r[c] else rows).append(r)
            live = nxt
        out.extend(live)
        rows = [r for r in rows if any(r[:width])]
    return out


def _span_solve(vec: Sequence[int], gens: Sequence[Sequence[int]]) -> list[int] | None:
    """Integer coefficients ``c`` with ``sum c_i gens_i = vec``, or ``None``."""
    k, n = len(vec), len(gens)
    aug = [list(g) + [int(i == j) for j in range(n)] for i, g in enumerate(gens)]
    rest = list(vec) + [0] * n
    for row in _integer_echelon(aug, k):
        c = next(i for i in range(k) if row[i])
        if rest[c] % row[c]:
            return None
        m = rest[c] // row[c]
        rest = [a - m * b for a, b in zip(rest, row)]
    if any(rest[:k]):
        return None
    return [-v for v in rest[k:]]


def membership(h: HermitianForm, d: MIdealDescriptor) -> bool | Unknown:
    A, N, H = d.algebra, d.submodule, d.H
    if isinstance(N, SignHKernel):
        return h_signature_at(h, H, N.ordering) == 0
    if isinstance(N, ModPHKernel):
        if is_nil(A, N.ordering):
            return True
        return h_signature_at(h, H, N.ordering) % (N.p * image_generator(A, N.ordering)) == 0
    if isinstance(N, IAsigma):
        return h.rank % 2 == 0
    if isinstance(N, IFtimesW):
        return _ifw_member(h, H)
    if isinstance(N, CustomGenerators):
        return _custom_member(h, N, H)
    raise TypeError(f"unknown submodule kind {N!r}")


def _ifw_member(h: HermitianForm, H: ReferenceTuple) -> bool | Unknown:
    A = h.algebra
    if h.rank % 2:
        return False
    res = _larmour_or_none(h)
    if res is not None:
        # every class is a sum of r_e <e>, and 2<e> = <1,1><e> lies in I(F) W
        return all(r % 2 == 0 for r in res)
    if A.kind is AlgebraKind.BASE:
        return True
    for P, v in total_h_signature(h, H).items():
        if v and v % (2 * image_generator(A, P)):
            return False
    return UNKNOWN


def _custom_member(h: HermitianForm, N: CustomGenerators, H: ReferenceTuple) -> bool | Unknown:
    orderings = enumerate_orderings(h.algebra.tower)

    def vec(g):
        res = _larmour_or_none(g)
        if res is not None:
            return list(res)
        sig = total_h_signature(g, H)
        return [sig[P] for P in orderings]

    gens = [vec(g) for g in N.generators]
    target = vec(h)
    coeffs = _span_solve(target, gens)
    if coeffs is None:
        return False
    if _larmour_or_none(h) is not None:
        return True
    # same signatures as an element of the span; the difference is torsion
    diff = h
    for c, g in zip(coeffs, N.generators):
        diff = diff - c * g if c >= 0 else diff + (-c) * g
    verdict = is_hyperbolic(diff.reduced())
    return True if verdict is True else UNKNOWN


# -- samples ----------------------------------------------------------------

def _scalar_units(F) -> list[FieldElement]:
    units = [F.one]
    for v in F.variables:
        units += [u * F.var(v) for u in units]
    return units


def sample_family(A: AlgebraWithInvolution, max_rank: int = 3, signs: bool = True) -> list[HermitianForm]:
    """Forms of rank ``<= max_rank`` with entries ``c * e``: ``e`` in the
    symmetric basis, ``c`` a product of distinct variables (and a sign)."""
    entries = [e * c for e in sym_basis(A) for c in _scalar_units(A.tower)]
    if signs:
        entries += [-e for e in entries]
    entries = [e for e in entries if nrd(e)]
    out = []
    for r in range(1, max_rank + 1):
        for combo in itertools.combinations_with_replacement(entries, r):
            out.append(HermitianForm(A, combo))
    return out


def _quadratic_samples(F, ideal) -> list[QuadraticForm]:
    units = [s * u for u in _scalar_units(F) for s in (1, -1)]
    qs = [QuadraticForm(F, (u,)) for u in units]
    qs += [QuadraticForm(F, (u, v)) for u, v in itertools.combinations_with_replacement(units, 2)]
    if isinstance(ideal, ModPKernel):
        qs += [QuadraticForm(F, (u,) * ideal.p) for u in units]
    return qs


def _default_samples(d: MIdealDescriptor, n: int, seed: int):
    rng = random.Random(seed)
    hs = sample_family(d.algebra, 2)
    qs = _quadratic_samples(d.algebra.tower, d.ideal)
    pairs = [(rng.choice(qs), rng.choice(hs)) for _ in range(n)]
    # make sure ideal members are represented
    members = [q for q in qs if prime_ideal_member(q, d.ideal)]
    if members:
        pairs += [(rng.choice(members), rng.choice(hs)) for _ in range(max(1, n // 4))]
    return pairs


# -- primality ---------------------------------------------------------------

@dataclass
class PrimeCheckReport:
    passed: bool
    checks: dict[str, bool]
    samples_checked: int
    counterexample: dict | None = None
    non_member: str | None = None

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": dict(self.checks),
            "samplesChecked": self.samples_checked,
            "counterexample": self.counterexample,
            "nonMember": self.non_member,
        }


def _decide(h, d) -> bool:
    v = membership(h, d)
    if v is UNKNOWN:
        raise UndecidableSample(f"membership of {h} in {d.submodule} is undecided")
    return v


def prime_m_ideal_check(d: MIdealDescriptor, samples: Sequence[tuple[QuadraticForm, HermitianForm]] | None = None,
                        n: int = 200, seed: int = 0) -> PrimeCheckReport:
    """Property test of the prime m-ideal axioms on ``(q, h)`` samples."""
    if samples is None:
        samples = _default_samples(d, n, seed)
    checks = {"I.W in N": True, "W(F).N in N": True, "prime": True, "N proper": False}
    counter = None

    def fail(name, q, h, why):
        nonlocal counter
        checks[name] = False
        if counter is None:
            counter = {"check": name, "q": str(q), "h": str(h), "reason": why}

    for q, h in samples:
        qh = q * h
        q_in = prime_ideal_member(q, d.ideal)
        h_in = _decide(h, d)
        qh_in = _decide(qh, d)
        if q_in and not qh_in:
            fail("I.W in N", q, h, "q in I but q.h not in N")
        if h_in and not qh_in:
            fail("W(F).N in N", q, h, "h in N but q.h not in N")
        if qh_in and not (q_in or h_in):
            fail("prime", q, h, "q.h in N with q not in I and h not in N")
    witness = None
    for h in sample_family(d.algebra, 1):
        if not _decide(h, d):
            witness = str(h)
            checks["N proper"] = True
            break
    return PrimeCheckReport(all(checks.values()), checks, len(samples), counter, witness)


@dataclass
class Classification:
    descriptor: MIdealDescriptor
    descriptions_agree: bool
    samples_checked: int


def classify_prime_m_ideal(A: AlgebraWithInvolution, ideal: WittRingPrimeIdeal, H=None,
                           samples: Sequence[HermitianForm] | None = None) -> Classification:
    """The unique ``N`` paired with ``I`` when ``2`` is not in ``I``.

    For ``ModPKernel`` the kernel description (``sign^H_P = 0 mod p c0``) is
    compared with the constructive one (``h - p h'`` has zero H-signature for
    an explicit ``h'``)."""
    H = H if isinstance(H, ReferenceTuple) or H is None else ReferenceTuple.of(H)
    if isinstance(ideal, Fundamental):
        raise ValueError("2 lies in I(F); use fa_prime_criterion_check instead")
    P = ideal.ordering
    if isinstance(ideal, SignKernel):
        N = SignHKernel(P)
    else:
        N = ModPHKernel(P, ideal.p)
    d = MIdealDescriptor(A, ideal, N, H)
    if samples is None:
        samples = sample_family(A, 2)
    agree = True
    if isinstance(N, ModPHKernel) and not is_nil(A, P):
        c0 = image_generator(A, P)
        gen = next(HermitianForm(A, (s,)) for s in _unit_scan(A)
                   if abs(h_signature_at(HermitianForm(A, (s,)), d.H, P)) == c0)
        g_sig = h_signature_at(gen, d.H, P)
        for h in samples:
            v = h_signature_at(h, d.H, P)
            kernel_view = membership(h, d)
            constructive = False
            if v % c0 == 0 and (v // c0) % N.p == 0:
                m = v // (N.p * g_sig)
                h_prime = m * gen if m >= 0 else (-m) * (-gen)
                constructive = h_signature_at(h - N.p * h_prime, d.H, P) == 0
            if kernel_view != constructive:
                agree = False
                break
    return Classification(d, agree, len(samples))


# -- the (x, y) example ----------------------------------------------------------

def paper_example_algebra() -> AlgebraWithInvolution:
    """``(x, y)`` over ``R((x))((y))`` with the orthogonal involution ``Int(i) o gamma``."""
    from .grammar import parse_field
    from .algebras_involutions import quaternion_algebra

    F = parse_field("R[[x,y]]")
    return quaternion_algebra(F, F.var("x"), F.var("y"), orthogonal=(0, 1, 0, 0))


def paper_example_report(A: AlgebraWithInvolution | None = None,
                         extra_scalars: Sequence[FieldElement] = ()) -> dict:
    """Valuation data, Larmour residues and the index computations for the
    ``(x, y)`` algebra.  ``extra_scalars`` are added to the ``a`` in the
    generators ``<alpha, -a alpha>`` of ``I(F) W``."""
    A = A or paper_example_algebra()
    F = A.tower
    norm = norm_form(A)
    vd = valuation_data(A)
    units = sym_basis(A)
    triples = {str(u): list(larmour_residues(HermitianForm(A, (u,)))) for u in units}
    det = Matrix([triples[str(u)] for u in units]).det()

    scalars = [s * c for c in _scalar_units(F) for s in (1, -1)]
    alphas = [u * c for u in units for c in scalars]
    generators = []
    for a in [*scalars, *extra_scalars]:
        if a == F.one:
            continue
        for alpha in alphas:
            g = HermitianForm(A, (alpha, alpha * (-a)))
            generators.append((str(g), list(larmour_residues(g))))
    all_even = all(all(r % 2 == 0 for r in t) for _, t in generators)

    witness = HermitianForm(A, (units[0], units[1]))
    witness_res = list(larmour_residues(witness))
    return {
        "anisotropic": is_anisotropic(norm),
        "normForm": str(norm),
        "gammaBasis": [[str(c) for c in v] for v in vd.value_group_basis],
        "gammaIndex": vd.index,
        "residueField": str(vd.residue),
        "residueTriples": triples,
        "residueBasisDeterminant": int(det),
        "ifwGeneratorsChecked": len(generators),
        "ifwGeneratorsEven": all_even,
        "ifwIndexLowerBound": 8 if all_even and abs(det) == 1 else None,
        "iAsigmaIndex": 2,
        "iAsigmaIndexWitness": str(HermitianForm(A, (A.one,))),
        "separatingForm": str(witness),
        "separatingFormResidues": witness_res,
        "ifwDiffersFromIAsigma": witness.rank % 2 == 0 and any(r % 2 for r in witness_res),
    }


# -- the family F_a -----------------------------------------------------------

@dataclass(frozen=True)
class FamilyFa:
    """``h_{a^i1} + ... + h_{a^il}`` stored as a sorted exponent multiset."""

    a: AlgebraElement
    exponents: tuple[int, ...]

    def __post_init__(self):
        if not self.exponents:
            raise ValueError("members of F_a have rank >= 1")
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")
        object.__setattr__(self, "exponents", tuple(sorted(self.exponents)))

    @property
    def rank(self) -> int:
        return len(self.exponents)

    def form(self) -> HermitianForm:
        return HermitianForm(self.a.algebra, tuple(_power(self.a, i) for i in self.exponents))


@lru_cache(maxsize=256)
def _power(a: AlgebraElement, i: int) -> AlgebraElement:
    return a**i


def boxtimes(h1: FamilyFa, h2: FamilyFa) -> FamilyFa:
    if h1.a != h2.a:
        raise ValueError("boxtimes needs members of the same family")
    return FamilyFa(h1.a, tuple(i + j for i in h1.exponents for j in h2.exponents))


def fa_prime_criterion_check(a: AlgebraElement, samples: Sequence[tuple[FamilyFa, FamilyFa]] | None = None,
                             descriptor: MIdealDescriptor | None = None, max_rank: int = 3,
                             max_exponent: int = 2) -> dict:
    """Check ``[h1 boxtimes h2] in N => [h1] in N or [h2] in N`` on samples
    (``N`` defaults to even rank), rank multiplicativity, and the two
    hyperbolic identities ``h_a + h_-a`` and ``h_1 + h_-a^2``."""
    A = a.algebra
    d = descriptor or MIdealDescriptor(A, Fundamental(), IAsigma())
    if samples is None:
        members = [FamilyFa(a, e) for r in range(1, max_rank + 1)
                   for e in itertools.combinations_with_replacement(range(max_exponent + 1), r)]
        samples = list(itertools.product(members, repeat=2))
    decided: dict[FamilyFa, bool] = {}

    def member(h: FamilyFa) -> bool:
        if h not in decided:
            decided[h] = _decide(h.form(), d)
        return decided[h]

    rank_ok, criterion_ok, counter = True, True, None
    for h1, h2 in samples:
        prod = boxtimes(h1, h2)
        if prod.rank != h1.rank * h2.rank:
            rank_ok = False
        if member(prod) and not (member(h1) or member(h2)):
            criterion_ok = False
            counter = counter or {"h1": list(h1.exponents), "h2": list(h2.exponents)}
    identities = {
        "h_a + h_-a": is_hyperbolic(HermitianForm(A, (a, -a))),
        "h_1 + h_-a^2": is_hyperbolic(HermitianForm(A, (A.one, -(a * a)))),
    }
    return {
        "passed": rank_ok and criterion_ok and all(v is True for v in identities.values()),
        "rankMultiplicative": rank_ok,
        "criterion": criterion_ok,
        "hyperbolic": {k: (v if v is not UNKNOWN else "unknown") for k, v in identities.items()},
        "samplesChecked": len(samples),
        "counterexample": counter,
    }


# -- morphisms ----------------------------------------------------------------

@dataclass(frozen=True)
class PairMorphism:
    """``(sign_P, scale * sign^H_P)``."""

    ordering: Ordering
    scale: Fraction
    reference: ReferenceTuple

    def f(self, q: QuadraticForm) -> int:
        return signature_at(q, self.ordering)

    def g(self, h: HermitianForm) -> Fraction:
        return self.scale * h_signature_at(h, self.reference, self.ordering)


def recover_morphism(f_values: Mapping[FieldElement, int], g_values: Mapping[HermitianForm, int],
                     H=None) -> PairMorphism:
    """Identify ``(f, g)`` from its values on ``<a>`` (for ``f``) and on sample
    forms (for ``g``) as a multiple of the canonical pair at some ordering."""
    if not f_values:
        raise NotAMorphism("f has no sampled values")
    F = next(iter(f_values)).tower
    if any(v not in (1, -1) for v in f_values.values()):
        raise NotAMorphism("f must send each <a> to +1 or -1")
    if F.one in f_values and f_values[F.one] != 1:
        raise NotAMorphism("f(<1>) must be 1")
    for a, b in itertools.combinations_with_replacement(list(f_values), 2):
        ab = a * b
        if ab in f_values and f_values[ab] != f_values[a] * f_values[b]:
            raise NotAMorphism(f"f is not multiplicative on {a}, {b}")
    matches = [P for P in enumerate_orderings(F) if all(sign_at(a, P) == v for a, v in f_values.items())]
    if not matches:
        raise NotAMorphism("the positive cone of f is not an ordering")
    if len(matches) > 1:
        raise NotAMorphism("f is sampled too sparsely to determine an ordering")
    P = matches[0]
    if not g_values:
        raise TrivialMorphism("g has no sampled values", ordering=P, is_nil=None)
    A = next(iter(g_values)).algebra
    H = default_reference_tuple(A) if H is None else (H if isinstance(H, ReferenceTuple) else ReferenceTuple.of(H))
    # module law on the samples that allow it
    for a, fa in f_values.items():
        q = QuadraticForm(F, (a,))
        for h, gh in g_values.items():
            qh = q * h
            if qh in g_values and g_values[qh] != fa * gh:
                raise NotAMorphism(f"g(<{a}> h) != f(<{a}>) g(h) for h = {h}")
    if all(v == 0 for v in g_values.values()):
        raise TrivialMorphism("g vanishes on every sample", ordering=P, is_nil=is_nil(A, P))
    if is_nil(A, P):
        raise NotAMorphism(f"{P} is nil, so g would have to vanish")
    ratio = None
    for h, gh in g_values.items():
        s = h_signature_at(h, H, P)
        if s == 0:
            if gh:
                raise NotAMorphism(f"g is nonzero on {h}, which lies in ker sign^H_P")
            continue
        r = Fraction(gh, s)
        if ratio is None:
            ratio = r
        elif r != ratio:
            raise NotAMorphism("g is not proportional to sign^H_P on the samples")
    return PairMorphism(P, ratio, H)


def morphisms_equivalent(m1: PairMorphism, m2: PairMorphism) -> bool:
    """Same ordering, hence the same kernels (both scales are nonzero)."""
    return m1.ordering == m2.ordering and bool(m1.scale) and bool(m2.scale)


def separating_form(A: AlgebraWithInvolution, P: Ordering, Q: Ordering, H=None) -> HermitianForm:
    """A form with H-signature zero at ``P`` and nonzero at ``Q``."""
    if P == Q:
        raise ValueError("orderings must differ")
    H = default_reference_tuple(A) if H is None else H
    q = realize_vanishing_pattern(A.tower, [P])
    h = (q * single_reference(H)).reduced()
    return h

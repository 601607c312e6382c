import itertools
from fractions import Fraction

import pytest

from witt_forms import (
    HermitianForm,
    ModPKernel,
    QuadraticForm,
    SignKernel,
    UNKNOWN,
    default_reference_tuple,
    enumerate_orderings,
    h_signature_at,
    larmour_residues,
    nil_orderings,
    parse_algebra,
    parse_field,
    parse_hermitian_form,
    sign_at,
)
from witt_forms.errors import NotAMorphism, TrivialMorphism, UndecidableSample
from witt_forms.hermitian_signatures import is_torsion
from witt_forms.quadratic_witt import Fundamental
from witt_forms.sampling import random_hermitian_form, random_quadratic_form, rng
from witt_forms.witt_module_ideals import (
    CustomGenerators,
    FamilyFa,
    IAsigma,
    IFtimesW,
    MIdealDescriptor,
    ModPHKernel,
    SignHKernel,
    boxtimes,
    classify_prime_m_ideal,
    fa_prime_criterion_check,
    image_generator,
    membership,
    morphisms_equivalent,
    paper_example_report,
    prime_m_ideal_check,
    recover_morphism,
    sample_family,
    separating_form,
)


def form(text, A):
    return parse_hermitian_form(text, A)


def non_nil(A):
    return [P for P in enumerate_orderings(A.tower) if P not in nil_orderings(A)]


def test_membership_examples(example):
    P = non_nil(example)[0]
    assert membership(form("<1, j>", example), MIdealDescriptor(example, Fundamental(), IAsigma())) is True
    assert membership(form("<1>", example), MIdealDescriptor(example, SignKernel(P), SignHKernel(P))) is (
        h_signature_at(form("<1>", example), default_reference_tuple(example), P) == 0)
    ifw = MIdealDescriptor(example, Fundamental(), IFtimesW())
    assert membership(form("<1>", example), ifw) is False
    assert membership(form("<1, j>", example), ifw) is False
    assert membership(form("<1, 1>", example), ifw) is True
    assert membership(form("<j, x*j>", example), ifw) is True


def test_ifw_membership_can_be_unknown(hamilton):
    d = MIdealDescriptor(hamilton, Fundamental(), IFtimesW())
    assert membership(form("<1, 1>", hamilton), d) is UNKNOWN
    assert membership(form("<1, 2, 3>", hamilton), d) is False


def test_image_generator(example, hamilton, Rxy):
    assert all(image_generator(example, P) == 2 for P in non_nil(example))
    assert image_generator(hamilton, enumerate_orderings(hamilton.tower)[0]) == 1
    B = parse_algebra("base", Rxy)
    assert all(image_generator(B, P) == 1 for P in enumerate_orderings(Rxy))


def test_modp_membership_uses_image_generator(example):
    P = non_nil(example)[0]
    d = MIdealDescriptor(example, ModPKernel(P, 3), ModPHKernel(P, 3))
    H = default_reference_tuple(example)
    for h in sample_family(example, 2):
        assert membership(h, d) == (h_signature_at(h, H, P) % 6 == 0)


# rows: <1>, <j>, <k>; columns: non-nil orderings in enumeration order
RESIDUE_TO_SIGNATURE = [[0, 0, 2], [2, 0, 0], [0, 2, 0]]


def test_sign_kernel_is_a_linear_condition_on_residues(example):
    Ps = non_nil(example)
    r = rng(31)
    forms = sample_family(example, 2)[::7] + [random_hermitian_form(example, r) for _ in range(20)]
    for h in forms:
        res = larmour_residues(h)
        for col, P in enumerate(Ps):
            functional = sum(res[i] * RESIDUE_TO_SIGNATURE[i][col] for i in range(3))
            d = MIdealDescriptor(example, SignKernel(P), SignHKernel(P))
            assert membership(h, d) == (functional == 0)


def test_sign_kernel_is_prime_at_every_non_nil_ordering(example):
    for P in non_nil(example):
        report = prime_m_ideal_check(MIdealDescriptor(example, SignKernel(P), SignHKernel(P)), n=80)
        assert report.passed, report.to_dict()


def test_fundamental_pair_is_prime(example, symp_xy):
    for A in (example, symp_xy):
        assert prime_m_ideal_check(MIdealDescriptor(A, Fundamental(), IAsigma()), n=80).passed


def test_non_closed_submodule_fails(example):
    P = non_nil(example)[0]
    d = MIdealDescriptor(example, SignKernel(P), CustomGenerators((form("<1>", example),)))
    report = prime_m_ideal_check(d, n=60)
    assert not report.passed
    assert report.counterexample is not None
    assert set(report.to_dict()) >= {"passed", "checks", "counterexample", "samplesChecked"}


def test_undecidable_samples_are_reported(hamilton):
    d = MIdealDescriptor(hamilton, Fundamental(), IFtimesW())
    q = QuadraticForm.of(hamilton.tower, 1, 1)
    with pytest.raises(UndecidableSample):
        prime_m_ideal_check(d, samples=[(q, form("<1>", hamilton))])


def test_module_properties_on_random_samples(example):
    H = default_reference_tuple(example)
    r = rng(32)
    F = example.tower
    for _ in range(25):
        q, h = random_quadratic_form(F, r, 2), random_hermitian_form(example, r)
        for P in non_nil(example):
            sq = sum(sign_at(e, P) for e in q.entries)
            sh = h_signature_at(h, H, P)
            sqh = h_signature_at(q * h, H, P)
            assert sqh == sq * sh
            if sqh == 0:
                assert sq == 0 or sh == 0


@pytest.mark.parametrize("kind", ["sign", "mod3", "mod5"])
def test_classification(example, kind):
    for P in non_nil(example):
        ideal = {"sign": SignKernel(P), "mod3": ModPKernel(P, 3), "mod5": ModPKernel(P, 5)}[kind]
        c = classify_prime_m_ideal(example, ideal)
        expected = SignHKernel(P) if kind == "sign" else ModPHKernel(P, ideal.p)
        assert c.descriptor.submodule == expected
        assert c.descriptions_agree and c.samples_checked > 0


def test_classification_requires_two_not_in_ideal(example):
    with pytest.raises(ValueError):
        classify_prime_m_ideal(example, Fundamental())


def test_torsion_forms_lie_in_every_classified_submodule(example):
    torsion = [h for h in sample_family(example, 2) if is_torsion(h)]
    assert torsion
    for P in non_nil(example):
        for ideal in (SignKernel(P), ModPKernel(P, 3)):
            d = classify_prime_m_ideal(example, ideal).descriptor
            assert all(membership(h, d) for h in torsion)


def test_example_report(example):
    rep = paper_example_report(example)
    assert rep["anisotropic"] is True
    assert rep["gammaBasis"] == [["1/2", "0"], ["0", "1/2"]]
    assert rep["gammaIndex"] == 4 and rep["residueField"] == "base"
    assert rep["residueTriples"] == {"1": [1, 0, 0], "j": [0, 1, 0], "k": [0, 0, 1]}
    assert abs(rep["residueBasisDeterminant"]) == 1
    assert rep["ifwGeneratorsEven"] and rep["ifwIndexLowerBound"] == 8
    assert rep["iAsigmaIndex"] == 2
    assert rep["ifwDiffersFromIAsigma"]


def test_family_products():
    F = parse_field("R[[x,y]]")
    A = parse_algebra("quat(a=x,b=y;inv=orth(i))", F)
    j = A.gen("j")
    assert boxtimes(FamilyFa(j, (0,)), FamilyFa(j, (2,))).exponents == (2,)
    assert boxtimes(FamilyFa(j, (0, 1, 2)), FamilyFa(j, (0, 1, 1, 2, 3))).rank == 15
    with pytest.raises(ValueError):
        FamilyFa(j, ())
    with pytest.raises(ValueError):
        boxtimes(FamilyFa(j, (0,)), FamilyFa(A.gen("k"), (0,)))


def test_family_criterion(example):
    for name in ("j", "k"):
        report = fa_prime_criterion_check(example.gen(name))
        assert report["passed"], report


def test_recover_canonical_pairs(example):
    F = example.tower
    H = default_reference_tuple(example)
    units = [s * u for u in (F.one, F.var("x"), F.var("y"), F.var("x") * F.var("y")) for s in (1, -1)]
    probes = sample_family(example, 1)
    for P in non_nil(example):
        f = {a: sign_at(a, P) for a in units}
        g = {h: h_signature_at(h, H, P) for h in probes}
        m = recover_morphism(f, g, H)
        assert m.ordering == P and m.scale == 1
        scaled = recover_morphism(f, {h: 3 * v for h, v in g.items()}, H)
        assert scaled.scale == 3 and morphisms_equivalent(m, scaled)


def test_recover_rejects_bad_input(example):
    F = example.tower
    H = default_reference_tuple(example)
    x, y = F.var("x"), F.var("y")
    probes = sample_family(example, 1)
    nil = nil_orderings(example)[0]
    with pytest.raises(NotAMorphism):
        recover_morphism({x: 1, y: 1, x * y: -1}, {probes[0]: 1}, H)
    with pytest.raises(TrivialMorphism) as info:
        recover_morphism({x: sign_at(x, nil), y: sign_at(y, nil)}, {h: 0 for h in probes}, H)
    assert info.value.is_nil
    P = non_nil(example)[0]
    with pytest.raises(NotAMorphism):
        recover_morphism({x: sign_at(x, P), y: sign_at(y, P)},
                         {h: h_signature_at(h, H, P) + 1 for h in probes}, H)


def test_distinct_orderings_are_separated(example):
    H = default_reference_tuple(example)
    for P, Q in itertools.permutations(non_nil(example), 2):
        h = separating_form(example, P, Q, H)
        assert h_signature_at(h, H, P) == 0 and h_signature_at(h, H, Q) != 0


def test_scale_is_rational(example):
    F = example.tower
    H = default_reference_tuple(example)
    P = non_nil(example)[1]
    probes = sample_family(example, 1)
    f = {a: sign_at(a, P) for a in (F.var("x"), F.var("y"))}
    g = {h: Fraction(1, 2) * h_signature_at(h, H, P) for h in probes}
    assert all(v == int(v) for v in g.values())
    m = recover_morphism(f, {h: int(v) for h, v in g.items()}, H)
    assert m.scale == Fraction(1, 2)

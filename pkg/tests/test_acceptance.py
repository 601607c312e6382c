"""Acceptance suite: one check per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
"""
import itertools
import sys
import time
from fractions import Fraction
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from witt_forms import (
    HermitianForm,
    MatrixForm,
    default_reference_tuple,
    enumerate_orderings,
    h_signature_at,
    is_witt_zero,
    larmour_residues,
    m_signature_at,
    nil_orderings,
    parse_algebra,
    parse_field,
    parse_hermitian_form,
    parse_quadratic_form,
    sign_at,
    signature_at,
    single_reference,
    total_h_signature,
)
from witt_forms.algebras_involutions import is_split_at, sym_basis, valuation_data
from witt_forms.hermitian_signatures import (
    ReferenceTuple,
    compare_references,
    is_reference_tuple,
    is_torsion,
    morita_collapse,
    morita_constant,
    morita_invariance_check,
    matrix_m_signature_at,
    trace_signature_at,
    twist_reference,
)
from witt_forms.quadratic_witt import Fundamental, ModPKernel, SignKernel, hilbert_symbol, residue_profile
from witt_forms.sampling import (
    random_element,
    random_hermitian_form,
    random_hermitian_gram,
    random_quadratic_form,
    rng,
)
from witt_forms.witt_module_ideals import (
    FamilyFa,
    IAsigma,
    MIdealDescriptor,
    ModPHKernel,
    SignHKernel,
    classify_prime_m_ideal,
    fa_prime_criterion_check,
    membership,
    morphisms_equivalent,
    paper_example_algebra,
    paper_example_report,
    prime_m_ideal_check,
    recover_morphism,
    sample_family,
    separating_form,
)

from oracles import (
    hamilton_trace_signature,
    hilbert_by_search,
    sign_by_evaluation,
    split_model_signature,
)

LIMIT = 60.0

SUPPORTED = [
    ("R[[x,y]]", "base"),
    ("Q[[x]]", "etale(d=x)"),
    ("Q", "etale(d=-1)"),
    ("R[[x,y]]", "quat(a=x,b=y)"),
    ("Q", "quat(a=-1,b=-1)"),
    ("R[[x,y]]", "quat(a=x,b=y;inv=orth(i))"),
    ("Q[[x]]", "quat(a=-1,b=x;inv=orth(j))"),
]


def _algebra(field, spec):
    return parse_algebra(spec, parse_field(field))


def _non_nil(A):
    nil = set(nil_orderings(A))
    return [P for P in enumerate_orderings(A.tower) if P not in nil]


def crit_1():
    F = parse_field("R[[x,y]]")
    q = parse_quadratic_form("<1, -x, -y, x*y>", F)
    profile = residue_profile(q)
    dims = sorted(r.dim for r in profile.values())
    base_level = all(r.tower.height == 0 for r in profile.values())
    ok = is_witt_zero(q) is False and dims == [1, 1, 1, 1] and base_level
    return ok, f"witt_zero={is_witt_zero(q)} residue dims={dims}"


def crit_2():
    vd = valuation_data(paper_example_algebra())
    basis = [[str(c) for c in v] for v in vd.value_group_basis]
    ok = basis == [["1/2", "0"], ["0", "1/2"]] and vd.index == 4 and vd.residue == "base"
    return ok, f"basis={basis} index={vd.index} residue={vd.residue}"


def crit_3():
    A = paper_example_algebra()
    r = rng(300)
    extras = [random_element(A.tower, r) for _ in range(20)]
    rep = paper_example_report(A, extra_scalars=extras)
    # rank parity: <1> is odd, and membership in I(A, sigma) is exactly even rank
    family = sample_family(A, 3)
    d = MIdealDescriptor(A, Fundamental(), IAsigma())
    parity = all(membership(h, d) == (h.rank % 2 == 0) for h in family)
    odd_exists = HermitianForm(A, (A.one,)).rank % 2 == 1
    ok = (abs(rep["residueBasisDeterminant"]) == 1 and rep["ifwGeneratorsEven"]
          and rep["ifwIndexLowerBound"] == 8 and parity and odd_exists)
    return ok, (f"det={rep['residueBasisDeterminant']} generators={rep['ifwGeneratorsChecked']} "
                f"all even={rep['ifwGeneratorsEven']} rank-parity index=2:{parity and odd_exists}")


def crit_4():
    Rxy, Q = parse_field("R[[x,y]]"), parse_field("Q")
    example = paper_example_algebra()
    symp = parse_algebra("quat(a=x,b=y)", Rxy)
    split = {P for P in enumerate_orderings(Rxy) if is_split_at(symp, P)}
    checks = {
        "example": [str(P) for P in nil_orderings(example)] == ["(x<0,y<0)"],
        "base": nil_orderings(parse_algebra("base", Rxy)) == [],
        "hamilton": nil_orderings(parse_algebra("quat(a=-1,b=-1)", Q)) == [],
        "symplectic": set(nil_orderings(symp)) == split and len(split) == 3,
    }
    return all(checks.values()), str(checks)


def crit_5():
    failures = 0
    triples = 0
    for field, spec in SUPPORTED:
        A = _algebra(field, spec)
        H = default_reference_tuple(A)
        Ps = enumerate_orderings(A.tower)
        r = rng(500)
        for _ in range(200):
            h1 = random_hermitian_form(A, r, 2, terms=2, degree=1)
            h2 = random_hermitian_form(A, r, 2, terms=2, degree=1)
            q = random_quadratic_form(A.tower, r, 2, terms=2, degree=1)
            s1, s2 = total_h_signature(h1, H), total_h_signature(h2, H)
            hyp = total_h_signature(h1 - h1, H)
            s12, sq = total_h_signature(h1 + h2, H), total_h_signature(q * h1, H)
            for P in Ps:
                failures += hyp[P] != 0
                failures += s12[P] != s1[P] + s2[P]
                failures += sq[P] != signature_at(q, P) * s1[P]
            failures += is_torsion(h1, H) != all(v == 0 for v in s1.values())
            triples += 1
    return failures == 0, f"{triples} triples over {len(SUPPORTED)} algebras, {failures} failures"


def _reference_test_set():
    example = paper_example_algebra()
    f = lambda t: parse_hermitian_form(t, example)
    sets = [
        (example, default_reference_tuple(example)),
        (example, ReferenceTuple.of([f("<k>"), f("<1, j>")], example)),
        (example, ReferenceTuple.of([f("<x*j>"), f("<-y*k>"), f("<1>")], example)),
    ]
    for field, spec in (("Q", "quat(a=-1,b=-1)"), ("R[[x,y]]", "quat(a=x,b=y)"), ("R[[x,y]]", "base")):
        A = _algebra(field, spec)
        sets.append((A, default_reference_tuple(A)))
    return sets


def crit_6():
    failures = 0
    r = rng(600)
    for A, H in _reference_test_set():
        if not is_reference_tuple(H):
            failures += 1
            continue
        h0 = single_reference(H)
        nil = set(nil_orderings(A))
        Ps = enumerate_orderings(A.tower)
        for P in Ps:
            v = h_signature_at(h0, H, P)
            failures += (v != 0) if P in nil else (v <= 0)
        probes = [random_hermitian_form(A, r, 2, terms=2, degree=1) for _ in range(100)]
        base = [total_h_signature(h, H) for h in probes]
        failures += sum(total_h_signature(h, [h0]) != s for h, s in zip(probes, base))
        for signs in itertools.product((1, -1), repeat=len(Ps)):
            fmap = dict(zip(Ps, signs))
            hf = twist_reference(fmap, H)
            for h, s in zip(probes[:5], base[:5]):
                twisted = total_h_signature(h, [hf])
                failures += any(twisted[P] != fmap[P] * s[P] for P in Ps)
            g = compare_references(H, [hf])
            failures += any(g[P] != (1 if P in nil else fmap[P]) for P in Ps)
    return failures == 0, f"{len(_reference_test_set())} reference tuples, {failures} failures"


def crit_7():
    failures = 0
    r = rng(700)
    example = paper_example_algebra()
    hamilton = _algebra("Q", "quat(a=-1,b=-1)")
    for A in (example, hamilton):
        H = [MatrixForm.of(A, [[s]]) for s in sym_basis(A)]
        for n in (1, 2, 3):
            g = random_hermitian_gram(A, r, n, terms=2, degree=1, denominators=False)
            m = MatrixForm.of(A, g)
            h = morita_collapse(g, A)
            failures += any(matrix_m_signature_at(m, P) != m_signature_at(h, P)
                            for P in enumerate_orderings(A.tower))
            failures += not morita_invariance_check(m, H)
    split_ok = _split_model_constant() and _hamilton_constant()
    return failures == 0 and split_ok, f"gram failures={failures} split-model constants ok={split_ok}"


def _split_model_constant():
    A = _algebra("Q", "quat(a=1,b=1;inv=orth(i))")
    P = enumerate_orderings(A.tower)[0]
    r = rng(701)
    ok = morita_constant(A, P) == 2
    for _ in range(40):
        coeffs = []
        while len(coeffs) < r.randint(1, 3):
            c = [Fraction(r.randint(-6, 6), r.randint(1, 3)) for _ in range(3)]
            if c[0] ** 2 - c[1] ** 2 + c[2] ** 2:
                coeffs.append(c)
        h = HermitianForm(A, tuple(A.element([c[0], 0, c[1], c[2]]) for c in coeffs))
        model = split_model_signature([[c[0], 0, c[1], c[2]] for c in coeffs])
        ok &= trace_signature_at(h, P) == 2 * m_signature_at(h, P)
        ok &= abs(m_signature_at(h, P)) == abs(model)
    return ok


def _hamilton_constant():
    A = _algebra("Q", "quat(a=-1,b=-1)")
    P = enumerate_orderings(A.tower)[0]
    ok = morita_constant(A, P) == 4
    for entries in ([1], [-2], [3, -1, 5], [Fraction(1, 7), -4]):
        h = HermitianForm.of(A, *entries)
        ok &= trace_signature_at(h, P) == hamilton_trace_signature(entries) == 4 * m_signature_at(h, P)
    return ok


def crit_8():
    A = paper_example_algebra()
    failures = []
    for P in _non_nil(A):
        rep = prime_m_ideal_check(MIdealDescriptor(A, SignKernel(P), SignHKernel(P)))
        if not rep.passed:
            failures.append(("sign", str(P)))
    if not prime_m_ideal_check(MIdealDescriptor(A, Fundamental(), IAsigma())).passed:
        failures.append(("fundamental",))
    for P in _non_nil(A):
        for ideal, expected in ((SignKernel(P), SignHKernel(P)), (ModPKernel(P, 3), ModPHKernel(P, 3)),
                                (ModPKernel(P, 5), ModPHKernel(P, 5))):
            c = classify_prime_m_ideal(A, ideal)
            if c.descriptor.submodule != expected or not c.descriptions_agree:
                failures.append(("classify", str(ideal)))
    return not failures, f"failures={failures}"


def crit_9():
    A = paper_example_algebra()
    j, k = A.gen("j"), A.gen("k")
    results = {}
    for name, a in (("j", j), ("k", k), ("j+k", j + k)):
        rep = fa_prime_criterion_check(a, max_rank=4, max_exponent=3)
        results[name] = (rep["passed"], rep["samplesChecked"])
    return all(p for p, _ in results.values()), str(results)


def crit_10():
    A = paper_example_algebra()
    F = A.tower
    H = default_reference_tuple(A)
    units = [s * u for u in (F.one, F.var("x"), F.var("y"), F.var("x") * F.var("y")) for s in (1, -1)]
    probes = sample_family(A, 1)
    failures = []
    recovered = {}
    for P in _non_nil(A):
        f = {a: sign_at(a, P) for a in units}
        g = {h: h_signature_at(h, H, P) for h in probes}
        m = recover_morphism(f, g, H)
        scaled = recover_morphism(f, {h: 3 * v for h, v in g.items()}, H)
        if m.ordering != P or m.scale != 1:
            failures.append(("canonical", str(P)))
        if scaled.scale != 3 or not morphisms_equivalent(m, scaled):
            failures.append(("scaled", str(P)))
        recovered[P] = m
    for P, Q in itertools.permutations(recovered, 2):
        h = separating_form(A, P, Q, H)
        separated = h_signature_at(h, H, P) == 0 and h_signature_at(h, H, Q) != 0
        if morphisms_equivalent(recovered[P], recovered[Q]) or not separated:
            failures.append(("distinct", str(P), str(Q)))
    return not failures, f"failures={failures}"


def crit_11():
    r = rng(1100)
    mismatches = 0
    count = 0
    for spec in ("Q[[x]]", "R[[x,y]]", "Q[[x,y,z]]"):
        F = parse_field(spec)
        for _ in range(167):
            e = random_element(F, r)
            count += 1
            mismatches += any(sign_at(e, P) != sign_by_evaluation(e, P.signs) for P in enumerate_orderings(F))
    values = [v for v in range(-30, 31) if v]
    hilbert_bad = 0
    for p in (2, 3, 5, 7):
        for _ in range(100):
            a, b = r.choice(values), r.choice(values)
            hilbert_bad += hilbert_symbol(a, b, p) != hilbert_by_search(a, b, p)
    constants = _split_model_constant() and _hamilton_constant()
    ok = mismatches == 0 and hilbert_bad == 0 and constants
    return ok, f"sign corpus {count} ({mismatches} bad), hilbert {hilbert_bad} bad, n_P ok={constants}"


CRITERIA = {
    1: ("example anisotropy", crit_1),
    2: ("example value group", crit_2),
    3: ("example module separation", crit_3),
    4: ("nil orderings", crit_4),
    5: ("H-signature axioms", crit_5),
    6: ("reference constructions", crit_6),
    7: ("Morita invariance", crit_7),
    8: ("prime m-ideals", crit_8),
    9: ("F_a family and boxtimes", crit_9),
    10: ("morphisms into Z", crit_10),
    11: ("oracle gates", crit_11),
}


def run(number):
    name, func = CRITERIA[number]
    start = time.perf_counter()
    try:
        ok, detail = func()
    except Exception as exc:  # report, do not hide
        ok, detail = False, f"{type(exc).__name__}: {exc}"
    elapsed = time.perf_counter() - start
    if elapsed >= LIMIT:
        ok, detail = False, f"{detail} (over the {LIMIT:.0f} s limit)"
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2} {name}: {detail} [{elapsed:.1f} s]"
    return ok, line


@pytest.mark.parametrize("number", sorted(CRITERIA), ids=[f"{n}-{CRITERIA[n][0]}" for n in sorted(CRITERIA)])
def test_criterion(number, capsys):
    ok, line = run(number)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [run(n) for n in sorted(CRITERIA)]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)

"""``witt-forms`` command line.

Exit codes: 0 success, 1 a check found a counterexample, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .algebras_involutions import is_nil, nil_orderings
from .errors import NotAMorphism, ParseError, TrivialMorphism, UndecidableSample, WittFormsError
from .field_tower import enumerate_orderings
from .grammar import (
    parse_algebra,
    parse_element,
    parse_field,
    parse_hermitian_form,
    parse_ordering,
    parse_quadratic_form,
)
from .hermitian_signatures import (
    ReferenceTuple,
    default_reference_tuple,
    is_hyperbolic,
    is_reference_tuple,
    single_reference,
    total_h_signature,
)
from .quadratic_witt import Fundamental, ModPKernel, SignKernel, is_witt_zero, signature_vector
from .tristate import UNKNOWN
from .witt_module_ideals import (
    CustomGenerators,
    IAsigma,
    IFtimesW,
    MIdealDescriptor,
    ModPHKernel,
    SignHKernel,
    paper_example_report,
    prime_m_ideal_check,
    recover_morphism,
)

SCHEMA = "witt-forms/1"


class InputError(Exception):
    pass


def _rows(values: dict) -> list[dict]:
    return [{"ordering": P.label(), "signs": list(P.signs), "value": v} for P, v in values.items()]


def _reference(text: str | None, A) -> ReferenceTuple:
    if not text:
        return default_reference_tuple(A)
    forms = [parse_hermitian_form(part.strip(), A) for part in text.split(";") if part.strip()]
    H = ReferenceTuple.of(forms, A)
    if not is_reference_tuple(H):
        raise InputError("the given forms are not a tuple of reference forms")
    return H


def _tri(value):
    return "unknown" if value is UNKNOWN else value


# -- subcommands ---------------------------------------------------------------

def cmd_orderings(args):
    F = parse_field(args.field)
    return 0, {"orderings": [{"ordering": P.label(), "signs": list(P.signs)} for P in enumerate_orderings(F)]}, "quadratic_witt"


def cmd_qsig(args):
    F = parse_field(args.field)
    q = parse_quadratic_form(args.form, F)
    sig = signature_vector(q)
    result = {"form": str(q), "signatures": _rows(sig)}
    if F.height == 0:
        result["signature"] = next(iter(sig.values()))
    return 0, result, "quadratic_witt"


def cmd_hsig(args):
    F = parse_field(args.field)
    A = parse_algebra(args.algebra, F)
    h = parse_hermitian_form(args.form, A)
    H = _reference(args.reference, A)
    return 0, {
        "algebra": A.spec(),
        "form": str(h),
        "reference": [str(r) for r in H],
        "signatures": _rows(total_h_signature(h, H)),
    }, "hermitian_signatures"


def cmd_nil(args):
    F = parse_field(args.field)
    A = parse_algebra(args.algebra, F)
    return 0, {
        "algebra": A.spec(),
        "nil": [P.label() for P in nil_orderings(A)],
        "orderings": [{"ordering": P.label(), "nil": is_nil(A, P)} for P in enumerate_orderings(F)],
    }, "algebras_involutions"


def cmd_witt_zero(args):
    F = parse_field(args.field)
    if args.algebra:
        A = parse_algebra(args.algebra, F)
        h = parse_hermitian_form(args.form, A)
        return 0, {"form": str(h), "wittZero": _tri(is_hyperbolic(h))}, "hermitian_signatures"
    q = parse_quadratic_form(args.form, F)
    return 0, {"form": str(q), "wittZero": is_witt_zero(q)}, "quadratic_witt"


def cmd_torsion(args):
    F = parse_field(args.field)
    if args.algebra:
        A = parse_algebra(args.algebra, F)
        h = parse_hermitian_form(args.form, A)
        sig = total_h_signature(h, _reference(args.reference, A))
        return 0, {"form": str(h), "torsion": not any(sig.values()), "signatures": _rows(sig)}, "hermitian_signatures"
    q = parse_quadratic_form(args.form, F)
    sig = signature_vector(q)
    return 0, {"form": str(q), "torsion": not any(sig.values()), "signatures": _rows(sig)}, "quadratic_witt"


def cmd_reference(args):
    F = parse_field(args.field)
    A = parse_algebra(args.algebra, F)
    H = _reference(args.forms, A)
    h0 = single_reference(H)
    return 0, {
        "algebra": A.spec(),
        "reference": [str(r) for r in H],
        "singleReferenceRank": h0.rank,
        "singleReference": str(h0),
        "singleReferenceSignatures": _rows(total_h_signature(h0, H)),
    }, "hermitian_signatures"


def cmd_paper_example(args):
    report = paper_example_report()
    ok = (report["anisotropic"] and report["gammaIndex"] == 4 and report["ifwGeneratorsEven"]
          and abs(report["residueBasisDeterminant"]) == 1 and report["ifwDiffersFromIAsigma"])
    return (0 if ok else 1), report, "witt_module_ideals"


def _parse_ideal(text: str, F):
    t = text.strip()
    if t == "fundamental":
        return Fundamental()
    if t.startswith("sign"):
        return SignKernel(parse_ordering(t[4:], F))
    if t.startswith("modp"):
        body = t[4:].strip()
        ordering, p = _ordering_and_p(body, F, text)
        return ModPKernel(ordering, p)
    raise ParseError(f"ideal must be fundamental, sign(...) or modp(...;p=..), got {text!r}")


def _ordering_and_p(body: str, F, text: str):
    if not (body.startswith("(") and body.endswith(")")) or ";" not in body:
        raise ParseError(f"expected (x>0,...;p=<prime>) in {text!r}")
    ord_part, _, p_part = body[1:-1].partition(";")
    key, _, value = p_part.partition("=")
    if key.strip() != "p" or not value.strip().isdigit():
        raise ParseError(f"expected p=<prime> in {text!r}")
    try:
        return parse_ordering(f"({ord_part})", F), int(value)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def _parse_submodule(text: str, A):
    t = text.strip()
    F = A.tower
    if t == "iasigma":
        return IAsigma()
    if t == "ifw":
        return IFtimesW()
    if t.startswith("signh"):
        return SignHKernel(parse_ordering(t[5:], F))
    if t.startswith("modph"):
        ordering, p = _ordering_and_p(t[5:].strip(), F, text)
        return ModPHKernel(ordering, p)
    if t.startswith("gens(") and t.endswith(")"):
        forms = [parse_hermitian_form(part.strip(), A) for part in t[5:-1].split(";") if part.strip()]
        return CustomGenerators(tuple(forms))
    raise ParseError(f"submodule must be signh(..), modph(..;p=..), iasigma, ifw or gens(<..>;..), got {text!r}")


def cmd_mideal(args):
    F = parse_field(args.field)
    A = parse_algebra(args.algebra, F)
    try:
        ideal = _parse_ideal(args.ideal, F)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    d = MIdealDescriptor(A, ideal, _parse_submodule(args.submodule, A))
    try:
        report = prime_m_ideal_check(d, n=args.samples, seed=args.seed)
    except UndecidableSample as exc:
        return 1, {"passed": False, "undecidable": str(exc)}, "witt_module_ideals"
    return (0 if report.passed else 1), report.to_dict(), "witt_module_ideals"


def _load_json(path: str) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict) or not isinstance(data.get("values"), dict):
        raise InputError(f"{path} must be a JSON object with a 'values' object")
    return data


def cmd_morphism(args):
    fdata, gdata = _load_json(args.f), _load_json(args.g)
    F = parse_field(fdata.get("field", gdata.get("field", "")))
    if gdata.get("field", fdata.get("field")) != fdata.get("field", gdata.get("field")):
        raise InputError("f and g files name different fields")
    A = parse_algebra(gdata.get("algebra", ""), F)
    try:
        f_values = {parse_element(k, F): int(v) for k, v in fdata["values"].items()}
        g_values = {parse_hermitian_form(k, A): int(v) for k, v in gdata["values"].items()}
    except (TypeError, ValueError) as exc:
        raise InputError(f"bad values: {exc}") from exc
    H = _reference(gdata.get("reference"), A)
    try:
        m = recover_morphism(f_values, g_values, H)
    except TrivialMorphism as exc:
        return 1, {"trivial": True, "reason": str(exc),
                   "ordering": exc.ordering.label() if exc.ordering else None, "nil": exc.is_nil}, "witt_module_ideals"
    except NotAMorphism as exc:
        return 1, {"morphism": False, "reason": str(exc)}, "witt_module_ideals"
    return 0, {
        "morphism": True,
        "ordering": m.ordering.label(),
        "scale": str(m.scale),
        "reference": [str(r) for r in m.reference],
    }, "witt_module_ideals"


# -- plumbing -----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="witt-forms", description="Signatures and Witt groups of forms over Laurent towers.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", choices=("json", "table"), default="table")
    common.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_text, field=True):
        sp = sub.add_parser(name, parents=[common], help=help_text)
        if field:
            sp.add_argument("--field", required=True, help='e.g. "R[[x,y]]"')
        sp.set_defaults(func=func)
        return sp

    add("orderings", cmd_orderings, "list the orderings of a field")
    add("qsig", cmd_qsig, "signatures of a quadratic form").add_argument("--form", required=True)
    sp = add("hsig", cmd_hsig, "H-signatures of a hermitian form")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--form", required=True)
    sp.add_argument("--reference", help="reference forms separated by ';'")
    add("nil", cmd_nil, "nil orderings of an algebra with involution").add_argument("--algebra", required=True)
    for name, func in (("witt-zero", cmd_witt_zero), ("torsion", cmd_torsion)):
        sp = add(name, func, f"{name} test for a quadratic or hermitian form")
        sp.add_argument("--algebra")
        sp.add_argument("--form", required=True)
        if name == "torsion":
            sp.add_argument("--reference")
    sp = add("reference", cmd_reference, "reference tuple and a single reference form")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--forms", help="reference forms separated by ';' (default: rank-one symmetric basis)")
    add("paper-example", cmd_paper_example, "report on the (x, y) quaternion example", field=False)

    mideal = sub.add_parser("mideal", help="prime m-ideal checks")
    msub = mideal.add_subparsers(dest="action", required=True)
    sp = msub.add_parser("check", parents=[common])
    sp.add_argument("--field", required=True)
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--ideal", required=True, help="fundamental | sign(x>0,...) | modp(x>0,...;p=3)")
    sp.add_argument("--submodule", required=True, help="signh(..) | modph(..;p=3) | iasigma | ifw | gens(<1>;<j>)")
    sp.add_argument("--samples", type=int, default=200)
    sp.set_defaults(func=cmd_mideal)

    morph = sub.add_parser("morphism", help="pairs of morphisms into Z")
    rsub = morph.add_subparsers(dest="action", required=True)
    sp = rsub.add_parser("recover", parents=[common])
    sp.add_argument("--f", required=True, help="JSON file: field and values of f on <a>")
    sp.add_argument("--g", required=True, help="JSON file: field, algebra and values of g on forms")
    sp.set_defaults(func=cmd_morphism)
    return p


def _table(value, indent=0) -> list[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        if "ordering" in value and "value" in value:
            return [f"{pad}{value['ordering']:<24} {value['value']}"]
        for k, v in value.items():
            if isinstance(v, (dict, list)):
                lines.append(f"{pad}{k}:")
                lines += _table(v, indent + 1)
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for v in value:
            if isinstance(v, (dict, list)):
                lines += _table(v, indent)
            else:
                lines.append(f"{pad}{_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(value)}")
    return lines


def _scalar(v) -> str:
    if v is True:
        return "true"
    if v is False:
        return "false"
    if v is None:
        return "-"
    return str(v)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        code, result, module = args.func(args)
    except (ParseError, InputError) as exc:
        print(f"witt-forms: error: {exc}", file=sys.stderr)
        return 2
    except WittFormsError as exc:
        print(f"witt-forms: error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 2
    if args.output == "json":
        doc = {
            "schema": SCHEMA,
            "version": __version__,
            "command": args.command if not getattr(args, "action", None) else f"{args.command} {args.action}",
            "seed": args.seed,
            "provenance": {"module": module},
            "result": result,
        }
        print(json.dumps(doc, indent=2, default=_json_default))
    else:
        print("\n".join(_table(result)))
    return code


def _json_default(o):
    if isinstance(o, Fraction):
        return str(o)
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


if __name__ == "__main__":
    sys.exit(main())

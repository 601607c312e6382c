"""Text grammars for fields, elements, forms and algebras.

Expressions use ``+ - * / ^`` with integer exponents, integer literals and
names; they are parsed with :mod:`ast` and evaluated over a namespace of
library objects, so the same evaluator serves field elements and algebra
elements.
"""
from __future__ import annotations

import ast
import re
from fractions import Fraction
from typing import Callable, Mapping

from .errors import ParseError
from .field_tower import Base, FieldElement, FieldTower

_FIELD_RE = re.compile(r"^\s*([QR])\s*(?:\[\[\s*([^\]]*)\]\])?\s*$")


def parse_field(text: str) -> FieldTower:
    """``Q``, ``R``, ``Q[[x,y]]`` or ``R[[x,y]]`` meaning ``B((x))((y))``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ParseError(f"bad field spec {text!r}")
    base = Base.RATIONALS if m.group(1) == "Q" else Base.REAL_CLOSED
    names = tuple(v.strip() for v in (m.group(2) or "").split(",") if v.strip())
    for v in names:
        if not v.isidentifier():
            raise ParseError(f"bad variable name {v!r}")
    try:
        return FieldTower(base, names)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


def evaluate(text: str, names: Mapping[str, object], constant: Callable[[Fraction], object]):
    """Evaluate an arithmetic expression over ``names``; literals go through ``constant``."""
    try:
        tree = ast.parse(text.replace("^", "**").strip(), mode="eval")
    except SyntaxError as exc:
        raise ParseError(f"cannot parse {text!r}: {exc.msg}") from exc
    return _eval(tree.body, names, constant, text)


def _eval(node, names, constant, text):
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, int):
            raise ParseError(f"only integer literals allowed in {text!r}")
        return constant(Fraction(node.value))
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise ParseError(f"unknown name {node.id!r} in {text!r}")
        return names[node.id]
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval(node.operand, names, constant, text)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            k = _int_exponent(node.right, text)
            base = _eval(node.left, names, constant, text)
            if isinstance(base, Fraction):
                return base**k
            if k < 0:
                return base.inverse() ** (-k)
            return base**k
        left = _eval(node.left, names, constant, text)
        right = _eval(node.right, names, constant, text)
        try:
            if isinstance(node.op, ast.Add):
                return left + right
            if isinstance(node.op, ast.Sub):
                return left - right
            if isinstance(node.op, ast.Mult):
                return left * right
            if isinstance(node.op, ast.Div):
                return left / right
        except ZeroDivisionError as exc:
            raise ParseError(f"division by zero in {text!r}") from exc
    raise ParseError(f"unsupported syntax in {text!r}")


def _int_exponent(node, text) -> int:
    sign = 1
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        sign = -1 if isinstance(node.op, ast.USub) else 1
        node = node.operand
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return sign * node.value
    raise ParseError(f"exponents must be integer literals in {text!r}")


def parse_element(text: str, tower: FieldTower) -> FieldElement:
    names = {v: tower.var(v) for v in tower.variables}
    value = evaluate(text, names, tower)
    if isinstance(value, Fraction):
        value = tower(value)
    return value


def split_form(text: str) -> list[str]:
    """Split ``<e1, e2, ...>`` into entry strings (commas at paren depth 0)."""
    s = text.strip()
    if not (s.startswith("<") and s.endswith(">")):
        raise ParseError(f"forms are written <e1, e2, ...>, got {text!r}")
    body = s[1:-1].strip()
    if not body:
        return []
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    if any(not p.strip() for p in parts):
        raise ParseError(f"empty entry in {text!r}")
    return [p.strip() for p in parts]


_ALGEBRA_RE = re.compile(r"^\s*(\w+)\s*(?:\((.*)\))?\s*$", re.S)


def _split_top(text: str, sep: str) -> list[str]:
    parts, depth, cur = [], 0, ""
    for ch in text:
        depth += ch == "("
        depth -= ch == ")"
        if ch == sep and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return [p.strip() for p in parts]


def _keywords(body: str, text: str) -> dict[str, str]:
    out = {}
    for group in _split_top(body, ";"):
        for item in _split_top(group, ","):
            if not item:
                continue
            key, eq, value = item.partition("=")
            if not eq:
                raise ParseError(f"expected key=value in {text!r}, got {item!r}")
            key = key.strip()
            if key in out:
                raise ParseError(f"duplicate key {key!r} in {text!r}")
            out[key] = value.strip()
    return out


def parse_algebra(text: str, tower: FieldTower):
    """``base``, ``etale(d=<elt>)`` or ``quat(a=<elt>, b=<elt>; inv=symp|orth(<pure elt>))``."""
    from .algebras_involutions import base_algebra, etale_algebra, quaternion_algebra
    from .errors import WittFormsError

    m = _ALGEBRA_RE.match(text)
    if not m:
        raise ParseError(f"bad algebra spec {text!r}")
    kind, body = m.group(1), m.group(2)
    kw = _keywords(body or "", text)
    try:
        if kind == "base" and not kw:
            return base_algebra(tower)
        if kind == "etale" and set(kw) == {"d"}:
            return etale_algebra(tower, parse_element(kw["d"], tower))
        if kind == "quat" and set(kw) in ({"a", "b"}, {"a", "b", "inv"}):
            a, b = parse_element(kw["a"], tower), parse_element(kw["b"], tower)
            inv = kw.get("inv", "symp")
            if inv == "symp":
                return quaternion_algebra(tower, a, b)
            om = re.match(r"^orth\((.*)\)$", inv, re.S)
            if not om:
                raise ParseError(f"inv must be symp or orth(<elt>), got {inv!r}")
            plain = quaternion_algebra(tower, a, b)
            s = parse_algebra_element(om.group(1), plain)
            return quaternion_algebra(tower, a, b, orthogonal=s.coords)
    except ParseError:
        raise
    except (WittFormsError, ValueError) as exc:
        raise ParseError(f"invalid algebra {text!r}: {exc}") from exc
    raise ParseError(f"bad algebra spec {text!r}")


def parse_algebra_element(text: str, algebra):
    """Expressions in the basis names (``i, j, k`` or ``w``) and tower variables."""
    tower = algebra.tower
    names = {v: algebra.scalar(tower.var(v)) for v in tower.variables}
    for n, e in zip(algebra.basis_names[1:], algebra.basis()[1:]):
        if n in names:
            raise ParseError(f"variable {n!r} clashes with a basis element")
        names[n] = e
    value = evaluate(text, names, algebra.scalar)
    if isinstance(value, Fraction):
        value = algebra.scalar(value)
    return value


def parse_quadratic_form(text: str, tower: FieldTower):
    from .quadratic_witt import QuadraticForm
    from .errors import SingularForm

    try:
        return QuadraticForm(tower, tuple(parse_element(e, tower) for e in split_form(text)))
    except SingularForm as exc:
        raise ParseError(str(exc)) from exc


def parse_hermitian_form(text: str, algebra):
    from .hermitian_signatures import HermitianForm
    from .errors import SingularForm

    try:
        return HermitianForm(algebra, tuple(parse_algebra_element(e, algebra) for e in split_form(text)))
    except (SingularForm, ValueError) as exc:
        raise ParseError(str(exc)) from exc


def parse_ordering(text: str, tower: FieldTower):
    """``(x>0,y<0)``: one comparison per tower variable, in any order."""
    from .field_tower import Ordering

    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise ParseError(f"orderings are written (x>0,y<0), got {text!r}")
    signs = {}
    for item in filter(None, (p.strip() for p in s[1:-1].split(","))):
        m = re.match(r"^(\w+)\s*([<>])\s*0$", item)
        if not m or m.group(1) not in tower.variables or m.group(1) in signs:
            raise ParseError(f"bad ordering literal {item!r} in {text!r}")
        signs[m.group(1)] = 1 if m.group(2) == ">" else -1
    if set(signs) != set(tower.variables):
        raise ParseError(f"ordering {text!r} must fix the sign of every variable of {tower}")
    return Ordering(tower, tuple(signs[v] for v in tower.variables))

"""Independent reference computations used to gate the library.

None of these call into the code they check: signs come from exact
evaluation at a rational point, Hilbert symbols from exhaustive solubility
counts, and Morita signatures from explicit matrix models.
"""
from __future__ import annotations

from fractions import Fraction
from math import isqrt

import numpy as np
from sympy import factorint


# -- signs by evaluation ------------------------------------------------------

def _terms(poly):
    return [(m, Fraction(int(c.numerator), int(c.denominator))) for m, c in poly.terms()]


def _eval(terms, point):
    total = Fraction(0)
    for mono, c in terms:
        v = c
        for x, e in zip(point, mono):
            v *= x**e
        total += v
    return total


def sign_by_evaluation(e, signs, base=10**4):
    """Sign of ``e`` at the ordering with ``signs``, by evaluating at
    ``x_i = s_i / N**c_i`` with ``c_i = (2D + 1)**i`` (``D`` the largest
    exponent).  Checked stable under ``N -> 10 N``."""
    num, den = _terms(e.num), _terms(e.den)
    D = max(max(m) if m else 0 for m, _ in num + den)
    width = 2 * D + 1
    results = set()
    for N in (base, 10 * base):
        point = [Fraction(s, N ** (width**i)) for i, s in enumerate(signs)]
        v = _eval(num, point) / _eval(den, point)
        results.add((v > 0) - (v < 0))
    assert len(results) == 1, "evaluation point not deep enough"
    return results.pop()


# -- Hilbert symbols by exhaustive solubility ------------------------------

def _squarefree_int(q: Fraction) -> int:
    n = q.numerator * q.denominator  # same square class as q
    sign = -1 if n < 0 else 1
    out = 1
    for p, e in factorint(abs(n)).items():
        if e % 2:
            out *= p
    return sign * out


def hilbert_by_search(a, b, p) -> int:
    """``(a, b)_p`` by looking for a primitive solution of ``a X^2 + b Y^2 = Z^2``
    modulo ``p^k`` (``k = 5`` for ``p = 2``, else 3); enough for squarefree
    ``a, b`` by Hensel's lemma."""
    a, b = _squarefree_int(Fraction(a)), _squarefree_int(Fraction(b))
    k = 5 if p == 2 else 3
    m = p**k
    r = np.arange(m, dtype=np.int64)
    sq = (r * r) % m
    all_sq = np.zeros(m, dtype=bool)
    all_sq[sq] = True
    unit_sq = np.zeros(m, dtype=bool)
    unit_sq[sq[r % p != 0]] = True
    lhs = ((a % m) * sq[:, None] + (b % m) * sq[None, :]) % m
    xy_unit = (r % p != 0)[:, None] | (r % p != 0)[None, :]
    ok = np.where(xy_unit, all_sq[lhs], unit_sq[lhs])
    return 1 if ok.any() else -1


def hilbert_real(a, b) -> int:
    return -1 if a < 0 and b < 0 else 1


# -- explicit matrix models --------------------------------------------------

def _sig_sym(mat) -> int:
    """Signature of a rational symmetric matrix by exact Gaussian congruence."""
    m = [[Fraction(v) for v in row] for row in mat]
    n = len(m)
    sig = 0
    while n:
        p = next((i for i in range(n) if m[i][i]), None)
        if p is None:
            r, c = next((r, c) for r in range(n) for c in range(n) if m[r][c])
            for t in range(n):
                m[r][t] += m[c][t]
            for t in range(n):
                m[t][r] += m[t][c]
            p = r
        d = m[p][p]
        sig += 1 if d > 0 else -1
        rest = [i for i in range(n) if i != p]
        m = [[m[i][j] - m[i][p] * m[p][j] / d for j in rest] for i in rest]
        n -= 1
    return sig


def split_model(coords):
    """``(1, 1)_Q -> M_2(Q)``: ``i -> diag(1, -1)``, ``j -> [[0, 1], [1, 0]]``."""
    u0, u1, u2, u3 = (Fraction(c) for c in coords)
    return [[u0 + u1, u2 + u3], [u2 - u3, u0 - u1]]


SPLIT_PHI = [[0, 1], [1, 0]]


def split_model_signature(entries) -> int:
    """Signature of the quadratic form Morita-equivalent to ``<s1, ...>`` over
    ``(1, 1)_Q`` with ``Int(i) o gamma``: sum of ``sig(Phi rho(s))``."""
    total = 0
    for coords in entries:
        r = split_model(coords)
        g = [[sum(Fraction(SPLIT_PHI[a][t]) * r[t][b] for t in range(2)) for b in range(2)] for a in range(2)]
        assert g[0][1] == g[1][0], "entry is not symmetric for the involution"
        total += _sig_sym(g)
    return total


def _hamilton_left(coords, a=-1, b=-1):
    """Left multiplication by ``u`` on the basis ``1, i, j, k`` of ``(a, b)``."""
    u0, u1, u2, u3 = (Fraction(c) for c in coords)
    # columns are u*1, u*i, u*j, u*k from i^2 = a, j^2 = b, ij = k = -ji
    return [
        [u0, a * u1, b * u2, -a * b * u3],
        [u1, u0, b * u3, -b * u2],
        [u2, -a * u3, u0, a * u1],
        [u3, -u2, u1, u0],
    ]


def hamilton_trace_signature(scalars, a=-1, b=-1) -> int:
    """Signature of ``x -> Trd(gamma(x) c x)`` for ``<c1, ...>`` over ``(a, b)_Q``,
    via traces of 4x4 left-regular matrices (``Trd = tr / 2``)."""
    basis = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]]
    conj = [[1, 0, 0, 0], [0, -1, 0, 0], [0, 0, -1, 0], [0, 0, 0, -1]]
    total = 0
    for c in scalars:
        c = Fraction(c)
        mats = [_hamilton_left(e, a, b) for e in basis]
        cmats = [_hamilton_left(e, a, b) for e in conj]
        gram = []
        for x in range(4):
            row = []
            for y in range(4):
                prod = _matmul(cmats[x], mats[y])
                row.append(c * sum(prod[t][t] for t in range(4)) / 2)
            gram.append(row)
        total += _sig_sym(gram)
    return total


def _matmul(p, q):
    return [[sum(p[r][t] * q[t][c] for t in range(len(q))) for c in range(len(q[0]))] for r in range(len(p))]


def is_rational_square(q: Fraction) -> bool:
    q = Fraction(q)
    return q >= 0 and isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def is_sum_of_two_squares(q: Fraction) -> bool:
    """Rational ``q > 0`` is a sum of two rational squares iff no prime
    ``3 mod 4`` divides its numerator times denominator to an odd power."""
    q = Fraction(q)
    if q <= 0:
        return False
    n = q.numerator * q.denominator
    return all(e % 2 == 0 for p, e in factorint(n).items() if p % 4 == 3)


def ternary_isotropic_by_search(a: int, b: int, c: int) -> bool:
    """Search ``a X^2 + b Y^2 + c Z^2 = 0`` inside Holzer's box (valid for
    squarefree, pairwise coprime coefficients)."""
    bx, by, bz = (isqrt(abs(b * c)), isqrt(abs(a * c)), isqrt(abs(a * b)))
    for x in range(bx + 1):
        for y in range(by + 1):
            for z in range(bz + 1):
                if (x, y, z) != (0, 0, 0) and a * x * x + b * y * y + c * z * z == 0:
                    return True
    return False

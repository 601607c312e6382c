"""Small exact linear algebra over fields and division rings.

Matrix entries only need ``+ - *``, truth value (nonzero) and ``inverse()``.
"""
from __future__ import annotations

from typing import Callable, Sequence

from .errors import NonInvertible, SingularForm


def congruence_diagonalize(gram: Sequence[Sequence], conj: Callable = lambda u: u, two=None) -> list:
    """Diagonalize a ``conj``-hermitian matrix by congruence ``C* G C``.

    Vectors are right linear combinations of the basis, so the Schur step is
    ``G[t][u] - G[t][p] d^-1 G[p][u]``.  Raises :class:`SingularForm` when the
    remaining block vanishes.
    """
    g = [list(row) for row in gram]
    n = len(g)
    for r in range(n):
        if len(g[r]) != n:
            raise ValueError("Gram matrix is not square")
        for c in range(r, n):
            if conj(g[r][c]) != g[c][r]:
                raise ValueError(f"Gram matrix is not hermitian at ({r}, {c})")
    diag = []
    while g:
        n = len(g)
        p = next((i for i in range(n) if g[i][i]), None)
        if p is None:
            rc = next(((r, c) for r in range(n) for c in range(r + 1, n) if g[r][c]), None)
            if rc is None:
                raise SingularForm("form is degenerate")
            r, c = rc
            lam = g[r][c].inverse()
            # e_r <- e_r + e_c * lam makes h(e_r, e_r) = 2
            row = [g[r][t] + conj(lam) * g[c][t] for t in range(n)]
            col = [g[t][r] + g[t][c] * lam for t in range(n)]
            diag_rr = g[r][r] + g[r][c] * lam + conj(lam) * g[c][r] + conj(lam) * g[c][c] * lam
            for t in range(n):
                g[r][t] = row[t]
                g[t][r] = col[t]
            g[r][r] = diag_rr
            p = r
        d = g[p][p]
        try:
            dinv = d.inverse()
        except (NonInvertible, ZeroDivisionError) as exc:
            raise NonInvertible(f"pivot {d} is not invertible") from exc
        rest = [i for i in range(n) if i != p]
        g = [[g[t][u] - g[t][p] * dinv * g[p][u] for u in rest] for t in rest]
        diag.append(d)
    return diag


def nullspace(rows: Sequence[Sequence], zero, one) -> list[list]:
    """Basis of ``{v : M v = 0}``, one vector per free column (1 at that column)."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = m[r][c].inverse()
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(ncols) if c not in pivots):
        v = [zero] * ncols
        v[free] = one
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][free]
        basis.append(v)
    return basis


def bareiss_pivots(gram: Sequence[Sequence], exquo: Callable) -> list:
    """Fraction-free LDL for a symmetric matrix over an integral domain.

    Returns ``d_1, ..., d_n`` where ``d_k`` is the k-th leading principal minor
    of a congruent matrix, so ``d_k / d_(k-1)`` are diagonal entries of an
    isometric diagonal form.  Zero pivots are repaired by symmetric swaps or by
    ``e_k <- e_k + e_j``; both act linearly on the bordered minors still to be
    eliminated.
    """
    m = [list(row) for row in gram]
    n = len(m)
    prev = None
    pivots = []
    for k in range(n):
        if not m[k][k]:
            j = next((j for j in range(k + 1, n) if m[j][j]), None)
            if j is not None:
                m[k], m[j] = m[j], m[k]
                for row in m:
                    row[k], row[j] = row[j], row[k]
            else:
                j = next((j for j in range(k + 1, n) if m[k][j]), None)
                if j is None:
                    raise SingularForm("form is degenerate")
                m[k] = [a + b for a, b in zip(m[k], m[j])]
                for row in m:
                    row[k] = row[k] + row[j]
        piv = m[k][k]
        pivots.append(piv)
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                v = m[i][j] * piv - m[i][k] * m[k][j]
                m[i][j] = v if prev is None else exquo(v, prev)
        prev = piv
    return pivots

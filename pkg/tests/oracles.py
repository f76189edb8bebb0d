"""Independent brute-force oracles used by the test suite.

Nothing here goes through Hom complexes, truncation or the endomorphism-ring code;
the only shared dependency is exact rank and kernel computation.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from math import comb

from aisles.linalg import Matrix, kernel_basis, rank


def _vec_index(offsets, p, r, c, ncols):
    return offsets[p] + r * ncols + c


def _chain_data(S, T, k, homotopy=False):
    """Variable layout for degreewise maps ``S^p -> T^{p+k}`` (``k - 1`` for homotopies)."""
    shift = k - 1 if homotopy else k
    degs = [p for p in sorted(S.terms) if T.dim(p + shift)]
    offsets, n = {}, 0
    for p in degs:
        offsets[p] = n
        n += T.dim(p + shift) * S.dim(p)
    return degs, offsets, n, shift


def _intertwining_rows(S, T, degs, offsets, n, shift):
    """Equations ``a_T f - f a_S = 0`` for every basis element ``a``."""
    A = S.algebra
    rows = []
    for p in degs:
        X, Y = S.term(p), T.term(p + shift)
        nr, nc = Y.dim, X.dim
        for i in range(A.dim):
            aS, aT = X.action[i].rows, Y.action[i].rows
            for r in range(nr):
                for c in range(nc):
                    row = [0] * n
                    for t in range(nr):
                        if aT[r][t]:
                            row[_vec_index(offsets, p, t, c, nc)] += aT[r][t]
                    for s in range(nc):
                        if aS[s][c]:
                            row[_vec_index(offsets, p, r, s, nc)] -= aS[s][c]
                    if any(row):
                        rows.append(row)
    return rows


def _unpack(vec, S, T, degs, offsets, shift):
    out = {}
    for p in degs:
        nr, nc = T.dim(p + shift), S.dim(p)
        o = offsets[p]
        out[p] = [[vec[o + r * nc + c] for c in range(nc)] for r in range(nr)]
    return out


def _matmul(X, Y):
    if not X or not Y:
        return []
    return [[sum(X[i][t] * Y[t][j] for t in range(len(Y))) for j in range(len(Y[0]))] for i in range(len(X))]


def _dense(m):
    return [list(r) for r in m.rows]


def bruteforce_hom_dim(S, T, k: int = 0) -> int:
    """``dim Hom_K(S, T[k])`` in the homotopy category, solving for intertwiners directly."""
    F = S.field
    sign = -1 if k % 2 else 1
    degs, offsets, n, shift = _chain_data(S, T, k)
    if n == 0:
        return 0
    rows = _intertwining_rows(S, T, degs, offsets, n, shift)
    # chain condition f^{p+1} d_S^p = sign * d_T^{p+k} f^p
    for p in set(degs) | {q - 1 for q in degs}:
        nr, nc = T.dim(p + 1 + shift), S.dim(p)
        if not nr or not nc:
            continue
        dS = _dense(S.d(p))
        dT = _dense(T.d(p + shift))
        for r in range(nr):
            for c in range(nc):
                row = [0] * n
                if p + 1 in offsets:
                    w = S.dim(p + 1)
                    for t in range(w):
                        if dS[t][c]:
                            row[_vec_index(offsets, p + 1, r, t, w)] += dS[t][c]
                if p in offsets:
                    for t in range(T.dim(p + shift)):
                        if dT[r][t]:
                            row[_vec_index(offsets, p, t, c, nc)] -= sign * dT[r][t]
                if any(row):
                    rows.append(row)
    if rows:
        Z = kernel_basis(Matrix(F, len(rows), n, [[F(x) for x in r] for r in rows]))
        zdim = Z.ncols
    else:
        zdim = n
    if zdim == 0:
        return 0
    # null-homotopic maps d_{T[k]} h + h d_S
    hdegs, hoff, hn, hshift = _chain_data(S, T, k, homotopy=True)
    if hn == 0:
        return zdim
    hrows = _intertwining_rows(S, T, hdegs, hoff, hn, hshift)
    if hrows:
        Hb = kernel_basis(Matrix(F, len(hrows), hn, [[F(x) for x in r] for r in hrows])).columns()
    else:
        Hb = [[F.one if i == j else F.zero for i in range(hn)] for j in range(hn)]
    images = []
    for hv in Hb:
        h = _unpack(hv, S, T, hdegs, hoff, hshift)
        vec = [F.zero] * n
        for p in degs:
            nr, nc = T.dim(p + shift), S.dim(p)
            acc = [[F.zero] * nc for _ in range(nr)]
            if p in h and nr:
                dT = _dense(T.d(p - 1 + shift))
                for i, row in enumerate(_matmul(dT, h[p])):
                    for j, x in enumerate(row):
                        acc[i][j] += sign * x
            if p + 1 in h and nc:
                dS = _dense(S.d(p))
                for i, row in enumerate(_matmul(h[p + 1], dS)):
                    for j, x in enumerate(row):
                        acc[i][j] += x
            o = offsets[p]
            for i in range(nr):
                for j in range(nc):
                    vec[o + i * nc + j] = acc[i][j]
        images.append(vec)
    null = rank(Matrix.from_columns(F, images, n)) if images else 0
    return zdim - null


def bruteforce_block_pattern(E, blocks):
    """``{(a, b): dim Hom(E_a, E_b)}`` from the block subcomplexes, by brute force."""
    from aisles.complexes import block_subcomplex
    subs = {a: block_subcomplex(E, a)[0] for a in blocks}
    return {(a, b): bruteforce_hom_dim(subs[a], subs[b], 0) for a in blocks for b in blocks}


def monomial_count(nvars: int, degree: int) -> int:
    """Monomials of a given degree, enumerated as sorted exponent tuples."""
    if degree < 0:
        return 0
    seen = set()
    for word in itertools.product(range(nvars), repeat=degree):
        seen.add(tuple(sorted(word)))
    return len(seen)


def beilinson_dim_oracle(d: int) -> int:
    """Total number of paths modulo commutativity, one monomial count per vertex pair."""
    return sum(monomial_count(d + 1, j - i) for i in range(d + 1) for j in range(i, d + 1))


def beilinson_closed_form(d: int) -> int:
    return sum((d + 1 - k) * comb(k + d, d) for k in range(d + 1))


def soft_geq_dims(M, n: int) -> dict:
    """Cohomology dimensions of the soft truncation ``tau^{>= n} M``, read off ``M``."""
    return {k: h for k, h in M.cohomology_dims().items() if k >= n}


def kronecker_structure_constants():
    """Multiplication of the Kronecker algebra in the basis ``e0, e1, a, b``; ``a = e1 a e0``."""
    one = Fraction(1)
    t = {}
    names = ["e0", "e1", "a", "b"]
    for x in names:
        for y in names:
            t[(x, y)] = None
    t[("e0", "e0")] = "e0"
    t[("e1", "e1")] = "e1"
    t[("e1", "a")] = "a"
    t[("e1", "b")] = "b"
    t[("a", "e0")] = "a"
    t[("b", "e0")] = "b"
    return names, t, one

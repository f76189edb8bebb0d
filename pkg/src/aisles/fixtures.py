"""Named algebras and complexes, the Kronecker tilt, and seeded random samplers."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional

from .algebra import FDAlgebra, dual_numbers, field_algebra, kronecker_algebra
from .complexes import (BoundedComplex, ChainMap, DirectedSystem, HomComplex, block_idempotent,
                        chain_map_space, direct_sum_complexes, module_complex, regular_complex,
                        shift)
from .linalg import QQ, Field, Matrix, kernel_basis
from .rep import (FDModule, direct_sum, hom_module, minimal_presentation, projective,
                  representation, simple_module)
from .tstruct import (AisleCertificate, ConeOf, Extension, FiniteSum, SummandVia, TakeGenerator,
                      ThickCertificate)

FIXTURE_NAMES = ("field-K", "kx2", "kronecker")


def fixture_algebra(name: str, field: Field = QQ) -> FDAlgebra:
    if name in ("field-K", "K"):
        return field_algebra(field)
    if name == "kx2":
        return dual_numbers(field)
    if name == "kronecker":
        return kronecker_algebra(field)
    raise KeyError("unknown fixture algebra %r" % name)


# ---------------------------------------------------------------------------
# the Kronecker tilt

def preprojective(A: FDAlgebra, n: int) -> FDModule:
    """Kronecker module with dimension vector ``(n, n + 1)``; ``a`` and ``b`` are the two shifts."""
    F = A.field
    q = A.quiver
    (la, s, t), (lb, _, _) = q.arrows[0], q.arrows[1]
    a = Matrix(F, n + 1, n)
    b = Matrix(F, n + 1, n)
    for i in range(n):
        a.rows[i][i] = F.one
        b.rows[i + 1][i] = F.one
    return representation(A, {s: n, t: n + 1}, {la: a, lb: b}, name="M(%d,%d)" % (n, n + 1))


def kronecker_tilt(A: Optional[FDAlgebra] = None) -> BoundedComplex:
    """``T = T1 (+) T2``: ``T1 = P(v0) = M(1,2)`` and ``T2`` the projective resolution of ``M(2,3)``."""
    if A is None:
        A = kronecker_algebra()
    T1 = module_complex(projective(A, 0), 0, label="T1")
    P1, P0, d, _ = minimal_presentation(preprojective(A, 2))
    T2 = BoundedComplex(A, {-1: P1, 0: P0}, {-1: d},
                        labels={-1: ("T2",) * len(P1.summands()), 0: ("T2",) * len(P0.summands())})
    return direct_sum_complexes([T1, T2])


def kronecker_tilt_certificate(T: BoundedComplex) -> ThickCertificate:
    """Builds ``A = P(v0) (+) P(v1)`` from ``T``.

    ``P(v1)`` is the cone of the identity on ``P(v0)^2`` into ``T2[-1]``.
    """
    F = T.field
    T_1 = shift(T, -1)
    e1 = block_idempotent(T_1, "T1")
    e2 = block_idempotent(T_1, "T2")
    e1_0 = block_idempotent(T, "T1")
    p0sq = T.terms[0].dim - T.terms[0].summands()[0].dim
    ident = {1: Matrix.identity(F, p0sq)}
    steps = [
        TakeGenerator(0),
        TakeGenerator(-1),
        SummandVia(1, dict(e1.maps)),
        FiniteSum((2, 2)),
        SummandVia(1, dict(e2.maps)),
        ConeOf(3, 4, ident),
        SummandVia(0, dict(e1_0.maps)),
        FiniteSum((6, 5)),
    ]
    return ThickCertificate(steps)


def regular_certificate(shift_by: int = 0) -> ThickCertificate:
    """For ``E = A[shift_by]``: a single shift back to ``A``."""
    return ThickCertificate([TakeGenerator(-shift_by)])


# ---------------------------------------------------------------------------
# random samplers

def _rand_scalar(F: Field, rng: random.Random, bound: int = 2):
    return F(rng.randint(-bound, bound))


def random_module(A: FDAlgebra, rng: random.Random, max_parts: int = 2) -> FDModule:
    """Sum of up to ``max_parts`` pieces drawn from projectives, simples and small representations."""
    pool = [projective(A, i) for i in range(A.n_idempotents)]
    pool += [simple_module(A, i) for i in range(A.n_idempotents)]
    parts = []
    for _ in range(rng.randint(1, max_parts)):
        if _is_kronecker(A) and rng.random() < 0.4:
            parts.append(_random_kronecker_rep(A, rng))
        else:
            parts.append(rng.choice(pool))
    parts = [p for p in parts if p.dim]
    return direct_sum(parts, A)


def _is_kronecker(A: FDAlgebra) -> bool:
    q = getattr(A, "quiver", None)
    return q is not None and len(q.vertices) == 2 and len(q.arrows) == 2 and A.dim == 4


def _random_kronecker_rep(A: FDAlgebra, rng: random.Random) -> FDModule:
    F = A.field
    q = A.quiver
    d0, d1 = rng.randint(0, 2), rng.randint(0, 2)
    if d0 + d1 == 0:
        d1 = 1
    mats = {}
    for lab, _, _ in q.arrows:
        mats[lab] = Matrix(F, d1, d0, [[_rand_scalar(F, rng) for _ in range(d0)] for _ in range(d1)])
    return representation(A, {q.vertices[0]: d0, q.vertices[1]: d1}, mats, name="R")


def random_complex(A: FDAlgebra, rng: random.Random, lo: int = -2, hi: int = 1,
                   perfect: bool = False, density: float = 0.75, max_parts: int = 2) -> BoundedComplex:
    """Random bounded complex in degrees ``lo..hi`` with random differentials."""
    F = A.field
    terms: Dict[int, FDModule] = {}
    for k in range(lo, hi + 1):
        if rng.random() > density:
            continue
        if perfect:
            idx = [rng.randrange(A.n_idempotents) for _ in range(rng.randint(1, max_parts))]
            terms[k] = direct_sum([projective(A, i) for i in idx], A)
        else:
            terms[k] = random_module(A, rng, max_parts)
    diffs = {}
    for k in range(lo, hi):
        if k not in terms or k + 1 not in terms:
            continue
        basis = [h.matrix for h in hom_module(terms[k], terms[k + 1])]
        prev = diffs.get(k - 1)
        if prev is not None and basis:
            # keep only maps killing the image of the previous differential
            n = len(basis)
            prods = [b @ prev for b in basis]
            rows = []
            for r in range(prods[0].nrows):
                for c in range(prods[0].ncols):
                    rows.append([p.rows[r][c] for p in prods])
            ker = kernel_basis(Matrix(F, len(rows), n, rows))
            combos = ker.columns()
            basis = [_combine(F, basis, v) for v in combos]
        if not basis:
            continue
        m = _combine(F, basis, [_rand_scalar(F, rng) for _ in basis])
        if not m.is_zero():
            diffs[k] = m
    return BoundedComplex(A, terms, diffs)


def _combine(F, mats: List[Matrix], coeffs) -> Matrix:
    out = Matrix(F, mats[0].nrows, mats[0].ncols)
    for m, c in zip(mats, coeffs):
        if c:
            out = out + m.scale(c)
    return out


def random_chain_map(S: BoundedComplex, T: BoundedComplex, rng: random.Random) -> ChainMap:
    basis = chain_map_space(S, T)
    F = S.field
    maps = {}
    for k in S.terms:
        if T.dim(k):
            maps[k] = Matrix(F, T.dim(k), S.dim(k))
    for f in basis:
        c = _rand_scalar(F, rng)
        if c:
            for k in maps:
                maps[k] = maps[k] + f.at(k).scale(c)
    return ChainMap(S, T, maps)


def random_sequence_system(A: FDAlgebra, rng: random.Random, length: Optional[int] = None) -> DirectedSystem:
    """``G_0 -> ... -> G_m``, constant afterwards, with random transition maps."""
    m = length if length is not None else rng.randint(1, 3)
    Gs = [random_complex(A, rng, -1, 1) for _ in range(m + 1)]
    steps = [random_chain_map(Gs[n], Gs[n + 1], rng) for n in range(m)]
    return DirectedSystem.sequence(Gs, steps)


def _graph_embedding(G: BoundedComplex, rng: random.Random):
    """Injective chain map ``G -> G (+) R``, ``x -> (x, f x)``."""
    A = G.algebra
    F = A.field
    R = random_complex(A, rng, G.lo if G.terms else -1, G.hi if G.terms else 1)
    T = direct_sum_complexes([G, R])
    f = random_chain_map(G, R, rng)
    maps = {}
    for k in G.terms:
        top = Matrix.identity(F, G.dim(k))
        maps[k] = top.vstack(f.at(k)) if R.dim(k) else top
    return T, ChainMap(G, T, maps)


def random_poset_system(A: FDAlgebra, rng: random.Random, shape: Optional[str] = None) -> DirectedSystem:
    """Random system on a chain, a diamond, or a pushout of injections."""
    shape = shape or rng.choice(["chain", "diamond", "pushout"])
    if shape == "chain":
        Gs = [random_complex(A, rng, -1, 1) for _ in range(3)]
        steps = [random_chain_map(Gs[0], Gs[1], rng), random_chain_map(Gs[1], Gs[2], rng)]
        seq = DirectedSystem.sequence(Gs, steps)
        return DirectedSystem(["s0", "s1", "s2"], [("s%d" % a, "s%d" % b) for a, b in seq.less],
                              {"s%d" % i: G for i, G in seq.complexes.items()},
                              {("s%d" % a, "s%d" % b): f for (a, b), f in seq.maps.items()})
    if shape == "pushout":
        Gs = random_complex(A, rng, -1, 1)
        Gt, it = _graph_embedding(Gs, rng)
        Gu, iu = _graph_embedding(Gs, rng)
        return DirectedSystem(["s", "t", "u"], [("s", "t"), ("s", "u")],
                              {"s": Gs, "t": Gt, "u": Gu}, {("s", "t"): it, ("s", "u"): iu})
    # diamond s < t, u < w with w the maximum
    Gs = random_complex(A, rng, -1, 1)
    Gt = random_complex(A, rng, -1, 1)
    Gu = random_complex(A, rng, -1, 1)
    Gw = random_complex(A, rng, -1, 1)
    st = random_chain_map(Gs, Gt, rng)
    su = random_chain_map(Gs, Gu, rng)
    tw = random_chain_map(Gt, Gw, rng)
    uw = _solve_commuting(Gu, Gw, su, tw, st, rng)
    from .complexes import compose
    sw = compose(tw, st)
    less = [("s", "t"), ("s", "u"), ("t", "w"), ("u", "w"), ("s", "w")]
    maps = {("s", "t"): st, ("s", "u"): su, ("t", "w"): tw, ("u", "w"): uw, ("s", "w"): sw}
    return DirectedSystem(["s", "t", "u", "w"], less, {"s": Gs, "t": Gt, "u": Gu, "w": Gw}, maps)


def _solve_commuting(Gu, Gw, su, tw, st, rng):
    """A chain map ``x: G_u -> G_w`` with ``x su = tw st``; zero target if none exists."""
    from .complexes import compose
    from .linalg import solve
    F = Gu.field
    target = compose(tw, st)
    basis = chain_map_space(Gu, Gw)
    Gs = su.source
    degs = [k for k in Gs.terms if Gw.dim(k)]
    cols = []
    for b in basis:
        v = []
        for k in degs:
            p = b.at(k) @ su.at(k)
            for r in p.rows:
                v.extend(r)
        cols.append(v)
    rhs = []
    for k in degs:
        for r in target.at(k).rows:
            rhs.extend(r)
    if not rhs:
        return random_chain_map(Gu, Gw, rng)
    if cols:
        sol = solve(Matrix.from_columns(F, cols, len(rhs)), rhs)
    else:
        sol = [] if not any(rhs) else None
    if sol is None:
        # no solution: make the square commute by killing tw
        for k in list(tw.maps):
            tw.maps.pop(k)
        return ChainMap(Gu, Gw, {})
    maps = {k: Matrix(F, Gw.dim(k), Gu.dim(k)) for k in Gu.terms if Gw.dim(k)}
    for c, b in zip(sol, basis):
        if c:
            for k in maps:
                maps[k] = maps[k] + b.at(k).scale(c)
    return ChainMap(Gu, Gw, maps)


def random_aisle_certificate(E: BoundedComplex, rng: random.Random, n_steps: int = 4,
                             max_shift: int = 2) -> AisleCertificate:
    """Random build trace from ``E[k]``, ``k >= 0``, sums and extensions with random gluing."""
    blocks = E.block_labels()
    steps: list = []
    objs: List[BoundedComplex] = []
    cert = AisleCertificate(steps)
    for _ in range(n_steps):
        choice = rng.random() if objs else 0.0
        if choice < 0.4:
            block = rng.choice(blocks + [None]) if len(blocks) > 1 else None
            steps.append(TakeGenerator(rng.randint(0, max_shift), block))
        elif choice < 0.6:
            i, j = rng.randrange(len(objs)), rng.randrange(len(objs))
            steps.append(FiniteSum((i, j)))
        else:
            i, j = rng.randrange(len(objs)), rng.randrange(len(objs))
            Z1 = shift(objs[j], -1)
            H = HomComplex(Z1, objs[i])
            cyc = H.linear.cycles(0) if H.dim(0) else None
            if cyc is None or cyc.ncols == 0:
                steps.append(FiniteSum((i, j)))
            else:
                F = E.field
                v = [F.zero] * H.dim(0)
                for col in cyc.columns():
                    c = _rand_scalar(F, rng)
                    v = [x + c * y for x, y in zip(v, col)]
                steps.append(Extension(i, j, H.to_maps(0, v)))
        objs = cert.replay(E)
    return cert

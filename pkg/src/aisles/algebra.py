"""Finite-dimensional algebras given by a basis and structure constants.

Path convention: a path is a tuple of arrows in traversal order and the
product ``p * q`` means "first q, then p" (composition of functions), so it
is nonzero only when ``q`` ends where ``p`` starts.  With this choice the left
projective ``A e_i`` is spanned by paths starting at vertex ``i`` and a left
module is a covariant representation ``M_i = e_i M``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .linalg import QQ, Field, Matrix, kernel_basis, rank, rref, solve


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class Quiver:
    vertices: Tuple[str, ...]
    arrows: Tuple[Tuple[str, str, str], ...]  # (label, source, target)

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise AlgebraError("duplicate vertex labels")
        labels = [a[0] for a in self.arrows]
        if len(set(labels)) != len(labels):
            raise AlgebraError("duplicate arrow labels")
        if set(labels) & set(self.vertices):
            raise AlgebraError("arrow and vertex labels must differ")
        for lab, s, t in self.arrows:
            if s not in self.vertices or t not in self.vertices:
                raise AlgebraError("arrow %s has an undeclared endpoint" % lab)

    def source(self, arrow: str) -> str:
        return self._arrow_map[arrow][0]

    def target(self, arrow: str) -> str:
        return self._arrow_map[arrow][1]

    @cached_property
    def _arrow_map(self):
        return {lab: (s, t) for lab, s, t in self.arrows}

    def paths(self, length: int):
        """All paths of the given length as ``(source, target, arrows)``."""
        if length == 0:
            return [(v, v, ()) for v in self.vertices]
        out = []
        for s, t, p in self.paths(length - 1):
            for lab, a_s, a_t in self.arrows:
                if a_s == t:
                    out.append((s, a_t, p + (lab,)))
        return out


@dataclass(frozen=True)
class Relation:
    """A linear combination of parallel paths, each path in traversal order."""

    terms: Tuple[Tuple[object, Tuple[str, ...]], ...]

    def check(self, q: Quiver):
        if not any(c != 0 for c, _ in self.terms):
            raise AlgebraError("relation has no nonzero coefficient")
        ends = set()
        lengths = set()
        for _, p in self.terms:
            if not p:
                raise AlgebraError("relations must not contain trivial paths")
            for a, b in zip(p, p[1:]):
                if q.target(a) != q.source(b):
                    raise AlgebraError("path %s is not composable" % (p,))
            ends.add((q.source(p[0]), q.target(p[-1])))
            lengths.add(len(p))
        if len(ends) != 1:
            raise AlgebraError("relation paths are not parallel")
        if len(lengths) != 1:
            raise AlgebraError("only homogeneous relations are supported")
        return ends.pop(), lengths.pop()


class FDAlgebra:
    """Associative unital algebra with a fixed basis and structure constants.

    ``table[i][j]`` is a sparse dict ``{k: c}`` giving ``b_i * b_j``.
    """

    def __init__(self, field: Field, labels: Sequence[str], table, unit: Sequence,
                 idempotents: Sequence[Sequence], radical_hint: Optional[Matrix] = None,
                 generators: Optional[Sequence[int]] = None, name: str = "A",
                 check: bool = True):
        self.field = field
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        self.table = [[{k: field(c) for k, c in table[i][j].items() if c != 0}
                       for j in range(self.dim)] for i in range(self.dim)]
        self.unit = [field(x) for x in unit]
        self.idempotents = [[field(x) for x in e] for e in idempotents]
        self.radical_hint = radical_hint
        self.generators = list(range(self.dim)) if generators is None else list(generators)
        self.name = name
        if check:
            self.validate()

    def __repr__(self):
        return "FDAlgebra(%s, dim=%d)" % (self.name, self.dim)

    # arithmetic -------------------------------------------------------------
    def basis_vector(self, i: int) -> list:
        v = [self.field.zero] * self.dim
        v[i] = self.field.one
        return v

    def mul(self, x: Sequence, y: Sequence) -> list:
        out = [self.field.zero] * self.dim
        for i, a in enumerate(x):
            if not a:
                continue
            row = self.table[i]
            for j, b in enumerate(y):
                if not b:
                    continue
                ab = a * b
                for k, c in row[j].items():
                    out[k] = out[k] + ab * c
        return out

    @cached_property
    def left_mult(self) -> List[Matrix]:
        """``left_mult[i]`` is the matrix of ``y -> b_i * y``."""
        mats = []
        for i in range(self.dim):
            m = Matrix(self.field, self.dim, self.dim)
            for j in range(self.dim):
                for k, c in self.table[i][j].items():
                    m.rows[k][j] = c
            mats.append(m)
        return mats

    @cached_property
    def right_mult(self) -> List[Matrix]:
        """``right_mult[i]`` is the matrix of ``y -> y * b_i``."""
        mats = []
        for i in range(self.dim):
            m = Matrix(self.field, self.dim, self.dim)
            for j in range(self.dim):
                for k, c in self.table[j][i].items():
                    m.rows[k][j] = c
            mats.append(m)
        return mats

    def left_matrix(self, x: Sequence) -> Matrix:
        return _combine(self.field, self.dim, self.left_mult, x)

    def right_matrix(self, x: Sequence) -> Matrix:
        return _combine(self.field, self.dim, self.right_mult, x)

    @property
    def n_idempotents(self) -> int:
        return len(self.idempotents)

    # validation -------------------------------------------------------------
    def validate(self):
        F, n = self.field, self.dim
        z = F.zero
        T = self.table
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    lhs = {}
                    for m, c in T[i][j].items():
                        for r, d in T[m][k].items():
                            lhs[r] = lhs.get(r, z) + c * d
                    rhs = {}
                    for m, c in T[j][k].items():
                        for r, d in T[i][m].items():
                            rhs[r] = rhs.get(r, z) + c * d
                    keys = set(lhs) | set(rhs)
                    if any(lhs.get(r, z) != rhs.get(r, z) for r in keys):
                        raise AlgebraError("multiplication is not associative on basis "
                                           "triple (%s, %s, %s)" % (self.labels[i], self.labels[j], self.labels[k]))
        for i in range(n):
            b = self.basis_vector(i)
            if self.mul(self.unit, b) != b or self.mul(b, self.unit) != b:
                raise AlgebraError("unit is not a two-sided identity")
        total = [z] * n
        for a, e in enumerate(self.idempotents):
            for b, f in enumerate(self.idempotents):
                prod = self.mul(e, f)
                want = e if a == b else [z] * n
                if prod != want:
                    raise AlgebraError("idempotents %d, %d are not orthogonal" % (a, b))
            total = [x + y for x, y in zip(total, e)]
        if self.idempotents and total != self.unit:
            raise AlgebraError("idempotents do not sum to the unit")


def _combine(F: Field, n: int, mats: Sequence[Matrix], x: Sequence) -> Matrix:
    out = Matrix(F, n, n)
    for i, a in enumerate(x):
        if a:
            for r in range(n):
                src = mats[i].rows[r]
                dst = out.rows[r]
                for c in range(n):
                    if src[c]:
                        dst[c] = dst[c] + a * src[c]
    return out


def field_algebra(field: Field = QQ) -> FDAlgebra:
    return FDAlgebra(field, ["1"], [[{0: 1}]], [1], [[1]],
                     radical_hint=Matrix(field, 1, 0), name="K")


def matrix_algebra(n: int, field: Field = QQ) -> FDAlgebra:
    """Full matrix algebra with matrix units E_ij as basis."""
    labels = ["E%d%d" % (i, j) for i in range(n) for j in range(n)]
    idx = {(i, j): i * n + j for i in range(n) for j in range(n)}
    table = [[{} for _ in labels] for _ in labels]
    for (i, j), a in idx.items():
        for (k, l), b in idx.items():
            if j == k:
                table[a][b] = {idx[(i, l)]: 1}
    unit = [1 if i == j else 0 for i in range(n) for j in range(n)]
    idem = [[1 if (i == j == t) else 0 for i in range(n) for j in range(n)] for t in range(n)]
    return FDAlgebra(field, labels, table, unit, idem,
                     radical_hint=Matrix(field, n * n, 0), name="M%d" % n)


def build_bound_quiver_algebra(q: Quiver, rels: Sequence[Relation], length_bound: int,
                               field: Field = QQ, name: str = "A") -> FDAlgebra:
    """Path algebra of ``q`` modulo the ideal generated by ``rels``.

    Each slice (source, target, length) is reduced by Gaussian elimination on
    path-coefficient vectors; the basis consists of the non-pivot paths.
    """
    if length_bound < 1:
        raise AlgebraError("length_bound must be positive")
    rel_info = [(r, *r.check(q)) for r in rels]
    paths_by_len = [q.paths(l) for l in range(length_bound + 1)]

    # normal form data: for each path, its expression in basis paths
    normal: Dict[Tuple, Dict[Tuple, object]] = {}
    basis: List[Tuple] = []
    for l in range(length_bound + 1):
        slices: Dict[Tuple[str, str], List[Tuple]] = {}
        for s, t, p in paths_by_len[l]:
            key = p if p else (s,)
            slices.setdefault((s, t), []).append(key)
        for (s, t), plist in slices.items():
            col = {p: i for i, p in enumerate(plist)}
            gens = []
            for r, (rs, rt), rl in rel_info:
                if rl > l:
                    continue
                extra = l - rl
                for lu in range(extra + 1):
                    lv = extra - lu
                    # u before r (traversal), v after r
                    us = [p for (a, b, p) in paths_by_len[lu] if a == s and b == rs] if lu else \
                        ([()] if s == rs else [])
                    vs = [p for (a, b, p) in paths_by_len[lv] if a == rt and b == t] if lv else \
                        ([()] if t == rt else [])
                    for u in us:
                        for v in vs:
                            vec = [field.zero] * len(plist)
                            for c, rp in r.terms:
                                vec[col[u + tuple(rp) + v]] += field(c)
                            gens.append(vec)
            if gens:
                red, pivots, _ = rref(Matrix(field, len(gens), len(plist), gens))
            else:
                red, pivots = None, []
            pivset = set(pivots)
            free = [j for j in range(len(plist)) if j not in pivset]
            if l == length_bound and free:
                raise AlgebraError("paths of length %d from %s to %s do not all lie in the ideal"
                                   % (length_bound, s, t))
            for j in free:
                normal[plist[j]] = {plist[j]: field.one}
                basis.append(plist[j])
            for i, pc in enumerate(pivots):
                normal[plist[pc]] = {plist[j]: -red.rows[i][j] for j in free if red.rows[i][j]}

    index = {p: i for i, p in enumerate(basis)}
    vmap = {v: i for i, v in enumerate(q.vertices)}

    def endpoints(p):
        if len(p) == 1 and p[0] in vmap:
            return p[0], p[0], 0
        return q.source(p[0]), q.target(p[-1]), len(p)

    def concat(first, then):
        fs, ft, fl = endpoints(first)
        ts, tt, tl = endpoints(then)
        if ft != ts:
            return None
        if fl == 0:
            return then
        if tl == 0:
            return first
        return first + then

    n = len(basis)
    table = [[{} for _ in range(n)] for _ in range(n)]
    for i, p in enumerate(basis):
        for j, r in enumerate(basis):
            c = concat(r, p)  # p * r = first r, then p
            if c is None or (len(c) >= length_bound and c[0] not in vmap):
                continue
            table[i][j] = {index[b]: coef for b, coef in normal[c].items()}
    unit = [field.zero] * n
    idem = []
    for v in q.vertices:
        e = [field.zero] * n
        e[index[(v,)]] = field.one
        unit[index[(v,)]] = field.one
        idem.append(e)
    labels = []
    for p in basis:
        if len(p) == 1 and p[0] in vmap:
            labels.append("e_" + p[0])
        else:
            labels.append("*".join(reversed(p)))
    radical_hint = None
    if all(rl >= 2 for _, _, rl in rel_info):
        rad_cols = [[field.one if k == i else field.zero for k in range(n)]
                    for i, p in enumerate(basis) if not (len(p) == 1 and p[0] in vmap)]
        radical_hint = Matrix.from_columns(field, rad_cols, n)
    gens = [index[(v,)] for v in q.vertices] + [index[(a,)] for a, _, _ in q.arrows if (a,) in index]
    alg = FDAlgebra(field, labels, table, unit, idem, radical_hint=radical_hint,
                    generators=gens, name=name)
    alg.quiver = q
    alg.paths = basis
    alg.vertex_of_idempotent = list(q.vertices)
    return alg


def kronecker_algebra(field: Field = QQ) -> FDAlgebra:
    q = Quiver(("v0", "v1"), (("a", "v0", "v1"), ("b", "v0", "v1")))
    return build_bound_quiver_algebra(q, [], 2, field, name="Kronecker")


def dual_numbers(field: Field = QQ) -> FDAlgebra:
    """K[x]/(x^2) as a one-loop quiver with relation x*x."""
    q = Quiver(("v",), (("x", "v", "v"),))
    return build_bound_quiver_algebra(q, [Relation(((1, ("x", "x")),))], 2, field, name="kx2")


def beilinson_algebra(d: int, field: Field = QQ) -> FDAlgebra:
    """Quiver 0 -> 1 -> ... -> d with d+1 arrows per step and commutativity relations."""
    if d < 0:
        raise AlgebraError("d must be nonnegative")
    verts = tuple(str(i) for i in range(d + 1))
    arrows = tuple(("x%d_%d" % (j, i), str(i), str(i + 1)) for i in range(d) for j in range(d + 1))
    rels = []
    for i in range(d - 1):
        for j, l in itertools.combinations(range(d + 1), 2):
            p1 = ("x%d_%d" % (j, i), "x%d_%d" % (l, i + 1))
            p2 = ("x%d_%d" % (l, i), "x%d_%d" % (j, i + 1))
            rels.append(Relation(((1, p1), (-1, p2))))
    alg = build_bound_quiver_algebra(Quiver(verts, arrows), rels, d + 1, field,
                                     name="Beilinson(%d)" % d)
    return alg


def beilinson_dimension_formula(d: int) -> int:
    return sum((d + 1 - k) * comb(k + d, d) for k in range(d + 1))


def graded_hom_dim(d: int, a: int, b: int) -> int:
    """Dimension of Hom(O(a), O(b)) on projective d-space, by counting monomials."""
    deg = b - a
    if deg < 0:
        return 0
    return sum(1 for _ in itertools.combinations_with_replacement(range(d + 1), deg))


def path_count(alg: FDAlgebra, i: int, j: int) -> int:
    """Number of basis elements of ``e_j A e_i`` (paths from vertex i to vertex j)."""
    ei, ej = alg.idempotents[i], alg.idempotents[j]
    m = alg.left_matrix(ej) @ alg.right_matrix(ei)
    return rank(m)


def radical(alg: FDAlgebra) -> Matrix:
    """Jacobson radical as the kernel of the trace form ``(x, y) -> Tr(L_x L_y)``.

    Only valid in characteristic zero.  The result is checked to be a
    nilpotent two-sided ideal.
    """
    if alg.field.characteristic != 0:
        raise AlgebraError("the trace-form radical needs characteristic 0")
    n = alg.dim
    L = alg.left_mult
    gram = Matrix(alg.field, n, n)
    for i in range(n):
        for j in range(i, n):
            t = sum((L[i] @ L[j]).rows[k][k] for k in range(n))
            gram.rows[i][j] = gram.rows[j][i] = alg.field(t)
    rad = kernel_basis(gram)
    _check_radical(alg, rad)
    return rad


def radical_or_hint(alg: FDAlgebra) -> Matrix:
    if alg.radical_hint is not None:
        return alg.radical_hint
    cached = alg.__dict__.get("_radical")
    if cached is None:
        cached = alg.__dict__["_radical"] = radical(alg)
    return cached


def _check_radical(alg: FDAlgebra, rad: Matrix):
    n = alg.dim
    vecs = rad.columns()
    r = rank(rad) if vecs else 0
    for v in vecs:
        for i in range(n):
            b = alg.basis_vector(i)
            for w in (alg.mul(b, v), alg.mul(v, b)):
                if vecs and rank(rad.hstack(Matrix.from_columns(alg.field, [w], n))) != r:
                    raise AlgebraError("radical is not a two-sided ideal")
    power = vecs
    for _ in range(n + 1):
        if not power:
            return
        prods = [alg.mul(x, y) for x in power for y in vecs]
        prods = [p for p in prods if any(p)]
        if not prods:
            return
        m = Matrix.from_columns(alg.field, prods, n)
        from .linalg import column_space_basis
        power = column_space_basis(m).columns()
    raise AlgebraError("radical failed the nilpotency check")

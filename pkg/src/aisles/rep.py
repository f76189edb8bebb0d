"""Finite-dimensional left modules, module maps, projectives and resolutions."""

from __future__ import annotations

from functools import cached_property
from typing import List, Optional, Sequence

from .algebra import AlgebraError, FDAlgebra, radical_or_hint
from .linalg import (Matrix, column_space_basis, kernel_basis, left_inverse, rank,
                     solve)


class ModuleError(ValueError):
    pass


class FDModule:
    """Left module given by one action matrix per algebra basis element.

    ``parts`` records a direct-sum decomposition (consecutive coordinate
    blocks) when the module was built as a sum; ``proj_index`` is set on the
    indecomposable projectives ``A e_i``.
    """

    def __init__(self, algebra: FDAlgebra, dim: int, action: Sequence[Matrix],
                 parts: Optional[Sequence["FDModule"]] = None, proj_index: Optional[int] = None,
                 generator: Optional[list] = None, name: str = "", check: bool = True):
        self.algebra = algebra
        self.dim = dim
        self.action = list(action)
        self.parts = tuple(parts) if parts is not None else None
        self.proj_index = proj_index
        self.generator = generator
        self.name = name
        if len(self.action) != algebra.dim:
            raise ModuleError("need one action matrix per basis element")
        if check:
            self.validate()

    def __repr__(self):
        return "FDModule(%s, dim=%d)" % (self.name or "?", self.dim)

    @property
    def field(self):
        return self.algebra.field

    def summands(self) -> tuple:
        return self.parts if self.parts is not None else (self,)

    @cached_property
    def offsets(self) -> List[int]:
        out, o = [], 0
        for p in self.summands():
            out.append(o)
            o += p.dim
        return out

    def act(self, x: Sequence) -> Matrix:
        F = self.field
        out = Matrix(F, self.dim, self.dim)
        for i, a in enumerate(x):
            if a:
                src = self.action[i].rows
                for r in range(self.dim):
                    sr, dr = src[r], out.rows[r]
                    for c in range(self.dim):
                        if sr[c]:
                            dr[c] = dr[c] + a * sr[c]
        return out

    def validate(self):
        A = self.algebra
        for m in self.action:
            if m.shape != (self.dim, self.dim):
                raise ModuleError("action matrix has wrong shape")
        if self.act(A.unit) != Matrix.identity(self.field, self.dim):
            raise ModuleError("unit does not act as the identity")
        gens = A.generators
        for i in gens:
            for j in range(A.dim):
                lhs = self.action[i] @ self.action[j]
                rhs = self.act(A.mul(A.basis_vector(i), A.basis_vector(j)))
                if lhs != rhs:
                    raise ModuleError("action does not respect b_%s * b_%s" % (A.labels[i], A.labels[j]))

    @cached_property
    def _idem(self):
        out = []
        for e in self.algebra.idempotents:
            pe = self.act(e)
            if self.dim == 0 or pe.is_zero():
                out.append((Matrix(self.field, self.dim, 0), Matrix(self.field, 0, self.dim)))
                continue
            b = column_space_basis(pe)
            out.append((b, left_inverse(b)))
        return out

    def idem_basis(self, i: int) -> Matrix:
        """Columns form a basis of ``e_i M``."""
        return self._idem[i][0]

    def idem_coords(self, i: int) -> Matrix:
        """Coordinates of vectors of ``e_i M`` in the basis ``idem_basis(i)``."""
        return self._idem[i][1]

    @property
    def is_projective_sum(self) -> bool:
        return all(p.proj_index is not None for p in self.summands())


class ModuleMap:
    def __init__(self, source: FDModule, target: FDModule, matrix: Matrix, check: bool = True):
        if source.algebra is not target.algebra:
            raise ModuleError("modules over different algebras")
        if matrix.shape != (target.dim, source.dim):
            raise ModuleError("map matrix has shape %s, expected %s"
                              % (matrix.shape, (target.dim, source.dim)))
        self.source, self.target, self.matrix = source, target, matrix
        if check and not is_module_map(source, target, matrix):
            raise ModuleError("matrix does not intertwine the actions")

    def __repr__(self):
        return "ModuleMap(%r -> %r)" % (self.source, self.target)


def is_module_map(source: FDModule, target: FDModule, m: Matrix) -> bool:
    for g in source.algebra.generators:
        if m @ source.action[g] != target.action[g] @ m:
            return False
    return True


def zero_module(A: FDAlgebra) -> FDModule:
    return FDModule(A, 0, [Matrix(A.field, 0, 0)] * A.dim, parts=(), name="0", check=False)


def regular_module(A: FDAlgebra) -> FDModule:
    return FDModule(A, A.dim, A.left_mult, name="A")


def projective(A: FDAlgebra, i: int) -> FDModule:
    """The left module ``A e_i``, basis chosen among ``b_j e_i``."""
    if not 0 <= i < A.n_idempotents:
        raise ModuleError("no idempotent with index %d" % i)
    e = A.idempotents[i]
    emb = column_space_basis(A.right_matrix(e))
    L = left_inverse(emb)
    action = [L @ A.left_mult[k] @ emb for k in range(A.dim)]
    gen = solve(emb, e)
    P = FDModule(A, emb.ncols, action, proj_index=i, generator=gen, name="P%d" % i, check=False)
    P.embed = emb
    return P


def direct_sum(modules: Sequence[FDModule], A: Optional[FDAlgebra] = None) -> FDModule:
    """Direct sum; parts are flattened so nested sums stay one level deep."""
    if not modules:
        if A is None:
            raise ModuleError("empty sum needs the algebra")
        return zero_module(A)
    A = modules[0].algebra
    flat = []
    for m in modules:
        if m.algebra is not A:
            raise ModuleError("modules over different algebras")
        if m.parts is not None:
            flat.extend(m.parts)
        else:
            flat.append(m)
    flat = [m for m in flat if m.dim > 0]
    if len(flat) == 1 and flat[0].parts is None and modules[0].parts is None and len(modules) == 1:
        return flat[0]
    dim = sum(m.dim for m in flat)
    action = [Matrix.block_diagonal(A.field, [m.action[k] for m in flat]) if flat
              else Matrix(A.field, 0, 0) for k in range(A.dim)]
    return FDModule(A, dim, action, parts=flat, name="(+)".join(m.name or "?" for m in flat),
                    check=False)


def simple_module(A: FDAlgebra, i: int) -> FDModule:
    """Top of ``A e_i``; needs the radical."""
    P = projective(A, i)
    J = radical_or_hint(A)
    sub = _radical_submodule_basis(P, J)
    return quotient_module(P, sub)[0]


def _radical_submodule_basis(M: FDModule, J: Matrix) -> Matrix:
    """Basis (columns) of ``rad(A) M``."""
    F = M.field
    cols = []
    for j in J.columns():
        a = M.act(j)
        cols.extend(a.columns())
    if not cols or M.dim == 0:
        return Matrix(F, M.dim, 0)
    m = Matrix.from_columns(F, cols, M.dim)
    if m.is_zero():
        return Matrix(F, M.dim, 0)
    return column_space_basis(m)


def submodule(M: FDModule, basis: Matrix):
    """Submodule spanned by the (invariant) column space of ``basis``."""
    F = M.field
    if basis.ncols == 0:
        return zero_module(M.algebra), Matrix(F, M.dim, 0)
    b = column_space_basis(basis)
    L = left_inverse(b)
    action = []
    for k in range(M.algebra.dim):
        img = M.action[k] @ b
        if b @ (L @ img) != img:
            raise ModuleError("subspace is not a submodule")
        action.append(L @ img)
    return FDModule(M.algebra, b.ncols, action, check=False, name="sub"), b


def quotient_module(M: FDModule, sub: Matrix):
    """``M / span(sub)``; returns the module, the projection and a linear section."""
    F = M.field
    n = M.dim
    if sub.ncols and not sub.is_zero():
        sub = column_space_basis(sub)
    else:
        sub = Matrix(F, n, 0)
    ext = sub
    comp = []
    r = sub.ncols
    for j in range(n):
        e = Matrix(F, n, 1)
        e.rows[j][0] = F.one
        cand = ext.hstack(e) if ext.ncols else e
        if rank(cand) > r:
            ext, r = cand, r + 1
            comp.append(j)
    full = ext  # [sub-basis | complement]
    inv = left_inverse(full)
    k = len(comp)
    proj = inv.submatrix(range(full.ncols - k, full.ncols), range(n))
    section = full.submatrix(range(n), range(full.ncols - k, full.ncols))
    action = [proj @ M.action[i] @ section for i in range(M.algebra.dim)]
    return FDModule(M.algebra, k, action, check=False, name="quot"), proj, section


def hom_module(M: FDModule, N: FDModule) -> List[ModuleMap]:
    """Basis of Hom_A(M, N) by solving the intertwiner equations."""
    if M.algebra is not N.algebra:
        raise ModuleError("modules over different algebras")
    F = M.field
    m, n = M.dim, N.dim
    if m == 0 or n == 0:
        return []
    rows = []
    for g in M.algebra.generators:
        RM, RN = M.action[g], N.action[g]
        for r in range(n):
            for c in range(m):
                row = [F.zero] * (n * m)
                for k in range(m):
                    if RM.rows[k][c]:
                        row[r * m + k] = row[r * m + k] + RM.rows[k][c]
                for k in range(n):
                    if RN.rows[r][k]:
                        row[k * m + c] = row[k * m + c] - RN.rows[r][k]
                rows.append(row)
    ker = kernel_basis(Matrix(F, len(rows), n * m, rows))
    out = []
    for v in ker.columns():
        out.append(ModuleMap(M, N, Matrix(F, n, m, [v[r * m:(r + 1) * m] for r in range(n)]), check=False))
    return out


def map_from_projective(P: FDModule, M: FDModule, m: Sequence) -> Matrix:
    """Matrix of the map ``A e_i -> M`` sending ``e_i`` to ``m`` (which must lie in ``e_i M``)."""
    F = M.field
    cols = []
    for j in range(P.dim):
        a = P.embed.column(j)
        cols.append(M.act(a).apply(m))
    return Matrix.from_columns(F, cols, M.dim) if cols else Matrix(F, M.dim, 0)


def map_from_projective_sum(P: FDModule, M: FDModule, images: Sequence[Sequence]) -> Matrix:
    F = M.field
    blocks = [map_from_projective(part, M, img) for part, img in zip(P.summands(), images)]
    if not blocks:
        return Matrix(F, M.dim, 0)
    out = blocks[0]
    for b in blocks[1:]:
        out = out.hstack(b)
    return out


def top_generators(M: FDModule, J: Optional[Matrix] = None):
    """Elements ``(i, m)`` with ``m`` in ``e_i M`` whose classes form a basis of ``M / rad M``."""
    if J is None:
        J = radical_or_hint(M.algebra)
    F = M.field
    radM = _radical_submodule_basis(M, J)
    chosen = radM
    r = radM.ncols
    gens = []
    for i in range(M.algebra.n_idempotents):
        B = M.idem_basis(i)
        for v in B.columns():
            cand = chosen.hstack(Matrix.from_columns(F, [v], M.dim)) if chosen.ncols else \
                Matrix.from_columns(F, [v], M.dim)
            if rank(cand) > r:
                chosen, r = cand, r + 1
                gens.append((i, v))
    if r != M.dim:
        raise ModuleError("idempotents do not cover the module")
    return gens


def projective_cover(M: FDModule, J: Optional[Matrix] = None):
    """Minimal projective cover ``P0 -> M`` as ``(P0, matrix)``."""
    A = M.algebra
    if M.dim == 0:
        return zero_module(A), Matrix(A.field, 0, 0)
    if J is None and A.radical_hint is None and A.field.characteristic != 0:
        raise AlgebraError("positive characteristic needs a supplied radical")
    gens = top_generators(M, J)
    parts = [projective(A, i) for i, _ in gens]
    P0 = direct_sum(parts, A)
    pi = map_from_projective_sum(P0, M, [v for _, v in gens])
    if rank(pi) != M.dim:
        raise ModuleError("projective cover is not surjective")
    return P0, pi


def minimal_presentation(M: FDModule, J: Optional[Matrix] = None):
    """``(P1, P0, d, pi)`` with ``P1 --d--> P0 --pi--> M -> 0`` exact and minimal."""
    A = M.algebra
    P0, pi = projective_cover(M, J)
    if P0.dim == 0:
        return zero_module(A), P0, Matrix(A.field, 0, 0), pi
    K, inc = submodule(P0, kernel_basis(pi))
    P1, pi1 = projective_cover(K, J)
    d = inc @ pi1 if K.dim else Matrix(A.field, P0.dim, P1.dim)
    return P1, P0, d, pi


def projective_resolution(M: FDModule, max_len: int, J: Optional[Matrix] = None):
    """Minimal projective resolution as a complex in degrees ``-len .. 0``.

    Returns ``(complex, augmentation matrix, terminated)``; when not
    terminated the complex is the truncation at ``max_len`` steps.
    """
    from .complexes import BoundedComplex

    A = M.algebra
    F = A.field
    P0, pi = projective_cover(M, J)
    terms = {0: P0}
    diffs = {}
    cur, cur_map = P0, pi
    terminated = False
    for step in range(1, max_len + 2):
        K, inc = submodule(cur, kernel_basis(cur_map)) if cur.dim else (zero_module(A), None)
        if K.dim == 0:
            terminated = True
            break
        if step > max_len:
            break
        P, pk = projective_cover(K, J)
        terms[-step] = P
        diffs[-step] = inc @ pk
        cur, cur_map = P, inc @ pk
    C = BoundedComplex(A, terms, diffs)
    return C, pi, terminated


def is_isomorphic_to_regular(M: FDModule, J: Optional[Matrix] = None) -> bool:
    """Whether ``M`` is free of rank one: projective cover equals ``A`` and is bijective."""
    A = M.algebra
    if M.dim != A.dim:
        return False
    P0, pi = projective_cover(M, J)
    counts = [0] * A.n_idempotents
    for p in P0.summands():
        counts[p.proj_index] += 1
    return counts == [1] * A.n_idempotents and rank(pi) == M.dim


def representation(A: FDAlgebra, dims: dict, arrow_maps: dict, name: str = "") -> FDModule:
    """Module from a quiver representation: a space per vertex, a matrix per arrow.

    ``arrow_maps[a]`` maps the space at the source of ``a`` to the space at its
    target.  Relations are checked through module validation.
    """
    q = getattr(A, "quiver", None)
    if q is None:
        raise ModuleError("algebra has no quiver presentation")
    F = A.field
    verts = list(q.vertices)
    off, o = {}, 0
    for v in verts:
        off[v] = o
        o += dims.get(v, 0)
    n = o
    mats = {}
    for lab, s, t in q.arrows:
        m = arrow_maps.get(lab)
        if m is None:
            m = Matrix(F, dims.get(t, 0), dims.get(s, 0))
        elif not isinstance(m, Matrix):
            m = Matrix.from_rows(F, m, dims.get(s, 0)) if m else Matrix(F, dims.get(t, 0), dims.get(s, 0))
        if m.shape != (dims.get(t, 0), dims.get(s, 0)):
            raise ModuleError("arrow %s matrix has shape %s" % (lab, m.shape))
        mats[lab] = m
    action = []
    for p in A.paths:
        out = Matrix(F, n, n)
        if len(p) == 1 and p[0] in off:
            v = p[0]
            for i in range(dims.get(v, 0)):
                out.rows[off[v] + i][off[v] + i] = F.one
        else:
            s, t = q.source(p[0]), q.target(p[-1])
            m = Matrix.identity(F, dims.get(s, 0))
            for a in p:
                m = mats[a] @ m
            for i in range(m.nrows):
                for j in range(m.ncols):
                    out.rows[off[t] + i][off[s] + j] = m.rows[i][j]
        action.append(out)
    return FDModule(A, n, action, name=name)

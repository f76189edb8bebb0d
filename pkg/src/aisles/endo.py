"""Endomorphism rings of perfect complexes and the functor ``Hom*(E, -)``.

Products are read so that ``F(E) = Hom*(E, E)`` is ``S`` as a left module:
``s * t`` is the class of ``t o s`` and ``s`` acts on ``phi`` by ``phi o s``.
With ``E = A`` this identifies ``S`` with ``A`` through ``phi -> phi(1)``.
"""

from __future__ import annotations

from typing import Dict, List, Optional

from .algebra import AlgebraError, FDAlgebra, radical_or_hint
from .complexes import (BoundedComplex, ChainMap, ComplexError, HomComplex, block_parts,
                        _part_coords)
from .linalg import Matrix, rank, solve
from .rep import FDModule


class StrictnessError(ComplexError):
    """Degree-zero boundaries in ``Hom*(E, E)``: classes have no multiplicative lift."""


class EndomorphismRing:
    """``S = H^0 Hom*(E, E)`` with a block-adapted basis and strict lifts."""

    def __init__(self, E: BoundedComplex):
        if not E.is_perfect:
            raise ComplexError("endomorphism rings are built for perfect complexes")
        self.E = E
        F = self.field = E.field
        self.blocks = E.block_labels()
        H = self.hom = HomComplex(E, E)
        lin = H.linear
        self.strict = lin.boundaries(0).ncols == 0
        dim0 = H.dim(0)
        bd = lin.boundaries(0)
        _, reps = lin.cohomology(0)
        # block idempotents as degree-zero elements
        self._proj = {}
        for a in self.blocks:
            parts = block_parts(E, a)
            maps = {}
            for k in E.terms:
                idx = _part_coords(E, k, parts[k])
                m = Matrix(F, E.dim(k), E.dim(k))
                for i in idx:
                    m.rows[i][i] = F.one
                maps[k] = m
            self._proj[a] = maps
        vectors: List[list] = []
        labels: List[str] = []
        self.pattern: Dict[tuple, int] = {}
        chosen = bd
        for a in self.blocks:
            for b in self.blocks:
                cands = []
                if a == b:
                    cands.append(("e_%s" % a, H.from_maps(0, self._proj[a])))
                for v in reps.columns():
                    cands.append((None, self._restrict(v, a, b)))
                count = 0
                for lab, v in cands:
                    if not any(v):
                        continue
                    cand = chosen.hstack(Matrix.from_columns(F, [v], dim0)) if chosen.ncols else \
                        Matrix.from_columns(F, [v], dim0)
                    if rank(cand) > chosen.ncols:
                        chosen = cand
                        count += 1
                        vectors.append(v)
                        labels.append(lab or "%s->%s:%d" % (a, b, count))
                self.pattern[(a, b)] = count
        self.vectors = vectors
        self.labels = labels
        self.lifts = [H.chain_map(0, v) for v in vectors]
        n = len(vectors)
        self._coord_system = Matrix.from_columns(F, vectors, dim0).hstack(bd) if n else bd
        table = [[{} for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                comp = {p: self.lifts[j].at(p) @ self.lifts[i].at(p) for p in E.terms}
                c = self.coords(H.from_maps(0, comp))
                table[i][j] = {k: x for k, x in enumerate(c) if x}
        unit = [F.zero] * n
        idems = []
        for a in self.blocks:
            if "e_%s" % a not in labels:
                raise ComplexError("block %r is zero up to homotopy" % a)
            k = labels.index("e_%s" % a)
            unit[k] = F.one
            idems.append([F.one if j == k else F.zero for j in range(n)])
        self.algebra = FDAlgebra(F, labels, table, unit, idems, radical_hint=self._hint(labels),
                                 name="End(E)")
        self._check_local_blocks()

    def _check_local_blocks(self):
        # block idempotents serve as vertex idempotents of S, so they must be primitive
        if all(self.pattern[(a, a)] == 1 for a in self.blocks):
            return
        try:
            rad = radical_or_hint(self.algebra)
        except AlgebraError:
            return
        for a in self.blocks:
            idx = [i for i, lab in enumerate(self.labels)
                   if lab == "e_%s" % a or lab.startswith("%s->%s:" % (a, a))]
            r = rank(rad.submatrix(idx, range(rad.ncols))) if rad.ncols else 0
            if r != len(idx) - 1:
                raise ComplexError("block %r is decomposable; label its indecomposable "
                                   "summands separately" % a)

    def _restrict(self, v, a, b):
        H = self.hom
        maps = H.to_maps(0, v)
        out = {p: self._proj[b][p] @ m @ self._proj[a][p] for p, m in maps.items()}
        return H.from_maps(0, out)

    def coords(self, vec) -> list:
        """Coordinates in ``S`` of the class of a degree-zero cycle."""
        if not self.vectors:
            return []
        x = solve(self._coord_system, vec)
        if x is None:
            raise ComplexError("element is not a degree-zero cycle")
        return x[:len(self.vectors)]

    def _hint(self, labels):
        # in positive characteristic the trace form is unavailable; when the block
        # pattern is directed with one-dimensional diagonal the off-diagonal part is the radical
        if self.field.characteristic == 0:
            return None
        if any(self.pattern[(a, a)] != 1 for a in self.blocks):
            return None
        order = {a: i for i, a in enumerate(self.blocks)}
        edges = {(a, b) for (a, b), c in self.pattern.items() if a != b and c}
        if not _acyclic(self.blocks, edges):
            return None
        cols = []
        n = len(labels)
        for i, lab in enumerate(labels):
            if not lab.startswith("e_"):
                v = [self.field.zero] * n
                v[i] = self.field.one
                cols.append(v)
        return Matrix.from_columns(self.field, cols, n)

    @property
    def dim(self) -> int:
        return len(self.vectors)

    def idempotent_index(self, block: str) -> int:
        return self.blocks.index(block)

    def require_strict(self):
        if not self.strict:
            raise StrictnessError("Hom*(E, E) has degree-zero boundaries; the action of S "
                                  "on Hom complexes is not strictly defined")


def _acyclic(nodes, edges) -> bool:
    state = {}

    def visit(u):
        state[u] = 1
        for a, b in edges:
            if a == u:
                if state.get(b) == 1:
                    return False
                if b not in state and not visit(b):
                    return False
        state[u] = 2
        return True

    return all(visit(u) for u in nodes if u not in state)


def endomorphism_ring(E: BoundedComplex) -> EndomorphismRing:
    return EndomorphismRing(E)


def real_functor_image(ring: EndomorphismRing, M: BoundedComplex) -> BoundedComplex:
    """``F(M) = Hom*(E, M)`` as a complex of left ``S``-modules, ``s . phi = phi o s``."""
    ring.require_strict()
    S = ring.algebra
    F = ring.field
    H = HomComplex(ring.E, M)
    terms = {}
    for n in H.components:
        dn = H.dim(n)
        action = []
        for lift in ring.lifts:
            cols = []
            for j in range(dn):
                e = [F.zero] * dn
                e[j] = F.one
                maps = H.to_maps(n, e)
                comp = {p: m @ lift.at(p) for p, m in maps.items()}
                cols.append(H.from_maps(n, comp))
            action.append(Matrix.from_columns(F, cols, dn))
        terms[n] = FDModule(S, dn, action, name="F^%d" % n)
    diffs = {n: H.linear.d(n) for n in H.components if n + 1 in H.components}
    out = BoundedComplex(S, terms, diffs)
    out.hom = H
    return out


def real_functor_map(ring: EndomorphismRing, f: ChainMap, FM: BoundedComplex,
                     FN: BoundedComplex) -> ChainMap:
    """``F(f)``: post-composition with ``f``."""
    F = ring.field
    HM, HN = FM.hom, FN.hom
    maps = {}
    for n in HM.components:
        if not HN.dim(n):
            continue
        cols = []
        for j in range(HM.dim(n)):
            e = [F.zero] * HM.dim(n)
            e[j] = F.one
            comp = {p: f.at(p + n) @ m for p, m in HM.to_maps(n, e).items()}
            cols.append(HN.from_maps(n, comp))
        maps[n] = Matrix.from_columns(F, cols, HN.dim(n))
    return ChainMap(FM, FN, maps)


def regular_identification(ring: EndomorphismRing) -> Matrix:
    """For ``E = A`` (blocks the indecomposable projectives in degree 0), the
    matrix of ``S -> A``, ``phi -> phi(1)``."""
    E = ring.E
    if set(E.terms) != {0}:
        raise ComplexError("identification needs a complex concentrated in degree zero")
    A = E.algebra
    F = ring.field
    P = E.terms[0]
    cols = []
    for lift in ring.lifts:
        m = lift.at(0)
        img = [F.zero] * A.dim
        for t, part in enumerate(P.summands()):
            col = [F.zero] * P.dim
            o = P.offsets[t]
            for j, g in enumerate(part.generator):
                col[o + j] = g
            y = m.apply(col)
            # coordinates of y in the parts of P, pushed into A
            for u, q in enumerate(P.summands()):
                qo = P.offsets[u]
                img = [x + z for x, z in zip(img, q.embed.apply(y[qo:qo + q.dim]))]
        cols.append(img)
    return Matrix.from_columns(F, cols, A.dim)


def is_algebra_isomorphism(S: FDAlgebra, A: FDAlgebra, phi: Matrix) -> bool:
    """Whether the linear map ``phi: S -> A`` is bijective, unital and multiplicative."""
    if phi.shape != (A.dim, S.dim) or rank(phi) != S.dim or S.dim != A.dim:
        return False
    if phi.apply(S.unit) != list(A.unit):
        return False
    for i in range(S.dim):
        for j in range(S.dim):
            lhs = phi.apply(S.mul(S.basis_vector(i), S.basis_vector(j)))
            rhs = A.mul(phi.column(i), phi.column(j))
            if lhs != rhs:
                return False
    return True

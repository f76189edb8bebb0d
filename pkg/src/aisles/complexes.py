"""Bounded complexes of modules, chain maps, cones, Hom complexes, cohomology
and the two homotopy-colimit constructions.

Conventions, used everywhere in the package:

* ``C[n]^k = C^{k+n}`` and ``d_{C[n]} = (-1)^n d_C``; ``f[n]^k = f^{k+n}``.
* ``cone(f: X -> Y)^k = X^{k+1} (+) Y^k`` with differential
  ``[[-d_X, 0], [f, d_Y]]``; the triangle is ``X -> Y -> cone(f) -> X[1]``.
* A degree ``n`` element of ``Hom(E, M)`` maps ``E^p -> M^{p+n}`` and
  ``D(phi) = d_M phi - (-1)^n phi d_E``.  Degree ``-k`` cycles are exactly
  chain maps ``E[k] -> M``.
"""

from __future__ import annotations

import itertools
from functools import cached_property
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .algebra import FDAlgebra
from .linalg import Matrix, column_space_basis, kernel_basis, rank, solve, solve_matrix
from .rep import (FDModule, direct_sum, is_module_map, map_from_projective,
                  projective, projective_resolution, quotient_module, zero_module)


class ComplexError(ValueError):
    pass


class ResolutionError(ComplexError):
    """A projective resolution did not terminate within the allowed length."""


def _zero(F, r, c):
    return Matrix(F, r, c)


class BoundedComplex:
    """Bounded complex of modules; ``diffs[k]`` maps degree ``k`` to ``k + 1``."""

    def __init__(self, algebra: FDAlgebra, terms: Dict[int, FDModule],
                 diffs: Optional[Dict[int, Matrix]] = None, labels: Optional[Dict[int, tuple]] = None,
                 check: bool = True):
        self.algebra = algebra
        self.terms = {k: m for k, m in sorted(terms.items()) if m.dim > 0}
        diffs = diffs or {}
        self.diffs = {}
        for k, d in diffs.items():
            if k in self.terms and k + 1 in self.terms:
                if d.shape != (self.terms[k + 1].dim, self.terms[k].dim):
                    raise ComplexError("differential in degree %d has shape %s" % (k, d.shape))
                if not d.is_zero():
                    self.diffs[k] = d
            elif d.nrows and d.ncols and not d.is_zero():
                raise ComplexError("nonzero differential out of a zero term in degree %d" % k)
        self.labels = {k: labels[k] for k in self.terms} if labels else None
        if check:
            self.validate()

    @property
    def field(self):
        return self.algebra.field

    def __repr__(self):
        return "BoundedComplex(%s)" % ", ".join("%d:%d" % (k, m.dim) for k, m in self.terms.items())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def lo(self) -> int:
        return min(self.terms) if self.terms else 0

    @property
    def hi(self) -> int:
        return max(self.terms) if self.terms else -1

    def term(self, k: int) -> FDModule:
        return self.terms.get(k) or zero_module(self.algebra)

    def dim(self, k: int) -> int:
        m = self.terms.get(k)
        return m.dim if m else 0

    def d(self, k: int) -> Matrix:
        if k in self.diffs:
            return self.diffs[k]
        return _zero(self.field, self.dim(k + 1), self.dim(k))

    def dims(self) -> Dict[int, int]:
        return {k: m.dim for k, m in self.terms.items()}

    def validate(self):
        for k, d in self.diffs.items():
            if not is_module_map(self.terms[k], self.terms[k + 1], d):
                raise ComplexError("differential in degree %d is not a module map" % k)
            if k + 1 in self.diffs and not (self.diffs[k + 1] @ d).is_zero():
                raise ComplexError("d o d != 0 in degree %d" % k)

    @property
    def is_perfect(self) -> bool:
        return all(m.is_projective_sum for m in self.terms.values())

    @cached_property
    def linear(self) -> "LinearComplex":
        return LinearComplex(self.field, self.dims(), dict(self.diffs))

    def cohomology(self, n: int):
        """``(dimension, representatives)`` of ``H^n``."""
        return self.linear.cohomology(n)

    def cohomology_dims(self) -> Dict[int, int]:
        return self.linear.cohomology_dims()

    def is_acyclic(self) -> bool:
        return not self.cohomology_dims()

    def part_labels(self, k: int) -> tuple:
        if self.labels and k in self.labels:
            return self.labels[k]
        return ("E",) * len(self.term(k).summands())

    def block_labels(self) -> List[str]:
        """Declared block names, sorted."""
        seen = set()
        for k in self.terms:
            seen.update(self.part_labels(k))
        return sorted(seen)

    def equals(self, other: "BoundedComplex") -> bool:
        if self.dims() != other.dims():
            return False
        for k in self.terms:
            if self.d(k) != other.d(k):
                return False
            for a, b in zip(self.terms[k].action, other.terms[k].action):
                if a != b:
                    return False
        return True


def zero_complex(A: FDAlgebra) -> BoundedComplex:
    return BoundedComplex(A, {}, {})


def module_complex(M: FDModule, degree: int = 0, label: str = "E") -> BoundedComplex:
    """Module concentrated in one degree."""
    labels = {degree: (label,) * len(M.summands())}
    return BoundedComplex(M.algebra, {degree: M}, {}, labels=labels)


def regular_complex(A: FDAlgebra) -> BoundedComplex:
    """``A`` in degree 0 as the sum of its indecomposable projectives, one block each."""
    parts = [projective(A, i) for i in range(A.n_idempotents)]
    return BoundedComplex(A, {0: direct_sum(parts, A)}, {},
                          labels={0: tuple("P%d" % i for i in range(len(parts)))})


class LinearComplex:
    """Complex of finite-dimensional vector spaces given by dimensions and matrices."""

    def __init__(self, field, dims: Dict[int, int], diffs: Dict[int, Matrix]):
        self.field = field
        self.dims = {k: v for k, v in dims.items() if v}
        self.diffs = diffs

    def dim(self, n: int) -> int:
        return self.dims.get(n, 0)

    def d(self, n: int) -> Matrix:
        if n in self.diffs:
            return self.diffs[n]
        return Matrix(self.field, self.dim(n + 1), self.dim(n))

    def _rank(self, n):
        cache = self.__dict__.setdefault("_ranks", {})
        if n not in cache:
            cache[n] = rank(self.d(n)) if (self.dim(n) and self.dim(n + 1)) else 0
        return cache[n]

    def cohomology_dim(self, n: int) -> int:
        return self.dim(n) - self._rank(n) - self._rank(n - 1)

    def cohomology_dims(self) -> Dict[int, int]:
        out = {}
        for n in self.dims:
            h = self.cohomology_dim(n)
            if h:
                out[n] = h
        return out

    def boundaries(self, n: int) -> Matrix:
        if not self.dim(n) or not self.dim(n - 1):
            return Matrix(self.field, self.dim(n), 0)
        d = self.d(n - 1)
        if d.is_zero():
            return Matrix(self.field, self.dim(n), 0)
        return column_space_basis(d)

    def cycles(self, n: int) -> Matrix:
        if not self.dim(n):
            return Matrix(self.field, 0, 0)
        if not self.dim(n + 1):
            return Matrix.identity(self.field, self.dim(n))
        return kernel_basis(self.d(n))

    def cohomology(self, n: int):
        cache = self.__dict__.setdefault("_coh", {})
        if n in cache:
            return cache[n]
        F = self.field
        bd = self.boundaries(n)
        reps = []
        cur = bd
        r = bd.ncols
        for z in self.cycles(n).columns():
            cand = cur.hstack(Matrix.from_columns(F, [z], self.dim(n))) if cur.ncols else \
                Matrix.from_columns(F, [z], self.dim(n))
            if rank(cand) > r:
                cur, r = cand, r + 1
                reps.append(z)
        res = (len(reps), Matrix.from_columns(F, reps, self.dim(n)))
        cache[n] = res
        return res

    def class_coords(self, n: int, z: Sequence) -> list:
        """Coordinates of the class of the cycle ``z`` in the representative basis."""
        h, reps = self.cohomology(n)
        bd = self.boundaries(n)
        sys = reps.hstack(bd) if bd.ncols else reps
        if sys.ncols == 0:
            return []
        x = solve(sys, z)
        if x is None:
            raise ComplexError("vector is not a cycle")
        return x[:h]

    def is_boundary(self, n: int, z: Sequence) -> bool:
        if not any(z):
            return True
        bd = self.boundaries(n)
        return bd.ncols > 0 and solve(bd, z) is not None


class ChainMap:
    """Degreewise module maps commuting with the differentials."""

    def __init__(self, source: BoundedComplex, target: BoundedComplex, maps: Dict[int, Matrix],
                 check: bool = True):
        self.source, self.target = source, target
        self.maps = {}
        for k, m in maps.items():
            if source.dim(k) and target.dim(k):
                if m.shape != (target.dim(k), source.dim(k)):
                    raise ComplexError("chain map component %d has shape %s" % (k, m.shape))
                if not m.is_zero():
                    self.maps[k] = m
        if check:
            self.validate()

    def at(self, k: int) -> Matrix:
        if k in self.maps:
            return self.maps[k]
        return Matrix(self.source.field, self.target.dim(k), self.source.dim(k))

    def validate(self):
        S, T = self.source, self.target
        for k in set(S.terms) | set(T.terms):
            lhs = T.d(k) @ self.at(k)
            rhs = self.at(k + 1) @ S.d(k)
            if lhs != rhs:
                raise ComplexError("chain map does not commute with d in degree %d" % k)
        for k, m in self.maps.items():
            if not is_module_map(S.terms[k], T.terms[k], m):
                raise ComplexError("chain map component %d is not a module map" % k)

    def is_zero(self) -> bool:
        return not self.maps

    def __repr__(self):
        return "ChainMap(%r -> %r)" % (self.source, self.target)


def identity_map(C: BoundedComplex) -> ChainMap:
    return ChainMap(C, C, {k: Matrix.identity(C.field, m.dim) for k, m in C.terms.items()}, check=False)


def zero_map(S: BoundedComplex, T: BoundedComplex) -> ChainMap:
    return ChainMap(S, T, {}, check=False)


def compose(g: ChainMap, f: ChainMap) -> ChainMap:
    """``g o f``."""
    maps = {k: g.at(k) @ f.at(k) for k in f.source.terms if g.target.dim(k)}
    return ChainMap(f.source, g.target, maps, check=False)


def add_maps(f: ChainMap, g: ChainMap, cf=1, cg=1) -> ChainMap:
    F = f.source.field
    maps = {}
    for k in set(f.source.terms):
        if f.target.dim(k):
            maps[k] = f.at(k).scale(F(cf)) + g.at(k).scale(F(cg))
    return ChainMap(f.source, f.target, maps, check=False)


def shift(C: BoundedComplex, n: int) -> BoundedComplex:
    """``C[n]``: degree ``k`` holds ``C^{k+n}``, differential multiplied by ``(-1)^n``."""
    if n == 0:
        return C
    sign = -1 if n % 2 else 1
    terms = {k - n: m for k, m in C.terms.items()}
    diffs = {k - n: (d if sign == 1 else -d) for k, d in C.diffs.items()}
    labels = {k - n: v for k, v in C.labels.items()} if C.labels else None
    return BoundedComplex(C.algebra, terms, diffs, labels=labels, check=False)


def shift_map(f: ChainMap, n: int) -> ChainMap:
    return ChainMap(shift(f.source, n), shift(f.target, n),
                    {k - n: m for k, m in f.maps.items()}, check=False)


def direct_sum_complexes(cs: Sequence[BoundedComplex], labels: Optional[Sequence[str]] = None,
                         A: Optional[FDAlgebra] = None) -> BoundedComplex:
    """Direct sum; ``labels`` (one per summand) names the blocks, otherwise existing labels are kept."""
    if not cs:
        return zero_complex(A)
    A = cs[0].algebra
    F = A.field
    degs = sorted(set().union(*[c.terms for c in cs]))
    terms, diffs, labs = {}, {}, {}
    for k in degs:
        terms[k] = direct_sum([c.term(k) for c in cs if c.dim(k)], A)
        lk = []
        for i, c in enumerate(cs):
            if c.dim(k):
                n = len(c.term(k).summands())
                lk.extend([labels[i]] * n if labels else list(c.part_labels(k)))
        labs[k] = tuple(lk)
    for k in degs:
        if k + 1 in terms:
            diffs[k] = Matrix.block_diagonal(F, [c.d(k) for c in cs])
    return BoundedComplex(A, terms, diffs, labels=labs, check=False)


def direct_sum_maps(fs: Sequence[ChainMap]) -> ChainMap:
    S = direct_sum_complexes([f.source for f in fs])
    T = direct_sum_complexes([f.target for f in fs])
    F = S.field
    maps = {k: Matrix.block_diagonal(F, [f.at(k) for f in fs]) for k in S.terms if T.dim(k)}
    return ChainMap(S, T, maps, check=False)


def cone(f: ChainMap):
    """``(cone, inclusion Y -> cone, projection cone -> X[1])`` for ``f: X -> Y``."""
    X, Y = f.source, f.target
    A = X.algebra
    F = A.field
    degs = sorted(set(k - 1 for k in X.terms) | set(Y.terms))
    terms, diffs, labels = {}, {}, {}
    for k in degs:
        parts = [m for m in (X.term(k + 1), Y.term(k)) if m.dim]
        terms[k] = direct_sum(parts, A)
        labels[k] = tuple(X.part_labels(k + 1) if X.dim(k + 1) else ()) + \
            tuple(Y.part_labels(k) if Y.dim(k) else ())
    for k in degs:
        xs, ys = X.dim(k + 1), Y.dim(k)
        xt, yt = X.dim(k + 2), Y.dim(k + 1)
        if not (xs + ys) or not (xt + yt):
            continue
        diffs[k] = Matrix.block(F, [[-X.d(k + 1), None], [f.at(k + 1), Y.d(k)]], [xt, yt], [xs, ys])
    C = BoundedComplex(A, terms, diffs, labels=labels, check=False)
    inc = ChainMap(Y, C, {k: Matrix.block(F, [[None], [Matrix.identity(F, Y.dim(k))]],
                                          [X.dim(k + 1), Y.dim(k)], [Y.dim(k)])
                          for k in Y.terms}, check=False)
    X1 = shift(X, 1)
    proj = ChainMap(C, X1, {k: Matrix.block(F, [[Matrix.identity(F, X.dim(k + 1)), None]],
                                            [X.dim(k + 1)], [X.dim(k + 1), Y.dim(k)])
                            for k in C.terms if X.dim(k + 1)}, check=False)
    return C, inc, proj


def is_quasi_iso(f: ChainMap) -> bool:
    return cone(f)[0].is_acyclic()


def cohomology_rank(f: ChainMap, n: int) -> int:
    """Rank of ``H^n(f)``."""
    S, T = f.source, f.target
    if not S.dim(n) or not T.dim(n):
        return 0
    z = S.linear.cycles(n)
    if z.ncols == 0:
        return 0
    img = f.at(n) @ z
    bd = T.linear.boundaries(n)
    return rank(img.hstack(bd) if bd.ncols else img) - bd.ncols


def brutal_truncation_below(C: BoundedComplex, n: int) -> BoundedComplex:
    """Terms of degree ``< n``."""
    terms = {k: m for k, m in C.terms.items() if k < n}
    diffs = {k: d for k, d in C.diffs.items() if k + 1 < n}
    labels = {k: C.part_labels(k) for k in terms}
    return BoundedComplex(C.algebra, terms, diffs, labels=labels, check=False)


# ---------------------------------------------------------------------------
# Hom complexes out of perfect complexes

class HomComplex:
    """``Hom^*(E, M)`` for ``E`` with projective terms, via ``Hom(A e_i, N) = e_i N``.

    Each basis vector is the image of a generator ``e_i`` of one projective
    summand of ``E^p`` in a basis vector of ``e_i M^{p+n}``.
    """

    def __init__(self, E: BoundedComplex, M: BoundedComplex):
        if E.algebra is not M.algebra:
            raise ComplexError("complexes over different algebras")
        if not E.is_perfect:
            raise ComplexError("source of a Hom complex must have projective terms")
        self.E, self.M = E, M
        self.field = E.field
        comps: Dict[int, list] = {}
        if E.terms and M.terms:
            for n in range(M.lo - E.hi, M.hi - E.lo + 1):
                lst, off = [], 0
                for p, Ep in E.terms.items():
                    q = p + n
                    if not M.dim(q):
                        continue
                    Mq = M.terms[q]
                    for t, part in enumerate(Ep.summands()):
                        size = Mq.idem_basis(part.proj_index).ncols
                        if size:
                            lst.append((p, t, part.proj_index, q, off, size))
                            off += size
                if off:
                    comps[n] = (lst, off)
        self.components = comps
        self.linear = LinearComplex(self.field, {n: v[1] for n, v in comps.items()},
                                    self._differentials())

    def dim(self, n: int) -> int:
        return self.components[n][1] if n in self.components else 0

    def to_maps(self, n: int, vec: Sequence) -> Dict[int, Matrix]:
        """Degreewise matrices ``E^p -> M^{p+n}`` of a degree-``n`` element."""
        E, M = self.E, self.M
        F = self.field
        out = {}
        if n not in self.components:
            return out
        blocks: Dict[int, list] = {}
        for p, t, i, q, off, size in self.components[n][0]:
            coords = vec[off:off + size]
            if not any(coords):
                continue
            Mq = M.terms[q]
            m = Mq.idem_basis(i).apply(coords)
            part = E.terms[p].summands()[t]
            blocks.setdefault(p, {})[t] = map_from_projective(part, Mq, m)
        for p, bl in blocks.items():
            Ep = E.terms[p]
            q = p + n
            mat = Matrix(F, M.dim(q), Ep.dim)
            for t, b in bl.items():
                o = Ep.offsets[t]
                for r in range(b.nrows):
                    mat.rows[r][o:o + b.ncols] = b.rows[r]
            out[p] = mat
        return out

    def from_maps(self, n: int, maps: Dict[int, Matrix]) -> list:
        """Coordinates of the degree-``n`` element with the given components."""
        F = self.field
        vec = [F.zero] * self.dim(n)
        if n not in self.components:
            return vec
        for p, t, i, q, off, size in self.components[n][0]:
            m = maps.get(p)
            if m is None:
                continue
            Ep = self.E.terms[p]
            part = Ep.summands()[t]
            col = [F.zero] * Ep.dim
            o = Ep.offsets[t]
            for j, g in enumerate(part.generator):
                col[o + j] = g
            img = m.apply(col)
            vec[off:off + size] = self.M.terms[q].idem_coords(i).apply(img)
        return vec

    def _differentials(self) -> Dict[int, Matrix]:
        E, M = self.E, self.M
        F = self.field
        diffs = {}
        for n in self.components:
            if n + 1 not in self.components:
                continue
            sign = -1 if n % 2 else 1
            cols = []
            for j in range(self.dim(n)):
                e = [F.zero] * self.dim(n)
                e[j] = F.one
                maps = self.to_maps(n, e)
                res: Dict[int, Matrix] = {}
                for p, phi in maps.items():
                    q = p + n
                    if M.dim(q + 1):
                        res[p] = M.d(q) @ phi
                    if E.dim(p - 1):
                        t = phi @ E.d(p - 1)
                        t = t if sign == -1 else -t
                        res[p - 1] = res[p - 1] + t if p - 1 in res else t
                cols.append(self.from_maps(n + 1, res))
            diffs[n] = Matrix.from_columns(F, cols, self.dim(n + 1))
        return diffs

    def apply_total(self, n: int, vec: Sequence) -> list:
        return self.linear.d(n).apply(vec)

    def chain_map(self, k: int, vec: Sequence) -> ChainMap:
        """The chain map ``E[k] -> M`` of a degree ``-k`` cycle."""
        maps = self.to_maps(-k, vec)
        Ek = shift(self.E, k)
        return ChainMap(Ek, self.M, {p - k: m for p, m in maps.items()}, check=False)

    def element_of(self, f: ChainMap, k: int) -> list:
        """Coordinates of a chain map ``E[k] -> M`` as a degree ``-k`` element."""
        return self.from_maps(-k, {q + k: m for q, m in f.maps.items()})

    def hom_dims(self) -> Dict[int, int]:
        """``{k: dim Hom_D(E[k], M)}`` for the nonzero groups."""
        return {-n: h for n, h in self.linear.cohomology_dims().items()}


def hom_complex(E: BoundedComplex, M: BoundedComplex) -> HomComplex:
    return HomComplex(E, M)


def homotopy_class_basis(E: BoundedComplex, M: BoundedComplex, k: int) -> List[ChainMap]:
    """Chain maps ``E[k] -> M`` lifting a basis of ``Hom_D(E[k], M)``."""
    H = HomComplex(E, M)
    h, reps = H.linear.cohomology(-k)
    return [H.chain_map(k, v) for v in reps.columns()]


def hom_dim(E: BoundedComplex, M: BoundedComplex, k: int = 0) -> int:
    """``dim Hom_D(E[k], M)`` for ``E`` perfect."""
    return HomComplex(E, M).linear.cohomology_dim(-k)


def is_null_homotopic(f: ChainMap, k: int = 0) -> bool:
    """For ``f: E[k] -> M`` with ``E`` perfect (source given unshifted via ``k``)."""
    E = shift(f.source, -k)
    H = HomComplex(E, f.target)
    return H.linear.is_boundary(-k, H.element_of(f, k))


# ---------------------------------------------------------------------------
# directed systems and homotopy colimits

class DirectedSystem:
    """Complexes indexed by a finite poset with functorial transition maps.

    ``maps[(s, t)]`` is given for every pair ``s < t``; identities are implicit.
    """

    def __init__(self, elements: Sequence[Hashable], less: Sequence[Tuple[Hashable, Hashable]],
                 complexes: Dict[Hashable, BoundedComplex], maps: Dict[Tuple, ChainMap],
                 eventually_constant: bool = False):
        self.elements = list(elements)
        self.less = set(less)
        self.complexes = dict(complexes)
        self.maps = dict(maps)
        self.eventually_constant = eventually_constant
        self._check()

    def _check(self):
        for s, t in self.less:
            if (s, t) not in self.maps:
                raise ComplexError("missing transition map %r -> %r" % (s, t))
            f = self.maps[(s, t)]
            if f.source is not self.complexes[s] or f.target is not self.complexes[t]:
                raise ComplexError("transition map %r -> %r has wrong endpoints" % (s, t))
            f.validate()
        for s, t in self.less:
            for t2, u in self.less:
                if t2 == t:
                    if (s, u) not in self.less:
                        raise ComplexError("order relation is not transitive at %r < %r < %r" % (s, t, u))
                    lhs = compose(self.maps[(t, u)], self.maps[(s, t)])
                    rhs = self.maps[(s, u)]
                    for k in self.complexes[s].terms:
                        if lhs.at(k) != rhs.at(k):
                            raise ComplexError("transition maps not functorial on (%r, %r, %r)" % (s, t, u))

    def mu(self, s, t) -> ChainMap:
        if s == t:
            return identity_map(self.complexes[s])
        return self.maps[(s, t)]

    def chains(self, s, r: int) -> List[tuple]:
        """Strict chains ``s < s_1 < ... < s_r``."""
        if r == 0:
            return [(s,)]
        out = []
        for c in self.chains(s, r - 1):
            for t in self.elements:
                if (c[-1], t) in self.less:
                    out.append(c + (t,))
        return out

    @property
    def maximum(self):
        for m in self.elements:
            if all(s == m or (s, m) in self.less for s in self.elements):
                return m
        return None

    @classmethod
    def sequence(cls, complexes: Sequence[BoundedComplex], steps: Sequence[ChainMap]):
        """System over ``0 < 1 < ... < m``, constant after ``m``; ``steps[n]: G_n -> G_{n+1}``."""
        m = len(complexes) - 1
        if len(steps) != m:
            raise ComplexError("need one step map per consecutive pair")
        maps = {}
        for s in range(m + 1):
            cur = None
            for t in range(s + 1, m + 1):
                cur = steps[t - 1] if cur is None else compose(steps[t - 1], cur)
                maps[(s, t)] = cur
        less = [(s, t) for s in range(m + 1) for t in range(s + 1, m + 1)]
        return cls(list(range(m + 1)), less, dict(enumerate(complexes)), maps, eventually_constant=True)


def hocolim_sequence(sys: DirectedSystem):
    """Milnor telescope ``cone(1 - mu)`` on the stabilised tail.

    Returns ``(telescope, comparison map to the colimit G_m)``.
    """
    if not sys.eventually_constant:
        raise ComplexError("telescope needs an eventually constant sequence")
    m = len(sys.elements) - 1
    Gs = [sys.complexes[n] for n in range(m + 1)]
    A = Gs[0].algebra
    F = A.field
    src = direct_sum_complexes(Gs[:m], A=A) if m else zero_complex(A)
    tgt = direct_sum_complexes(Gs, A=A)
    maps = {}
    for k in src.terms:
        rs = [G.dim(k) for G in Gs]
        cs = [G.dim(k) for G in Gs[:m]]
        grid = [[None] * m for _ in range(m + 1)]
        for n in range(m):
            grid[n][n] = Matrix.identity(F, Gs[n].dim(k))
            grid[n + 1][n] = -sys.mu(n, n + 1).at(k)
        maps[k] = Matrix.block(F, grid, rs, cs)
    f = ChainMap(src, tgt, maps, check=False)
    tel, inc, _ = cone(f)
    colim = Gs[m]
    comp = {}
    for k in tel.terms:
        if not colim.dim(k):
            continue
        xs = src.dim(k + 1)
        blocks = [Matrix(F, colim.dim(k), xs)] if xs else []
        blocks += [sys.mu(n, m).at(k) for n in range(m + 1) if Gs[n].dim(k)]
        mat = blocks[0]
        for b in blocks[1:]:
            mat = mat.hstack(b)
        comp[k] = mat
    return tel, ChainMap(tel, colim, comp, check=False)


def hocolim_bicomplex(sys: DirectedSystem):
    """Totalization of the chain-indexed bicomplex of the system.

    Column ``-r`` is the sum of ``G_s`` over chains ``s < s_1 < ... < s_r``;
    the horizontal differential sends ``(x; s < s_1 < ... < s_r)`` to
    ``(mu_{s s_1} x; s_1 < ... < s_r) + sum_i (-1)^i (x; ... omit s_i ...)``,
    and the total differential is ``d_1 + (-1)^{column} d_2``.
    Returns ``(Tot, comparison map to the explicit colimit, colimit)``.
    """
    A = next(iter(sys.complexes.values())).algebra
    F = A.field
    columns = []  # (r, chain)
    r = 0
    while True:
        cs = [c for s in sys.elements for c in sys.chains(s, r)]
        if not cs:
            break
        columns.extend((r, c) for c in cs)
        r += 1
    G = sys.complexes
    degs = set()
    for r, c in columns:
        degs |= {k - r for k in G[c[0]].terms}
    terms, index = {}, {}
    for n in sorted(degs):
        summ, off = [], 0
        for r, c in columns:
            mod = G[c[0]].term(n + r)
            if mod.dim:
                summ.append(((r, c), off, mod))
                off += mod.dim
        if summ:
            terms[n] = direct_sum([x[2] for x in summ], A)
            index[n] = {key: (o, mod.dim) for key, o, mod in summ}
    diffs = {}
    for n in terms:
        if n + 1 not in terms:
            continue
        D = Matrix(F, terms[n + 1].dim, terms[n].dim)
        for (r, c), (o, sz) in index[n].items():
            j = n + r
            s = c[0]
            # vertical part
            sign = -1 if r % 2 else 1
            tgt = index[n + 1].get((r, c))
            if tgt is not None:
                dv = G[s].d(j)
                for a in range(dv.nrows):
                    for b in range(dv.ncols):
                        if dv.rows[a][b]:
                            D.rows[tgt[0] + a][o + b] += sign * dv.rows[a][b]
            if r == 0:
                continue
            # horizontal part lands in column -(r-1), same internal degree j
            pieces = [((r - 1, c[1:]), sys.mu(s, c[1]).at(j))]
            for i in range(1, r + 1):
                sub = c[:i] + c[i + 1:]
                coef = -1 if i % 2 else 1
                pieces.append(((r - 1, sub), Matrix.identity(F, sz).scale(F(coef))))
            for key, mat in pieces:
                tgt = index[n + 1].get(key)
                if tgt is None or mat.nrows == 0:
                    continue
                for a in range(mat.nrows):
                    for b in range(mat.ncols):
                        if mat.rows[a][b]:
                            D.rows[tgt[0] + a][o + b] += mat.rows[a][b]
        diffs[n] = D
    tot = BoundedComplex(A, terms, diffs, check=False)
    tot.validate()
    colim, proj = colimit(sys)
    comp = {}
    for n in tot.terms:
        if not colim.dim(n):
            continue
        mat = Matrix(F, colim.dim(n), tot.dim(n))
        for (r, c), (o, sz) in index[n].items():
            if r:
                continue
            blk = proj[c[0]].at(n)
            for a in range(blk.nrows):
                for b in range(blk.ncols):
                    mat.rows[a][o + b] = blk.rows[a][b]
        comp[n] = mat
    return tot, ChainMap(tot, colim, comp, check=False), colim


def colimit(sys: DirectedSystem):
    """Colimit in the category of complexes, as a degreewise cokernel.

    Returns ``(colim, {s: G_s -> colim})``.
    """
    A = next(iter(sys.complexes.values())).algebra
    F = A.field
    els = sys.elements
    G = sys.complexes
    pairs = sorted(sys.less, key=lambda p: (els.index(p[0]), els.index(p[1])))
    total = direct_sum_complexes([G[s] for s in els], A=A)
    degs = sorted(total.terms)
    terms, projs, sections = {}, {}, {}
    for k in degs:
        offs, o = {}, 0
        for s in els:
            offs[s] = o
            o += G[s].dim(k)
        cols = []
        for s, t in pairs:
            mu = sys.mu(s, t).at(k)
            for b in range(G[s].dim(k)):
                v = [F.zero] * o
                v[offs[s] + b] = F.one
                for a in range(G[t].dim(k)):
                    v[offs[t] + a] = v[offs[t] + a] - mu.rows[a][b]
                cols.append(v)
        sub = Matrix.from_columns(F, cols, o) if cols else Matrix(F, o, 0)
        Q, pr, sec = quotient_module(total.terms[k], sub)
        terms[k], projs[k], sections[k] = Q, pr, sec
    diffs = {}
    for k in degs:
        if k + 1 in terms and terms[k].dim and terms[k + 1].dim:
            diffs[k] = projs[k + 1] @ total.d(k) @ sections[k]
    colim = BoundedComplex(A, terms, diffs)
    tot_proj = ChainMap(total, colim, projs, check=False)
    legs = {}
    for idx, s in enumerate(els):
        maps = {}
        for k in G[s].terms:
            if not colim.dim(k):
                continue
            o = sum(G[t].dim(k) for t in els[:idx])
            maps[k] = projs[k].submatrix(range(colim.dim(k)), range(o, o + G[s].dim(k)))
        legs[s] = ChainMap(G[s], colim, maps)
    return colim, legs


# ---------------------------------------------------------------------------
# perfect resolutions

def cancel_contractible(P: BoundedComplex):
    """Gaussian elimination of invertible differential blocks between summands.

    Returns ``(Q, incl)`` with ``incl: Q -> P`` a homotopy equivalence.
    """
    F = P.field
    A = P.algebra
    cur = P
    incl = identity_map(P)
    while True:
        found = None
        for k in sorted(cur.diffs):
            d = cur.diffs[k]
            S, T = cur.terms[k], cur.terms[k + 1]
            for si, sp in enumerate(S.summands()):
                for ti, tp in enumerate(T.summands()):
                    if sp.dim != tp.dim:
                        continue
                    so, to = S.offsets[si], T.offsets[ti]
                    blk = d.submatrix(range(to, to + tp.dim), range(so, so + sp.dim))
                    if rank(blk) == sp.dim:
                        found = (k, si, ti)
                        break
                if found:
                    break
            if found:
                break
        if not found:
            return cur, incl
        k, si, ti = found
        new, step = _eliminate(cur, k, si, ti)
        incl = compose(incl, step)
        cur = new


def _eliminate(C: BoundedComplex, k: int, si: int, ti: int):
    from .linalg import inverse
    F = C.field
    A = C.algebra
    S, T = C.terms[k], C.terms[k + 1]
    sp, tp = S.summands()[si], T.summands()[ti]
    s_idx = list(range(S.offsets[si], S.offsets[si] + sp.dim))
    a_idx = [i for i in range(S.dim) if i not in set(s_idx)]
    t_idx = list(range(T.offsets[ti], T.offsets[ti] + tp.dim))
    b_idx = [i for i in range(T.dim) if i not in set(t_idx)]
    d = C.diffs[k]
    phi = d.submatrix(t_idx, s_idx)
    beta = d.submatrix(t_idx, a_idx)
    gamma = d.submatrix(b_idx, s_idx)
    delta = d.submatrix(b_idx, a_idx)
    phinv = inverse(phi)
    terms = dict(C.terms)
    labels = {j: C.part_labels(j) for j in C.terms}
    Sparts = [p for i, p in enumerate(S.summands()) if i != si]
    Tparts = [p for i, p in enumerate(T.summands()) if i != ti]
    terms[k] = direct_sum(Sparts, A)
    terms[k + 1] = direct_sum(Tparts, A)
    labels[k] = tuple(l for i, l in enumerate(C.part_labels(k)) if i != si)
    labels[k + 1] = tuple(l for i, l in enumerate(C.part_labels(k + 1)) if i != ti)
    diffs = dict(C.diffs)
    if a_idx and b_idx:
        diffs[k] = delta - gamma @ phinv @ beta
    else:
        diffs.pop(k, None)
    if k - 1 in C.diffs:
        dm = C.diffs[k - 1]
        diffs[k - 1] = dm.submatrix(a_idx, range(dm.ncols))
    if k + 1 in C.diffs:
        dp = C.diffs[k + 1]
        diffs[k + 1] = dp.submatrix(range(dp.nrows), b_idx)
    new = BoundedComplex(A, terms, diffs, labels=labels, check=False)
    maps = {}
    for j in C.terms:
        if j == k:
            m = Matrix(F, S.dim, len(a_idx))
            corr = -(phinv @ beta) if a_idx else None
            for c, ai in enumerate(a_idx):
                m.rows[ai][c] = F.one
                for r, sidx in enumerate(s_idx):
                    m.rows[sidx][c] = corr.rows[r][c]
            maps[j] = m
        elif j == k + 1:
            m = Matrix(F, T.dim, len(b_idx))
            for c, bi in enumerate(b_idx):
                m.rows[bi][c] = F.one
            maps[j] = m
        else:
            maps[j] = Matrix.identity(F, C.dim(j))
    return new, ChainMap(new, C, maps, check=False)


def strict_lift(P: BoundedComplex, pi: ChainMap, h: ChainMap) -> ChainMap:
    """Chain map ``g: P -> Q`` with ``pi o g = h`` for ``pi: Q -> X`` surjective quasi-iso."""
    Q, X = pi.source, pi.target
    F = P.field
    HQ = HomComplex(P, Q)
    HX = HomComplex(P, X)
    n0 = HQ.dim(0)
    if n0 == 0:
        if not h.is_zero():
            raise ComplexError("no lift exists")
        return zero_map(P, Q)
    cols = []
    for j in range(n0):
        e = [F.zero] * n0
        e[j] = F.one
        maps = HQ.to_maps(0, e)
        comp = {p: pi.at(p) @ m for p, m in maps.items() if X.dim(p)}
        cols.append(HQ.linear.d(0).apply(e) + HX.from_maps(0, comp))
    sysm = Matrix.from_columns(F, cols, HQ.dim(1) + HX.dim(0))
    rhs = [F.zero] * HQ.dim(1) + HX.from_maps(0, h.maps)
    x = solve(sysm, rhs)
    if x is None:
        raise ComplexError("no strict lift exists")
    return ChainMap(P, Q, HQ.to_maps(0, x), check=False)


def perfect_resolution(C: BoundedComplex, max_len: int = 16, J=None, minimize: bool = True):
    """Quasi-isomorphism ``P -> C`` from a bounded complex of projectives.

    Built by peeling off the top term: ``C = cone(C'[-1] -> C^hi)``, resolving
    both pieces and lifting the gluing map strictly.  Raises
    :class:`ResolutionError` when a module resolution does not terminate.
    """
    A = C.algebra
    F = A.field
    if C.is_zero:
        Z = zero_complex(A)
        return Z, zero_map(Z, C)
    if C.is_perfect:
        return C, identity_map(C)
    P, phi = _perfect_resolution(C, max_len, J)
    if minimize:
        Pm, inc = cancel_contractible(P)
        return Pm, compose(phi, inc)
    return P, phi


def _perfect_resolution(C: BoundedComplex, max_len: int, J):
    A = C.algebra
    F = A.field
    hi = C.hi
    X = C.terms[hi]
    R, aug, ok = projective_resolution(X, max_len, J)
    if not ok:
        raise ResolutionError("projective resolution of a degree-%d term did not terminate "
                              "within %d steps" % (hi, max_len))
    Q = shift(R, -hi)
    Xc = BoundedComplex(A, {hi: X}, {}, check=False)
    pi = ChainMap(Q, Xc, {hi: aug}, check=False)
    if C.lo == hi:
        return Q, pi
    Cp = brutal_truncation_below(C, hi)
    Pp, phip = _perfect_resolution(Cp, max_len, J)
    Cp1 = shift(Cp, -1)
    h = ChainMap(Cp1, Xc, {hi: C.d(hi - 1)}, check=False)
    Pp1 = shift(Pp, -1)
    target = compose(h, shift_map(phip, -1))
    g = strict_lift(Pp1, pi, target)
    P, _, _ = cone(g)
    maps = {}
    for k in P.terms:
        a, b = Pp.dim(k), Q.dim(k)
        rs = [Cp.dim(k), Xc.dim(k)]
        maps[k] = Matrix.block(F, [[phip.at(k), None], [None, pi.at(k)]], rs, [a, b])
    return P, ChainMap(P, C, maps, check=False)


def derived_hom_dims(M: BoundedComplex, N: BoundedComplex, ks: Sequence[int], max_len: int = 16,
                     J=None) -> Dict[int, int]:
    """``{k: dim Hom_D(M, N[k])}`` via a perfect resolution of ``M``."""
    P, _ = perfect_resolution(M, max_len, J)
    H = HomComplex(P, N)
    return {k: H.linear.cohomology_dim(k) for k in ks}


# ---------------------------------------------------------------------------
# blocks of perfect complexes and cohomology modules

def block_parts(C: BoundedComplex, label: str) -> Dict[int, List[int]]:
    """Indices of the summands carrying ``label`` in each degree."""
    return {k: [t for t, lab in enumerate(C.part_labels(k)) if lab == label] for k in C.terms}


def _part_coords(C: BoundedComplex, k: int, parts: Sequence[int]) -> List[int]:
    M = C.terms[k]
    out = []
    for t in parts:
        o = M.offsets[t]
        out.extend(range(o, o + M.summands()[t].dim))
    return out


def block_subcomplex(C: BoundedComplex, label: str):
    """``(C_a, inclusion, projection)`` for the declared block ``label``.

    The differential must not mix blocks, so that ``C`` is the direct sum of
    its block subcomplexes.
    """
    A = C.algebra
    F = C.field
    parts = block_parts(C, label)
    idx = {k: _part_coords(C, k, parts[k]) for k in C.terms}
    for k, d in C.diffs.items():
        other = [i for i in range(C.dim(k)) if i not in set(idx[k])]
        if other and idx[k + 1] and not d.submatrix(idx[k + 1], other).is_zero():
            raise ComplexError("differential mixes block %r with other blocks" % label)
        if idx[k] and len(idx[k + 1]) < C.dim(k + 1):
            rest = [i for i in range(C.dim(k + 1)) if i not in set(idx[k + 1])]
            if not d.submatrix(rest, idx[k]).is_zero():
                raise ComplexError("differential mixes block %r with other blocks" % label)
    terms, diffs, labels = {}, {}, {}
    for k in C.terms:
        if parts[k]:
            summ = C.terms[k].summands()
            terms[k] = direct_sum([summ[t] for t in parts[k]], A)
            labels[k] = (label,) * len(parts[k])
    for k, d in C.diffs.items():
        if k in terms and k + 1 in terms:
            diffs[k] = d.submatrix(idx[k + 1], idx[k])
    B = BoundedComplex(A, terms, diffs, labels=labels, check=False)
    inc, proj = {}, {}
    for k in terms:
        m = Matrix(F, C.dim(k), len(idx[k]))
        for c, r in enumerate(idx[k]):
            m.rows[r][c] = F.one
        inc[k] = m
        proj[k] = m.transpose()
    return B, ChainMap(B, C, inc, check=False), ChainMap(C, B, proj, check=False)


def block_idempotent(C: BoundedComplex, label: str) -> ChainMap:
    _, inc, proj = block_subcomplex(C, label)
    return compose(inc, proj)


def cohomology_module(C: BoundedComplex, n: int):
    """``H^n(C)`` as a module, with the matrix sending its basis to cycle representatives."""
    A = C.algebra
    F = A.field
    if not C.dim(n):
        return zero_module(A), Matrix(F, 0, 0)
    from .rep import submodule
    Zb = C.linear.cycles(n)
    if Zb.ncols == 0:
        return zero_module(A), Matrix(F, C.dim(n), 0)
    Z, zinc = submodule(C.terms[n], Zb)
    bd = C.linear.boundaries(n)
    sub = solve_matrix(zinc, bd) if bd.ncols else Matrix(F, Z.dim, 0)
    H, pr, sec = quotient_module(Z, sub)
    return H, zinc @ sec


def chain_map_space(S: BoundedComplex, T: BoundedComplex) -> List[ChainMap]:
    """Basis of the space of chain maps ``S -> T`` (degreewise module maps commuting with d)."""
    from .rep import hom_module
    F = S.field
    degs = [k for k in S.terms if T.dim(k)]
    bases = {k: [h.matrix for h in hom_module(S.terms[k], T.terms[k])] for k in degs}
    offs, n = {}, 0
    for k in degs:
        offs[k] = n
        n += len(bases[k])
    if n == 0:
        return []
    rows = []
    for k in set(S.terms) | set(T.terms):
        # d_T f^k - f^{k+1} d_S = 0 as a map S^k -> T^{k+1}
        if not S.dim(k) or not T.dim(k + 1):
            continue
        blocks = []
        if k in bases:
            for j, b in enumerate(bases[k]):
                blocks.append((offs[k] + j, T.d(k) @ b))
        if k + 1 in bases:
            for j, b in enumerate(bases[k + 1]):
                blocks.append((offs[k + 1] + j, -(b @ S.d(k))))
        for r in range(T.dim(k + 1)):
            for c in range(S.dim(k)):
                row = [F.zero] * n
                for j, m in blocks:
                    row[j] = m.rows[r][c]
                if any(row):
                    rows.append(row)
    if rows:
        ker = kernel_basis(Matrix(F, len(rows), n, rows))
        vecs = ker.columns()
    else:
        vecs = [[F.one if i == j else F.zero for i in range(n)] for j in range(n)]
    out = []
    for v in vecs:
        maps = {}
        for k in degs:
            m = Matrix(F, T.dim(k), S.dim(k))
            for j, b in enumerate(bases[k]):
                c = v[offs[k] + j]
                if c:
                    m = m + b.scale(c)
            maps[k] = m
        out.append(ChainMap(S, T, maps, check=False))
    return out


def soft_truncation_leq(C: BoundedComplex, n: int) -> BoundedComplex:
    """``tau^{<= n} C``: terms below ``n`` and the cycles in degree ``n``."""
    from .rep import submodule
    A = C.algebra
    terms = {k: m for k, m in C.terms.items() if k < n}
    diffs = {k: d for k, d in C.diffs.items() if k + 1 < n}
    if C.dim(n):
        Zb = C.linear.cycles(n)
        if Zb.ncols:
            Z, inc = submodule(C.terms[n], Zb)
            terms[n] = Z
            if C.dim(n - 1):
                from .linalg import left_inverse
                diffs[n - 1] = left_inverse(inc) @ C.d(n - 1)
    return BoundedComplex(A, terms, diffs)


def soft_truncation_geq(C: BoundedComplex, n: int) -> BoundedComplex:
    """``tau^{>= n} C``: the cokernel of ``d^{n-1}`` in degree ``n`` and the terms above."""
    A = C.algebra
    terms = {k: m for k, m in C.terms.items() if k > n}
    diffs = {k: d for k, d in C.diffs.items() if k > n}
    if C.dim(n):
        bd = C.linear.boundaries(n)
        Q, pr, sec = quotient_module(C.terms[n], bd)
        if Q.dim:
            terms[n] = Q
            if C.dim(n + 1):
                diffs[n] = C.d(n) @ sec
    return BoundedComplex(A, terms, diffs)

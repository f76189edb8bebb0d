"""Exact dense linear algebra over the rationals and prime fields.

Every homological question in the package (Hom spaces, cohomology, lifting
chain maps) is eventually a rank, kernel or solve call on a :class:`Matrix`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


class ModP:
    """Residue class modulo a prime ``p``."""

    __slots__ = ("v", "p")

    def __init__(self, v: int, p: int):
        self.v = v % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise ValueError("mixing residues of different primes")
            return other.v
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return other.numerator * pow(other.denominator, -1, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.v, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.v * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in GF(%d)" % self.p)
        return ModP(self.v * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ModP(o, self.p) / self

    def __neg__(self):
        return ModP(-self.v, self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return False
        return (self.v - o) % self.p == 0

    def __hash__(self):
        return hash((self.v, self.p))

    def __bool__(self):
        return self.v != 0

    def __repr__(self):
        return "%d mod %d" % (self.v, self.p)

    def __str__(self):
        return str(self.v)


class Field:
    """A ground field: ``Field()`` is the rationals, ``Field(p)`` is GF(p)."""

    def __init__(self, p: int = 0):
        if p and not _is_prime(p):
            raise ValueError("characteristic %d is not prime" % p)
        self.p = p
        self.zero = self(0)
        self.one = self(1)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def name(self) -> str:
        return "QQ" if self.p == 0 else "GF(%d)" % self.p

    def __call__(self, x):
        if isinstance(x, str):
            x = Fraction(x.strip())
        if self.p == 0:
            if isinstance(x, ModP):
                raise TypeError("cannot lift a residue to QQ")
            return Fraction(x)
        if isinstance(x, ModP):
            return ModP(x.v, self.p)
        x = Fraction(x)
        if x.denominator % self.p == 0:
            raise ZeroDivisionError("denominator vanishes mod %d" % self.p)
        return ModP(x.numerator * pow(x.denominator, -1, self.p), self.p)

    def to_str(self, x) -> str:
        return str(x)

    def __eq__(self, other):
        return isinstance(other, Field) and other.p == self.p

    def __hash__(self):
        return hash(("Field", self.p))

    def __repr__(self):
        return "Field(%s)" % self.name


QQ = Field()


class Matrix:
    """Dense matrix with exact entries, treated as immutable."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows=None):
        self.field = field
        self.nrows = nrows
        self.ncols = ncols
        if rows is None:
            z = field.zero
            rows = [[z] * ncols for _ in range(nrows)]
        else:
            rows = [list(r) for r in rows]
            if len(rows) != nrows or any(len(r) != ncols for r in rows):
                raise ValueError("inconsistent matrix dimensions")
        self.rows = rows

    # construction ---------------------------------------------------------
    @classmethod
    def from_rows(cls, field: Field, rows: Sequence[Sequence], ncols: Optional[int] = None):
        rows = [[field(x) for x in r] for r in rows]
        if ncols is None:
            ncols = len(rows[0]) if rows else 0
        return cls(field, len(rows), ncols, rows)

    @classmethod
    def zeros(cls, field: Field, nrows: int, ncols: int):
        return cls(field, nrows, ncols)

    @classmethod
    def identity(cls, field: Field, n: int):
        m = cls(field, n, n)
        for i in range(n):
            m.rows[i][i] = field.one
        return m

    @classmethod
    def from_columns(cls, field: Field, cols: Sequence[Sequence], nrows: int):
        m = cls(field, nrows, len(cols))
        for j, c in enumerate(cols):
            for i in range(nrows):
                m.rows[i][j] = c[i]
        return m

    @classmethod
    def block(cls, field: Field, blocks: Sequence[Sequence[Optional["Matrix"]]],
              row_sizes: Sequence[int], col_sizes: Sequence[int]):
        """Assemble from a grid of blocks; ``None`` blocks are zero."""
        out = cls(field, sum(row_sizes), sum(col_sizes))
        r0 = 0
        for bi, rs in enumerate(row_sizes):
            c0 = 0
            for bj, cs in enumerate(col_sizes):
                b = blocks[bi][bj]
                if b is not None:
                    if (b.nrows, b.ncols) != (rs, cs):
                        raise ValueError("block (%d,%d) has shape %s, expected %s"
                                         % (bi, bj, b.shape, (rs, cs)))
                    for i in range(rs):
                        row = out.rows[r0 + i]
                        src = b.rows[i]
                        for j in range(cs):
                            row[c0 + j] = src[j]
                c0 += cs
            r0 += rs
        return out

    @classmethod
    def block_diagonal(cls, field: Field, mats: Sequence["Matrix"]):
        rs = [m.nrows for m in mats]
        cs = [m.ncols for m in mats]
        grid = [[mats[i] if i == j else None for j in range(len(mats))] for i in range(len(mats))]
        return cls.block(field, grid, rs, cs)

    # basic protocol -------------------------------------------------------
    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def columns(self) -> list:
        return [self.column(j) for j in range(self.ncols)]

    def __eq__(self, other):
        return (isinstance(other, Matrix) and self.shape == other.shape
                and all(a == b for ra, rb in zip(self.rows, other.rows) for a, b in zip(ra, rb)))

    def __hash__(self):
        return hash((self.shape, tuple(tuple(str(x) for x in r) for r in self.rows)))

    def __repr__(self):
        return "Matrix(%s, %r)" % (self.field.name, [[str(x) for x in r] for r in self.rows])

    def is_zero(self) -> bool:
        return all(not x for r in self.rows for x in r)

    def to_strings(self) -> list:
        return [[str(x) for x in r] for r in self.rows]

    # arithmetic -----------------------------------------------------------
    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError("shape mismatch %s @ %s" % (self.shape, other.shape))
        z = self.field.zero
        n, m = other.nrows, other.ncols
        orows = other.rows
        out = []
        for row in self.rows:
            acc = [z] * m
            for k in range(n):
                a = row[k]
                if a:
                    ok = orows[k]
                    for j in range(m):
                        b = ok[j]
                        if b:
                            acc[j] = acc[j] + a * b
            out.append(acc)
        return Matrix(self.field, self.nrows, m, out)

    def apply(self, vec: Sequence) -> list:
        z = self.field.zero
        out = []
        for row in self.rows:
            s = z
            for a, b in zip(row, vec):
                if a and b:
                    s = s + a * b
            out.append(s)
        return out

    def __add__(self, other: "Matrix") -> "Matrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch %s + %s" % (self.shape, other.shape))
        return Matrix(self.field, self.nrows, self.ncols,
                      [[a + b for a, b in zip(ra, rb)] for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self + (-other)

    def __neg__(self) -> "Matrix":
        return Matrix(self.field, self.nrows, self.ncols, [[-a for a in r] for r in self.rows])

    def scale(self, c) -> "Matrix":
        return Matrix(self.field, self.nrows, self.ncols, [[c * a for a in r] for r in self.rows])

    def transpose(self) -> "Matrix":
        return Matrix(self.field, self.ncols, self.nrows,
                      [[self.rows[i][j] for i in range(self.nrows)] for j in range(self.ncols)])

    T = property(transpose)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix(self.field, len(rows), len(cols),
                      [[self.rows[i][j] for j in cols] for i in rows])

    def hstack(self, other: "Matrix") -> "Matrix":
        if self.nrows != other.nrows:
            raise ValueError("hstack row mismatch")
        return Matrix(self.field, self.nrows, self.ncols + other.ncols,
                      [ra + rb for ra, rb in zip(self.rows, other.rows)])

    def vstack(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.ncols:
            raise ValueError("vstack column mismatch")
        return Matrix(self.field, self.nrows + other.nrows, self.ncols, self.rows + other.rows)


def rref(m: Matrix):
    """Reduced row echelon form.

    Returns ``(reduced, pivots, rank)`` where ``pivots`` lists the pivot
    column of each nonzero row.
    """
    rows = [list(r) for r in m.rows]
    pivots = []
    r = 0
    nr, nc = m.nrows, m.ncols
    for c in range(nc):
        if r == nr:
            break
        piv = None
        for i in range(r, nr):
            if rows[i][c]:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = 1 / prow[c] if m.field.p == 0 else m.field.one / prow[c]
        if prow[c] != 1:
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, nc) if prow[j]]
        for i in range(nr):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    for j in nz:
                        ri[j] = ri[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return Matrix(m.field, nr, nc, rows), pivots, len(pivots)


def rank(m: Matrix) -> int:
    if m.nrows == 0 or m.ncols == 0:
        return 0
    return rref(m)[2]


def kernel_basis(m: Matrix) -> Matrix:
    """Columns of the result form a basis of ``{x : m x = 0}``."""
    F = m.field
    red, pivots, rk = rref(m)
    pivset = set(pivots)
    free = [j for j in range(m.ncols) if j not in pivset]
    cols = []
    for f in free:
        v = [F.zero] * m.ncols
        v[f] = F.one
        for i, pc in enumerate(pivots):
            v[pc] = -red.rows[i][f]
        cols.append(v)
    return Matrix.from_columns(F, cols, m.ncols)


def solve(a: Matrix, b: Sequence) -> Optional[list]:
    """One solution of ``a x = b`` or ``None`` when ``b`` is outside the column space."""
    if len(b) != a.nrows:
        raise ValueError("right-hand side has length %d, expected %d" % (len(b), a.nrows))
    F = a.field
    aug = Matrix(F, a.nrows, a.ncols + 1, [list(r) + [F(x) if not isinstance(x, (Fraction, ModP)) else x]
                                          for r, x in zip(a.rows, b)])
    red, pivots, _ = rref(aug)
    if pivots and pivots[-1] == a.ncols:
        return None
    x = [F.zero] * a.ncols
    for i, pc in enumerate(pivots):
        x[pc] = red.rows[i][a.ncols]
    return x


def solve_matrix(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve ``a X = b`` column by column in one elimination."""
    F = a.field
    aug = a.hstack(b)
    red, pivots, _ = rref(aug)
    if any(pc >= a.ncols for pc in pivots):
        return None
    x = Matrix(F, a.ncols, b.ncols)
    for i, pc in enumerate(pivots):
        x.rows[pc] = red.rows[i][a.ncols:]
    return x


def column_space_basis(m: Matrix) -> Matrix:
    """Pivot columns of ``m``: a basis of its column space made of original columns."""
    _, pivots, _ = rref(m)
    return m.submatrix(range(m.nrows), pivots)


def left_inverse(b: Matrix) -> Matrix:
    """A matrix ``L`` with ``L b = I`` for ``b`` of full column rank."""
    F = b.field
    n = b.nrows
    # rows of b forming an invertible square block
    _, rp, rk = rref(b.transpose())
    if rk < b.ncols:
        raise ValueError("matrix does not have full column rank")
    sq = b.submatrix(rp, range(b.ncols))
    inv = inverse(sq)
    L = Matrix(F, b.ncols, n)
    for jj, r in enumerate(rp):
        for i in range(b.ncols):
            L.rows[i][r] = inv.rows[i][jj]
    return L


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise ValueError("inverse of a non-square matrix")
    n = m.nrows
    red, pivots, rk = rref(m.hstack(Matrix.identity(m.field, n)))
    if rk < n or pivots[n - 1] != n - 1:
        raise ValueError("matrix is singular")
    return red.submatrix(range(n), range(n, 2 * n))


def in_span(basis_cols: Matrix, v: Sequence) -> bool:
    return solve(basis_cols, v) is not None


def stack_columns(field: Field, cols: Iterable[Sequence], nrows: int) -> Matrix:
    return Matrix.from_columns(field, list(cols), nrows)

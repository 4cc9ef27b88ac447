"""Exact linear algebra over the rationals.

Everything here works with :class:`fractions.Fraction` entries.  Matrices are
dense and immutable; the elimination engine underneath works on sparse rows
(``dict`` column -> value) because most systems we build are permutation-like
and very sparse.

Conventions: vectors are tuples of Fractions, matrices act on column vectors,
and a :class:`Subspace` always stores its basis in reduced row echelon form so
that two subspaces are equal exactly when their stored bases are equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

Vector = Tuple[Fraction, ...]
SparseRow = Dict[int, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)


def rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"a/b"`` strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


class QMatrix:
    """Immutable dense matrix with rational entries.

    ``0 x n`` and ``n x 0`` matrices are allowed and behave as zero maps.
    """

    __slots__ = ("rows", "cols", "_data", "_hash")

    def __init__(self, entries: Iterable[Iterable], rows: Optional[int] = None,
                 cols: Optional[int] = None):
        data = tuple(tuple(rational(x) for x in row) for row in entries)
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if len(data) != rows:
            raise ValueError(f"expected {rows} rows, got {len(data)}")
        for row in data:
            if len(row) != cols:
                raise ValueError(f"ragged matrix: expected {cols} columns")
        self.rows = rows
        self.cols = cols
        self._data = data
        self._hash = None

    @classmethod
    def _raw(cls, data: Tuple[Tuple[Fraction, ...], ...], rows: int, cols: int) -> "QMatrix":
        m = object.__new__(cls)
        m.rows, m.cols, m._data, m._hash = rows, cols, data, None
        return m

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, rows: int, cols: int) -> "QMatrix":
        return cls._raw(tuple((ZERO,) * cols for _ in range(rows)), rows, cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls._raw(tuple(tuple(ONE if i == j else ZERO for j in range(n))
                              for i in range(n)), n, n)

    @classmethod
    def scalar(cls, n: int, c) -> "QMatrix":
        c = rational(c)
        return cls._raw(tuple(tuple(c if i == j else ZERO for j in range(n))
                              for i in range(n)), n, n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "QMatrix":
        cols = [tuple(rational(x) for x in c) for c in columns]
        for c in cols:
            if len(c) != rows:
                raise ValueError("column has wrong length")
        return cls._raw(tuple(tuple(c[i] for c in cols) for i in range(rows)),
                        rows, len(cols))

    @classmethod
    def from_sparse(cls, rows: int, cols: int, entries: Dict[Tuple[int, int], Fraction]) -> "QMatrix":
        data = [[ZERO] * cols for _ in range(rows)]
        for (i, j), v in entries.items():
            data[i][j] = rational(v)
        return cls._raw(tuple(tuple(r) for r in data), rows, cols)

    @classmethod
    def permutation(cls, images: Sequence[int], signs: Optional[Sequence[int]] = None) -> "QMatrix":
        """Matrix sending basis vector ``j`` to ``signs[j] * e_{images[j]}``."""
        n = len(images)
        entries = {(images[j], j): Fraction(signs[j] if signs else 1) for j in range(n)}
        return cls.from_sparse(n, n, entries)

    # -- access -----------------------------------------------------------
    @property
    def shape(self) -> Tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, ij: Tuple[int, int]) -> Fraction:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> Vector:
        return self._data[i]

    def column(self, j: int) -> Vector:
        return tuple(r[j] for r in self._data)

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> List[List[Fraction]]:
        return [list(r) for r in self._data]

    def sparse_rows(self) -> List[SparseRow]:
        return [{j: v for j, v in enumerate(r) if v} for r in self._data]

    def nonzero(self):
        for i, r in enumerate(self._data):
            for j, v in enumerate(r):
                if v:
                    yield i, j, v

    def is_zero(self) -> bool:
        return all(not v for r in self._data for v in r)

    def is_identity(self) -> bool:
        return self.rows == self.cols and all(
            v == (ONE if i == j else ZERO)
            for i, r in enumerate(self._data) for j, v in enumerate(r))

    # -- arithmetic -------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, QMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.rows, self.cols, self._data))
        return self._hash

    def __repr__(self) -> str:
        body = "; ".join(" ".join(format_rational(x) for x in r) for r in self._data)
        return f"QMatrix({self.rows}x{self.cols}: [{body}])"

    def _check_same(self, other: "QMatrix") -> None:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix._raw(tuple(tuple(a + b for a, b in zip(r, s))
                                  for r, s in zip(self._data, other._data)),
                            self.rows, self.cols)

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        self._check_same(other)
        return QMatrix._raw(tuple(tuple(a - b for a, b in zip(r, s))
                                  for r, s in zip(self._data, other._data)),
                            self.rows, self.cols)

    def __neg__(self) -> "QMatrix":
        return QMatrix._raw(tuple(tuple(-a for a in r) for r in self._data),
                            self.rows, self.cols)

    def scale(self, c) -> "QMatrix":
        c = rational(c)
        return QMatrix._raw(tuple(tuple(c * a for a in r) for r in self._data),
                            self.rows, self.cols)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
            out = []
            odata = other._data
            n = other.cols
            for r in self._data:
                acc = [ZERO] * n
                for k, a in enumerate(r):
                    if a:
                        for j, b in enumerate(odata[k]):
                            if b:
                                acc[j] += a * b
                out.append(tuple(acc))
            return QMatrix._raw(tuple(out), self.rows, n)
        v = tuple(other)
        if len(v) != self.cols:
            raise ValueError("vector has wrong length")
        nz = [(j, x) for j, x in enumerate(v) if x]
        return tuple(sum((r[j] * x for j, x in nz if r[j]), ZERO) for r in self._data)

    @property
    def T(self) -> "QMatrix":
        data = self._data
        return QMatrix._raw(tuple(tuple(data[i][j] for i in range(self.rows))
                                  for j in range(self.cols)), self.cols, self.rows)

    # -- assembly ---------------------------------------------------------
    @staticmethod
    def block(blocks: Sequence[Sequence["QMatrix"]]) -> "QMatrix":
        """Assemble a block matrix; every block row/column must agree in size."""
        out = []
        for brow in blocks:
            h = brow[0].rows
            for b in brow:
                if b.rows != h:
                    raise ValueError("block row heights differ")
            for i in range(h):
                out.append(tuple(x for b in brow for x in b._data[i]))
        cols = sum(b.cols for b in blocks[0]) if blocks else 0
        return QMatrix._raw(tuple(out), len(out), cols)

    @staticmethod
    def direct_sum(*ms: "QMatrix") -> "QMatrix":
        rows = sum(m.rows for m in ms)
        cols = sum(m.cols for m in ms)
        entries = {}
        r0 = c0 = 0
        for m in ms:
            for i, j, v in m.nonzero():
                entries[(r0 + i, c0 + j)] = v
            r0 += m.rows
            c0 += m.cols
        return QMatrix.from_sparse(rows, cols, entries)

    @staticmethod
    def hstack(ms: Sequence["QMatrix"], rows: Optional[int] = None) -> "QMatrix":
        if not ms:
            return QMatrix.zero(rows or 0, 0)
        return QMatrix.block([list(ms)])

    @staticmethod
    def vstack(ms: Sequence["QMatrix"], cols: Optional[int] = None) -> "QMatrix":
        if not ms:
            return QMatrix.zero(0, cols or 0)
        cols = ms[0].cols
        for m in ms:
            if m.cols != cols:
                raise ValueError("vstack width mismatch")
        data = tuple(r for m in ms for r in m._data)
        return QMatrix._raw(data, len(data), cols)

    def kron(self, other: "QMatrix") -> "QMatrix":
        """Kronecker product; row index (i, k) -> i * other.rows + k."""
        entries = {}
        for i, j, a in self.nonzero():
            for k, l, b in other.nonzero():
                entries[(i * other.rows + k, j * other.cols + l)] = a * b
        return QMatrix.from_sparse(self.rows * other.rows, self.cols * other.cols, entries)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "QMatrix":
        return QMatrix._raw(tuple(tuple(self._data[i][j] for j in cols) for i in rows),
                            len(rows), len(cols))

    def rank(self) -> int:
        return len(rref(self)[1])

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def inverse(self) -> "QMatrix":
        if self.rows != self.cols:
            raise ValueError("only square matrices are invertible")
        n = self.rows
        rows = [dict(r) for r in self.sparse_rows()]
        for i in range(n):
            rows[i][n + i] = ONE
        pivots = _echelon(rows, 2 * n)
        if any(c >= n for c in pivots) or len(pivots) != n:
            raise ValueError("matrix is singular")
        return QMatrix.from_sparse(n, n, {(i, j - n): v for i, c in enumerate(sorted(pivots))
                                          for j, v in pivots[c].items() if j >= n})


# ---------------------------------------------------------------------------
# sparse elimination engine

def _reduce(row: SparseRow, pivots: Dict[int, SparseRow]) -> SparseRow:
    while True:
        hits = [j for j in row if j in pivots]
        if not hits:
            return row
        j = min(hits)
        f = row[j]
        for k, v in pivots[j].items():
            nv = row.get(k, ZERO) - f * v
            if nv:
                row[k] = nv
            else:
                row.pop(k, None)


def _echelon(rows: Iterable[SparseRow], ncols: int) -> Dict[int, SparseRow]:
    """Fully reduced echelon form; returns ``{pivot column: normalized row}``."""
    pivots: Dict[int, SparseRow] = {}
    for r in rows:
        r = {j: rational(v) for j, v in r.items() if v}
        r = _reduce(r, pivots)
        if not r:
            continue
        c = min(r)
        inv = ONE / r[c]
        pivots[c] = {j: v * inv for j, v in r.items()}
    for c in sorted(pivots, reverse=True):
        row = pivots[c]
        for j in sorted(k for k in row if k != c and k in pivots):
            f = row.get(j)
            if not f:
                continue
            for k, v in pivots[j].items():
                nv = row.get(k, ZERO) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
    return pivots


def sparse_kernel(rows: Iterable[SparseRow], ncols: int) -> Tuple[List[int], List[SparseRow]]:
    """Null space of a sparse system; returns free columns and one basis vector per free column.

    Basis vector ``b_f`` has a 1 at free column ``f``, 0 at every other free
    column, so kernel coordinates of any kernel element are read off at the
    free columns.
    """
    pivots = _echelon(rows, ncols)
    free = [j for j in range(ncols) if j not in pivots]
    basis = []
    for f in free:
        v = {f: ONE}
        for c, r in pivots.items():
            x = r.get(f)
            if x:
                v[c] = -x
        basis.append(v)
    return free, basis


def sparse_solve(rows: Sequence[SparseRow], rhs: Sequence, ncols: int) -> Optional[SparseRow]:
    """Some solution of ``rows . x = rhs`` with free variables 0, or None."""
    aug = []
    for r, b in zip(rows, rhs):
        r = dict(r)
        b = rational(b)
        if b:
            r[ncols] = b
        aug.append(r)
    pivots = _echelon(aug, ncols + 1)
    if ncols in pivots:
        return None
    return {c: r[ncols] for c, r in pivots.items() if r.get(ncols)}


def sparse_solve_many(rows: Sequence[SparseRow], rhs: Sequence[Sequence], ncols: int
                      ) -> Optional[List[SparseRow]]:
    """Solve ``rows . x = b`` for every column ``b`` of ``rhs`` with one elimination."""
    k = len(rhs)
    aug = []
    for i, r in enumerate(rows):
        r = dict(r)
        for t, b in enumerate(rhs):
            x = rational(b[i])
            if x:
                r[ncols + t] = x
        aug.append(r)
    pivots = _echelon(aug, ncols + k)
    if any(c >= ncols for c in pivots):
        return None
    out = []
    for t in range(k):
        col = ncols + t
        out.append({c: r[col] for c, r in pivots.items() if r.get(col)})
    return out


def _dense(v: SparseRow, n: int) -> Vector:
    out = [ZERO] * n
    for j, x in v.items():
        out[j] = x
    return tuple(out)


# ---------------------------------------------------------------------------
# public dense API

def rref(m: QMatrix) -> Tuple[QMatrix, List[int]]:
    """Reduced row echelon form and pivot columns."""
    pivots = _echelon(m.sparse_rows(), m.cols)
    cols = sorted(pivots)
    rows = [_dense(pivots[c], m.cols) for c in cols]
    rows += [(ZERO,) * m.cols] * (m.rows - len(rows))
    return QMatrix._raw(tuple(rows), m.rows, m.cols), cols


class Subspace:
    """Subspace of Q^n stored by its canonical (reduced echelon) basis."""

    __slots__ = ("ambient_dim", "basis", "pivots")

    def __init__(self, ambient_dim: int, vectors: Iterable[Sequence] = ()):
        pivots = _echelon(({j: rational(x) for j, x in enumerate(v) if x} for v in vectors),
                          ambient_dim)
        self.ambient_dim = ambient_dim
        self.pivots = tuple(sorted(pivots))
        self.basis = tuple(_dense(pivots[c], ambient_dim) for c in self.pivots)

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, QMatrix.identity(n).tolist())

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n)

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Subspace) and self.ambient_dim == other.ambient_dim
                and self.basis == other.basis)

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.basis))

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} in Q^{self.ambient_dim})"

    def coordinates(self, v: Sequence) -> Optional[Vector]:
        """Coordinates of ``v`` in the canonical basis, or None if ``v`` is outside."""
        v = tuple(rational(x) for x in v)
        coords = tuple(v[p] for p in self.pivots)
        rest = list(v)
        for c, b in zip(coords, self.basis):
            if c:
                for j, x in enumerate(b):
                    if x:
                        rest[j] -= c * x
        return coords if not any(rest) else None

    def __contains__(self, v) -> bool:
        return self.coordinates(v) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(b in self for b in other.basis)

    def matrix(self) -> QMatrix:
        """Basis vectors as the columns of an ``ambient x dim`` matrix."""
        return QMatrix.from_columns(self.basis, self.ambient_dim)

    def __add__(self, other: "Subspace") -> "Subspace":
        return Subspace(self.ambient_dim, self.basis + other.basis)


def kernel(m: QMatrix) -> Subspace:
    _, basis = sparse_kernel(m.sparse_rows(), m.cols)
    return Subspace(m.cols, [_dense(b, m.cols) for b in basis])


def image(m: QMatrix) -> Subspace:
    return Subspace(m.rows, m.columns())


def solve(m: QMatrix, b: Sequence) -> Optional[Vector]:
    """Some ``x`` with ``m x = b`` (free variables set to 0), or None."""
    b = tuple(rational(x) for x in b)
    if len(b) != m.rows:
        raise ValueError("right-hand side has wrong length")
    x = sparse_solve(m.sparse_rows(), b, m.cols)
    return None if x is None else _dense(x, m.cols)


def solve_many(m: QMatrix, b: QMatrix) -> Optional[QMatrix]:
    """``X`` with ``m X = b`` (free variables 0), or None if some column is unsolvable."""
    if b.rows != m.rows:
        raise ValueError("right-hand side has wrong height")
    if not b.cols:
        return QMatrix.zero(m.cols, 0)
    xs = sparse_solve_many(m.sparse_rows(), b.columns(), m.cols)
    if xs is None:
        return None
    return QMatrix.from_columns([_dense(x, m.cols) for x in xs], m.cols)


class Quotient:
    """``Q^n / sub`` with a projection whose kernel is ``sub`` and a section of it."""

    __slots__ = ("dim", "projection", "lift")

    def __init__(self, dim: int, projection: QMatrix, lift: QMatrix):
        self.dim = dim
        self.projection = projection
        self.lift = lift

    def __iter__(self):
        return iter((self.dim, self.projection))


def quotient(ambient_dim: int, sub: Subspace) -> Quotient:
    if sub.ambient_dim != ambient_dim:
        raise ValueError("subspace lives in a different ambient space")
    pivots = set(sub.pivots)
    rest = [j for j in range(ambient_dim) if j not in pivots]
    pos = {j: t for t, j in enumerate(rest)}
    entries = {}
    for j in rest:
        entries[(pos[j], j)] = ONE
    for p, b in zip(sub.pivots, sub.basis):
        for j in rest:
            if b[j]:
                entries[(pos[j], p)] = -b[j]
    proj = QMatrix.from_sparse(len(rest), ambient_dim, entries)
    lift = QMatrix.from_sparse(ambient_dim, len(rest), {(j, pos[j]): ONE for j in rest})
    return Quotient(len(rest), proj, lift)


# ---------------------------------------------------------------------------
# linear systems whose unknowns are matrices

class MatrixSystem:
    """Linear equations in matrix-valued unknowns.

    Unknown blocks are declared with :meth:`unknown`; equations are sums of
    terms ``L @ X @ R`` (``L``/``R`` may be None for identity) equated to a
    constant matrix.  Variables are the row-major entries of every block.
    """

    def __init__(self):
        self.blocks: Dict[object, Tuple[int, int, int]] = {}
        self.nvars = 0
        self.rows: List[SparseRow] = []
        self.rhs: List[Fraction] = []

    def unknown(self, name, rows: int, cols: int) -> None:
        if name in self.blocks:
            raise KeyError(f"unknown {name!r} declared twice")
        self.blocks[name] = (rows, cols, self.nvars)
        self.nvars += rows * cols

    def equation(self, terms: Sequence[Tuple[Optional[QMatrix], object, Optional[QMatrix], int]],
                 shape: Tuple[int, int], rhs: Optional[QMatrix] = None) -> None:
        """Add ``sum(sign * L @ X @ R) == rhs`` entrywise; ``rhs`` defaults to zero."""
        r, c = shape
        eqs: Dict[Tuple[int, int], SparseRow] = {}
        for left, name, right, sign in terms:
            br, bc, off = self.blocks[name]
            if br == 0 or bc == 0:
                continue
            lnz = ([(i, i, ONE) for i in range(br)] if left is None
                   else list(left.nonzero()))
            rnz = ([(j, j, ONE) for j in range(bc)] if right is None
                   else list(right.nonzero()))
            for i, p, a in lnz:
                for q, j, b in rnz:
                    row = eqs.setdefault((i, j), {})
                    var = off + p * bc + q
                    val = row.get(var, ZERO) + sign * a * b
                    if val:
                        row[var] = val
                    else:
                        row.pop(var, None)
        for i in range(r):
            for j in range(c):
                row = eqs.get((i, j), {})
                b = rhs[i, j] if rhs is not None else ZERO
                if row or b:
                    self.rows.append(row)
                    self.rhs.append(b)

    def fix(self, name, value: QMatrix) -> None:
        """Constrain an unknown block to equal ``value``."""
        br, bc, _ = self.blocks[name]
        self.equation([(None, name, None, 1)], (br, bc), value)

    def unpack(self, x: SparseRow) -> Dict[object, QMatrix]:
        out = {}
        for name, (br, bc, off) in self.blocks.items():
            out[name] = QMatrix.from_sparse(
                br, bc, {(k // bc, k % bc): x[off + k] for k in range(br * bc) if x.get(off + k)})
        return out

    def solve(self) -> Optional[Dict[object, QMatrix]]:
        if any(b for row, b in zip(self.rows, self.rhs) if not row):
            return None
        x = sparse_solve(self.rows, self.rhs, self.nvars)
        return None if x is None else self.unpack(x)

    def kernel(self) -> List[Dict[object, QMatrix]]:
        """Basis of solutions of the homogeneous system."""
        _, basis = sparse_kernel(self.rows, self.nvars)
        return [self.unpack(b) for b in basis]

    def kernel_sparse(self) -> Tuple[List[int], List[SparseRow]]:
        return sparse_kernel(self.rows, self.nvars)

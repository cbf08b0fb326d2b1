"""Exact linear algebra over the rationals or a prime field.

Row reduction is delegated to :class:`sympy.polys.matrices.DomainMatrix`;
everything else (kernels, cokernels with sections, preimages, tensor
products) is built on top of ``rref`` here.  Matrices are immutable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from sympy import GF, QQ
from sympy.polys.matrices import DomainMatrix


class FieldMismatchError(ValueError):
    """Operands live over different fields."""


class DimensionError(ValueError):
    """Operand shapes are incompatible."""


class Field:
    """An exact field: ``Field(0)`` is Q, ``Field(p)`` is F_p."""

    __slots__ = ("characteristic", "domain", "zero", "one")

    def __init__(self, characteristic: int = 0):
        if characteristic < 0:
            raise ValueError("characteristic must be 0 or a prime")
        if characteristic == 0:
            domain = QQ
        else:
            if characteristic >= 2**31 or not _is_prime(characteristic):
                raise ValueError(f"{characteristic} is not a prime below 2**31")
            domain = GF(characteristic)
        self.characteristic = characteristic
        self.domain = domain
        self.zero = domain.zero
        self.one = domain.one

    def __call__(self, value):
        """Convert an int, Fraction, ``"p/q"`` string or field element."""
        if isinstance(value, str):
            value = Fraction(value)
        if isinstance(value, Fraction):
            num = self.domain.convert(value.numerator)
            den = self.domain.convert(value.denominator)
            if den == self.zero:
                raise ZeroDivisionError(f"{value} has no image in F_{self.characteristic}")
            return num / den
        return self.domain.convert(value)

    def to_json(self, value):
        """Canonical JSON form: an int, or a ``"p/q"`` string over Q."""
        if self.characteristic:
            return int(value) % self.characteristic
        num, den = int(value.numerator), int(value.denominator)
        return num if den == 1 else f"{num}/{den}"

    def __eq__(self, other):
        return isinstance(other, Field) and other.characteristic == self.characteristic

    def __hash__(self):
        return hash(("Field", self.characteristic))

    def __repr__(self):
        return "QQ" if self.characteristic == 0 else f"GF({self.characteristic})"


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


@lru_cache(maxsize=None)
def field(characteristic: int = 0) -> Field:
    return Field(characteristic)


QQ_FIELD = field(0)


class Matrix:
    """Dense matrix over a :class:`Field`."""

    __slots__ = ("_dm", "field")

    def __init__(self, dm: DomainMatrix, fld: Field):
        self._dm = dm
        self.field = fld

    # construction

    @classmethod
    def zeros(cls, fld: Field, rows: int, cols: int) -> "Matrix":
        return cls(DomainMatrix.zeros((rows, cols), fld.domain), fld)

    @classmethod
    def identity(cls, fld: Field, n: int) -> "Matrix":
        return cls(DomainMatrix.eye(n, fld.domain), fld)

    @classmethod
    def from_rows(cls, fld: Field, rows: Sequence[Sequence], cols: int | None = None) -> "Matrix":
        rows = [[fld(x) for x in row] for row in rows]
        if cols is None:
            if not rows:
                raise DimensionError("column count needed for a matrix with no rows")
            cols = len(rows[0])
        if any(len(r) != cols for r in rows):
            raise DimensionError("ragged rows")
        return cls(DomainMatrix(rows, (len(rows), cols), fld.domain).to_sparse(), fld)

    @classmethod
    def column(cls, fld: Field, values: Sequence) -> "Matrix":
        return cls.from_rows(fld, [[v] for v in values], 1)

    @classmethod
    def unit(cls, fld: Field, n: int, i: int) -> "Matrix":
        return cls.from_rows(fld, [[1 if k == i else 0] for k in range(n)], 1)

    @classmethod
    def hstack(cls, fld: Field, rows: int, blocks: Sequence["Matrix"]) -> "Matrix":
        blocks = [b for b in blocks if b.cols]
        for b in blocks:
            _same(fld, b)
            if b.rows != rows:
                raise DimensionError("hstack row mismatch")
        if not blocks:
            return cls.zeros(fld, rows, 0)
        if len(blocks) == 1:
            return blocks[0]
        return cls(blocks[0]._dm.hstack(*[b._dm for b in blocks[1:]]), fld)

    @classmethod
    def vstack(cls, fld: Field, cols: int, blocks: Sequence["Matrix"]) -> "Matrix":
        blocks = [b for b in blocks if b.rows]
        for b in blocks:
            _same(fld, b)
            if b.cols != cols:
                raise DimensionError("vstack column mismatch")
        if not blocks:
            return cls.zeros(fld, 0, cols)
        if len(blocks) == 1:
            return blocks[0]
        return cls(blocks[0]._dm.vstack(*[b._dm for b in blocks[1:]]), fld)

    @classmethod
    def from_blocks(cls, fld: Field, row_dims: Sequence[int], col_dims: Sequence[int],
                    blocks: dict) -> "Matrix":
        """Assemble from a sparse dict ``(r, c) -> Matrix`` of blocks."""
        roff = _offsets(row_dims)
        coff = _offsets(col_dims)
        entries = {}
        for (r, c), b in blocks.items():
            _same(fld, b)
            if b.shape != (row_dims[r], col_dims[c]):
                raise DimensionError("block shape mismatch")
            for i, row in b._dm.to_sdm().items():
                target = entries.setdefault(roff[r] + i, {})
                for j, v in row.items():
                    target[coff[c] + j] = target.get(coff[c] + j, fld.zero) + v
        return cls._from_sdm(fld, entries, sum(row_dims), sum(col_dims))

    @classmethod
    def _from_sdm(cls, fld: Field, entries: dict, rows: int, cols: int) -> "Matrix":
        clean = {}
        for i, row in entries.items():
            r = {j: v for j, v in row.items() if v}
            if r:
                clean[i] = r
        return cls(DomainMatrix(clean, (rows, cols), fld.domain), fld)

    # access

    @property
    def rows(self) -> int:
        return self._dm.shape[0]

    @property
    def cols(self) -> int:
        return self._dm.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self._dm.shape

    def __getitem__(self, key):
        i, j = key
        return self._dm.to_sdm().get(i, {}).get(j, self.field.zero)

    def to_rows(self) -> list[list]:
        return self._dm.to_list()

    def nonzero_items(self):
        """Yield ``(i, j, value)`` for nonzero entries."""
        for i, row in self._dm.to_sdm().items():
            for j, v in row.items():
                yield i, j, v

    def vector(self) -> list:
        if self.cols != 1:
            raise DimensionError("not a column vector")
        return [r[0] for r in self.to_rows()]

    def col(self, j: int) -> "Matrix":
        return self.submatrix(range(self.rows), [j])

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "Matrix":
        rows, cols = list(rows), list(cols)
        return Matrix(self._dm.extract(rows, cols), self.field)

    def row_slice(self, start: int, stop: int) -> "Matrix":
        return self.submatrix(range(start, stop), range(self.cols))

    def col_slice(self, start: int, stop: int) -> "Matrix":
        return self.submatrix(range(self.rows), range(start, stop))

    @property
    def T(self) -> "Matrix":
        return Matrix(self._dm.transpose(), self.field)

    def is_zero(self) -> bool:
        return self._dm.is_zero_matrix

    # arithmetic

    def __matmul__(self, other: "Matrix") -> "Matrix":
        _same(self.field, other)
        if self.cols != other.rows:
            raise DimensionError(f"cannot multiply {self.shape} by {other.shape}")
        if self.cols == 0:
            return Matrix.zeros(self.field, self.rows, other.cols)
        return Matrix(self._dm.matmul(other._dm), self.field)

    def __add__(self, other: "Matrix") -> "Matrix":
        _same(self.field, other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in addition")
        return Matrix(self._dm + other._dm, self.field)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same(self.field, other)
        if self.shape != other.shape:
            raise DimensionError("shape mismatch in subtraction")
        return Matrix(self._dm - other._dm, self.field)

    def __neg__(self) -> "Matrix":
        return Matrix(-self._dm, self.field)

    def scale(self, s) -> "Matrix":
        return Matrix(self._dm * self.field(s), self.field)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return (self.field == other.field and self.shape == other.shape
                and (self._dm - other._dm).is_zero_matrix)

    def __hash__(self):
        return hash((self.shape, tuple(map(tuple, self.to_rows()))))

    def __repr__(self):
        return f"Matrix({self.field!r}, {self.to_rows()})"

    def to_json(self) -> list[list]:
        return [[self.field.to_json(x) for x in row] for row in self.to_rows()]


def _same(fld: Field, m: Matrix) -> None:
    if m.field != fld:
        raise FieldMismatchError(f"{m.field!r} vs {fld!r}")


def _offsets(dims: Sequence[int]) -> list[int]:
    out, acc = [], 0
    for d in dims:
        out.append(acc)
        acc += d
    return out


def block_diag(fld: Field, blocks: Sequence[Matrix]) -> Matrix:
    return Matrix.from_blocks(fld, [b.rows for b in blocks], [b.cols for b in blocks],
                              {(k, k): b for k, b in enumerate(blocks)})


@dataclass(frozen=True)
class Subspace:
    """Span of the columns of ``basis`` (linearly independent) in K^ambient."""

    basis: Matrix

    @property
    def ambient(self) -> int:
        return self.basis.rows

    @property
    def dim(self) -> int:
        return self.basis.cols

    @property
    def field(self) -> Field:
        return self.basis.field

    @classmethod
    def zero(cls, fld: Field, ambient: int) -> "Subspace":
        return cls(Matrix.zeros(fld, ambient, 0))

    @classmethod
    def full(cls, fld: Field, ambient: int) -> "Subspace":
        return cls(Matrix.identity(fld, ambient))

    def contains(self, v: Matrix) -> bool:
        return rank(Matrix.hstack(self.field, self.ambient, [self.basis, v])) == self.dim

    def contains_subspace(self, other: "Subspace") -> bool:
        if other.ambient != self.ambient:
            raise DimensionError("ambient mismatch")
        return self.contains(other.basis)

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.ambient == other.ambient and self.dim == other.dim
                and self.contains_subspace(other))

    def __hash__(self):
        return hash((self.ambient, self.dim))

    def coordinates(self, v: Matrix) -> Matrix:
        """Coordinates of ``v`` (assumed inside) with respect to the basis."""
        sol = solve(self.basis, v)
        if sol is None:
            raise ValueError("vector not in subspace")
        return sol.particular


def rref(m: Matrix) -> tuple[Matrix, tuple[int, ...]]:
    if m.rows == 0 or m.cols == 0:
        return m, ()
    r, piv = m._dm.rref()
    return Matrix(r, m.field), tuple(piv)


def rank(m: Matrix) -> int:
    return len(rref(m)[1])


def kernel_basis(m: Matrix) -> Subspace:
    """Basis of ``{v : m v = 0}``, one vector per free column of rref(m)."""
    fld = m.field
    r, piv = rref(m)
    pivset = set(piv)
    free = [j for j in range(m.cols) if j not in pivset]
    entries = {}
    sdm = r._dm.to_sdm() if r.rows and r.cols else {}
    for k, j in enumerate(free):
        entries.setdefault(j, {})[k] = fld.one
        for i, p in enumerate(piv):
            v = sdm.get(i, {}).get(j)
            if v:
                entries.setdefault(p, {})[k] = -v
    return Subspace(Matrix._from_sdm(fld, entries, m.cols, len(free)))


def image_basis(m: Matrix) -> Subspace:
    """Basis of the column space, taken from the pivot columns of ``m``."""
    _, piv = rref(m)
    return Subspace(m.submatrix(range(m.rows), piv))


def cokernel_section(m: Matrix) -> tuple[Matrix, Matrix]:
    """Projection ``P`` onto K^rows / Im(m) and a section ``S`` with ``P S = 1``.

    The section picks standard basis vectors outside the pivot rows of the
    column space, so quotient basis vectors are represented by ambient
    basis vectors.
    """
    fld = m.field
    r, piv = rref(m.T)
    pivset = set(piv)
    rest = [j for j in range(m.rows) if j not in pivset]
    sdm = r._dm.to_sdm() if r.rows and r.cols else {}
    entries = {}
    for k, j in enumerate(rest):
        entries.setdefault(k, {})[j] = fld.one
        for i, p in enumerate(piv):
            v = sdm.get(i, {}).get(j)
            if v:
                entries[k][p] = -v
    proj = Matrix._from_sdm(fld, entries, len(rest), m.rows)
    sec = Matrix._from_sdm(fld, {j: {k: fld.one} for k, j in enumerate(rest)},
                           m.rows, len(rest))
    return proj, sec


def cokernel(m: Matrix) -> tuple[int, Matrix]:
    proj, _ = cokernel_section(m)
    return proj.rows, proj


@dataclass(frozen=True)
class Solution:
    particular: Matrix
    kernel: Subspace


def solve(m: Matrix, b: Matrix) -> Solution | None:
    """Solve ``m x = b`` for a column ``b``; ``None`` when inconsistent."""
    _same(m.field, b)
    if b.rows != m.rows or b.cols != 1:
        raise DimensionError(f"right-hand side of shape {b.shape} for matrix {m.shape}")
    fld = m.field
    ker = kernel_basis(m)
    aug = Matrix.hstack(fld, m.rows, [m, b])
    r, piv = rref(aug)
    if piv and piv[-1] == m.cols:
        return None
    x = {}
    for i, p in enumerate(piv):
        v = r[i, m.cols]
        if v:
            x[p] = {0: v}
    return Solution(Matrix._from_sdm(fld, x, m.cols, 1), ker)


def solve_matrix(m: Matrix, b: Matrix) -> Matrix | None:
    """Some ``X`` with ``m X = b`` (column by column), or ``None``."""
    cols = []
    for j in range(b.cols):
        s = solve(m, b.col(j))
        if s is None:
            return None
        cols.append(s.particular)
    return Matrix.hstack(m.field, m.cols, cols)


def left_inverse(m: Matrix) -> Matrix:
    """``L`` with ``L m = 1`` for ``m`` of full column rank."""
    _, piv = rref(m.T)
    if len(piv) != m.cols:
        raise ValueError("matrix does not have full column rank")
    sq = m.submatrix(piv, range(m.cols))
    inv = Matrix(sq._dm.inv(), m.field) if m.cols else sq
    sel = Matrix._from_sdm(m.field, {k: {p: m.field.one} for k, p in enumerate(piv)},
                           m.cols, m.rows)
    return inv @ sel


def inverse(m: Matrix) -> Matrix:
    if m.rows != m.cols:
        raise DimensionError("inverse of a non-square matrix")
    if m.rows == 0:
        return m
    return Matrix(m._dm.inv(), m.field)


def sum_subspaces(a: Subspace, b: Subspace) -> Subspace:
    return image_basis(Matrix.hstack(a.field, a.ambient, [a.basis, b.basis]))


def intersect_subspaces(a: Subspace, b: Subspace) -> Subspace:
    if a.ambient != b.ambient:
        raise DimensionError("ambient mismatch")
    fld = a.field
    joint = Matrix.hstack(fld, a.ambient, [a.basis, -b.basis])
    ker = kernel_basis(joint)
    return image_basis(a.basis @ ker.basis.row_slice(0, a.dim))


def preimage_of_subspace(m: Matrix, s: Subspace) -> Subspace:
    """``{v : m v ∈ s}``."""
    if s.ambient != m.rows:
        raise DimensionError("subspace lives in the wrong ambient space")
    fld = m.field
    if s.dim == 0:
        return kernel_basis(m)
    ker = kernel_basis(Matrix.hstack(fld, m.rows, [m, -s.basis]))
    return image_basis(ker.basis.row_slice(0, m.cols))


def kronecker_tensor(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; row/column index ``i*dim_b + k``, first factor major."""
    _same(a.field, b)
    fld = a.field
    entries: dict = {}
    bitems = list(b.nonzero_items())
    for i, j, u in a.nonzero_items():
        for k, l, v in bitems:
            entries.setdefault(i * b.rows + k, {})[j * b.cols + l] = u * v
    return Matrix._from_sdm(fld, entries, a.rows * b.rows, a.cols * b.cols)

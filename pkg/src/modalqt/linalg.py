"""Dense exact linear algebra over GF(p).

Vectors and matrices are immutable and store canonical ``int`` residues
together with their :class:`~modalqt.gf.FieldSpec`. Every routine here is a
pure function of its arguments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, FieldMismatchError, PreconditionError
from .gf import FieldSpec


@dataclass(frozen=True)
class Vector:
    field: FieldSpec
    entries: tuple[int, ...]

    def __post_init__(self):
        p = self.field.p
        object.__setattr__(self, "entries", tuple(int(x) % p for x in self.entries))
        if not self.entries:
            raise DimensionError("vectors need at least one entry")

    @classmethod
    def zeros(cls, f: FieldSpec, n: int) -> "Vector":
        return cls(f, (0,) * n)

    @classmethod
    def unit(cls, f: FieldSpec, n: int, i: int) -> "Vector":
        return cls(f, tuple(int(j == i) for j in range(n)))

    @property
    def dim(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def is_zero(self) -> bool:
        return not any(self.entries)

    def __add__(self, other: "Vector") -> "Vector":
        _check_same(self, other)
        if self.dim != other.dim:
            raise DimensionError("vector lengths differ")
        return Vector(self.field, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Vector") -> "Vector":
        _check_same(self, other)
        if self.dim != other.dim:
            raise DimensionError("vector lengths differ")
        return Vector(self.field, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def scale(self, c: int) -> "Vector":
        return Vector(self.field, tuple(int(c) * a for a in self.entries))

    def to_json(self) -> list[int]:
        return list(self.entries)


@dataclass(frozen=True)
class Matrix:
    """Row-major matrix. ``ncols`` is kept explicitly so 0-row matrices have a shape."""

    field: FieldSpec
    rows: tuple[tuple[int, ...], ...]
    ncols: int

    def __post_init__(self):
        p = self.field.p
        rows = tuple(tuple(int(x) % p for x in r) for r in self.rows)
        if any(len(r) != self.ncols for r in rows):
            raise DimensionError("ragged matrix rows")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, f: FieldSpec, rows: Sequence[Sequence[int]], ncols: int | None = None) -> "Matrix":
        rows = [tuple(r) for r in rows]
        if ncols is None:
            if not rows:
                raise DimensionError("cannot infer the width of an empty matrix")
            ncols = len(rows[0])
        return cls(f, tuple(rows), ncols)

    @classmethod
    def from_vectors(cls, vectors: Sequence[Vector], f: FieldSpec | None = None, ncols: int | None = None) -> "Matrix":
        """Stack vectors as rows."""
        if vectors:
            f = vectors[0].field
            for v in vectors:
                _check_same(vectors[0], v)
        if f is None:
            raise DimensionError("field required for an empty stack")
        return cls.from_rows(f, [v.entries for v in vectors], ncols)

    @classmethod
    def identity(cls, f: FieldSpec, n: int) -> "Matrix":
        return cls(f, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)), n)

    @classmethod
    def zeros(cls, f: FieldSpec, m: int, n: int) -> "Matrix":
        return cls(f, ((0,) * n,) * m, n)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    def row(self, i: int) -> Vector:
        return Vector(self.field, self.rows[i])

    def col(self, j: int) -> Vector:
        return Vector(self.field, tuple(r[j] for r in self.rows))

    @property
    def T(self) -> "Matrix":
        if not self.rows:
            return Matrix(self.field, ((),) * self.ncols, 0)
        return Matrix(self.field, tuple(zip(*self.rows)), self.nrows)

    def __matmul__(self, other):
        if isinstance(other, Vector):
            return matvec(self, other)
        return matmul(self, other)

    def is_zero(self) -> bool:
        return not any(any(r) for r in self.rows)

    def to_json(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def _check_same(a, b) -> None:
    if a.field != b.field:
        raise FieldMismatchError(f"GF({a.field.p}) vs GF({b.field.p})")


def matvec(m: Matrix, v: Vector) -> Vector:
    _check_same(m, v)
    if m.ncols != v.dim:
        raise DimensionError(f"{m.shape} matrix cannot act on a length-{v.dim} vector")
    p = m.field.p
    return Vector(m.field, tuple(sum(a * b for a, b in zip(r, v.entries)) % p for r in m.rows))


def matmul(a: Matrix, b: Matrix) -> Matrix:
    _check_same(a, b)
    if a.ncols != b.nrows:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    p = a.field.p
    bcols = list(zip(*b.rows)) if b.rows else [()] * b.ncols
    rows = tuple(tuple(sum(x * y for x, y in zip(r, c)) % p for c in bcols) for r in a.rows)
    return Matrix(a.field, rows, b.ncols)


# -- elimination ---------------------------------------------------------


def _rref_rows(rows: list[list[int]], ncols: int, p: int, inv, pivot_limit: int | None = None):
    """In-place Gauss-Jordan; returns ``(rows, pivot_columns)``.

    Only columns below ``pivot_limit`` are eligible as pivots.
    """
    limit = ncols if pivot_limit is None else pivot_limit
    pivots: list[int] = []
    r = 0
    nrows = len(rows)
    for c in range(limit):
        if r == nrows:
            break
        sel = next((i for i in range(r, nrows) if rows[i][c]), None)
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        pr = rows[r]
        if pr[c] != 1:
            s = inv(pr[c])
            pr = [(x * s) % p for x in pr]
            rows[r] = pr
        for i in range(nrows):
            if i != r:
                f = rows[i][c]
                if f:
                    ri = rows[i]
                    rows[i] = [(x - f * y) % p for x, y in zip(ri, pr)]
        pivots.append(c)
        r += 1
    return rows, pivots


def rref(m: Matrix) -> tuple[Matrix, int]:
    """Reduced row-echelon form and rank. Zero rows are kept at the bottom."""
    rows, piv = _rref_rows([list(r) for r in m.rows], m.ncols, m.field.p, m.field.inv)
    return Matrix(m.field, tuple(tuple(r) for r in rows), m.ncols), len(piv)


def rank(m: Matrix) -> int:
    return rref(m)[1]


def rank_of_vectors(vectors: Sequence[Vector]) -> int:
    if not vectors:
        return 0
    f = vectors[0].field
    n = vectors[0].dim
    for v in vectors:
        _check_same(vectors[0], v)
        if v.dim != n:
            raise DimensionError("vectors of different lengths")
    _, piv = _rref_rows([list(v.entries) for v in vectors], n, f.p, f.inv)
    return len(piv)


def determinant(m: Matrix) -> int:
    """Determinant as a residue, by elimination."""
    if m.nrows != m.ncols:
        raise DimensionError("determinant of a non-square matrix")
    p = m.field.p
    rows = [list(r) for r in m.rows]
    n = m.nrows
    det = 1
    for c in range(n):
        sel = next((i for i in range(c, n) if rows[i][c]), None)
        if sel is None:
            return 0
        if sel != c:
            rows[c], rows[sel] = rows[sel], rows[c]
            det = -det
        pv = rows[c][c]
        det = det * pv % p
        s = m.field.inv(pv)
        for i in range(c + 1, n):
            f = rows[i][c] * s % p
            if f:
                rows[i] = [(x - f * y) % p for x, y in zip(rows[i], rows[c])]
    return det % p


def is_invertible(m: Matrix) -> bool:
    return m.nrows == m.ncols and rank(m) == m.nrows


def inverse(m: Matrix) -> Matrix:
    if m.nrows != m.ncols:
        raise DimensionError("only square matrices are invertible")
    n = m.nrows
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(m.rows)]
    rows, piv = _rref_rows(aug, 2 * n, m.field.p, m.field.inv, pivot_limit=n)
    if len(piv) != n:
        raise PreconditionError("matrix is singular")
    return Matrix(m.field, tuple(tuple(r[n:]) for r in rows), n)


# -- subspaces -----------------------------------------------------------


@dataclass(frozen=True)
class Subspace:
    """A subspace of GF(p)^ambient held as its RREF basis.

    Two subspaces compare equal exactly when their RREF bases are identical,
    which is the same as being the same set of vectors.
    """

    field: FieldSpec
    ambient: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def span(cls, f: FieldSpec, ambient: int, vectors: Iterable[Vector | Sequence[int]]) -> "Subspace":
        rows = []
        for v in vectors:
            if isinstance(v, Vector):
                if v.field != f:
                    raise FieldMismatchError(f"GF({v.field.p}) vector in a GF({f.p}) space")
                entries = v.entries
            else:
                entries = tuple(v)
            if len(entries) != ambient:
                raise DimensionError(f"vector of length {len(entries)} in a {ambient}-dim space")
            rows.append([int(x) % f.p for x in entries])
        reduced, piv = _rref_rows(rows, ambient, f.p, f.inv)
        return cls(f, ambient, tuple(tuple(r) for r in reduced[: len(piv)]))

    @classmethod
    def full(cls, f: FieldSpec, n: int) -> "Subspace":
        return cls(f, n, Matrix.identity(f, n).rows)

    @classmethod
    def zero(cls, f: FieldSpec, n: int) -> "Subspace":
        return cls(f, n, ())

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def is_full(self) -> bool:
        return self.dim == self.ambient

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis)

    def basis_vectors(self) -> list[Vector]:
        return [Vector(self.field, r) for r in self.basis]

    def matrix(self) -> Matrix:
        return Matrix(self.field, self.basis, self.ambient)

    def residual(self, v: Vector) -> Vector:
        """Reduce ``v`` against the RREF basis.

        The result is zero iff ``v`` lies in the subspace; otherwise it is the
        canonical representative of ``v`` modulo the subspace.
        """
        if v.dim != self.ambient:
            raise DimensionError("vector does not live in the ambient space")
        p = self.field.p
        w = list(v.entries)
        for r, c in zip(self.basis, self.pivots):
            f = w[c]
            if f:
                w = [(x - f * y) % p for x, y in zip(w, r)]
        return Vector(self.field, tuple(w))

    def contains(self, v: Vector) -> bool:
        return self.residual(v).is_zero()

    def __contains__(self, v: Vector) -> bool:
        return self.contains(v)

    def is_subspace_of(self, other: "Subspace") -> bool:
        return all(other.contains(b) for b in self.basis_vectors())

    def annihilator(self) -> Matrix:
        """Rows spanning the linear functionals that vanish on this subspace."""
        if not self.basis:
            return Matrix.identity(self.field, self.ambient)
        k = kernel(self.matrix())
        return Matrix(self.field, k.basis, self.ambient)

    def to_json(self) -> dict:
        return {"ambient": self.ambient, "basis": [list(r) for r in self.basis]}

    @classmethod
    def from_json(cls, f: FieldSpec, data: dict) -> "Subspace":
        return cls.span(f, int(data["ambient"]), data["basis"])


def kernel(m: Matrix) -> Subspace:
    """Null space ``{x : m x = 0}``."""
    f = m.field
    rows, piv = _rref_rows([list(r) for r in m.rows], m.ncols, f.p, f.inv)
    free = [c for c in range(m.ncols) if c not in set(piv)]
    vecs = []
    for fc in free:
        x = [0] * m.ncols
        x[fc] = 1
        for i, pc in enumerate(piv):
            x[pc] = (-rows[i][fc]) % f.p
        vecs.append(x)
    return Subspace.span(f, m.ncols, vecs)


@dataclass(frozen=True)
class AffineSolutionSet:
    """Solutions of ``m x = y``: ``particular + kernel``, or infeasible.

    When infeasible, ``certificate`` is a row ``[0 ... 0 | c]`` (``c != 0``)
    of the augmented RREF.
    """

    particular: Vector | None
    kernel: Subspace
    certificate: tuple[int, ...] | None = None

    @property
    def feasible(self) -> bool:
        return self.particular is not None

    def __contains__(self, x: Vector) -> bool:
        return self.feasible and self.kernel.contains(x - self.particular)


def solve(m: Matrix, y: Vector) -> AffineSolutionSet:
    _check_same(m, y)
    if y.dim != m.nrows:
        raise DimensionError(f"right-hand side has length {y.dim}, expected {m.nrows}")
    f = m.field
    n = m.ncols
    aug = [list(r) + [b] for r, b in zip(m.rows, y.entries)]
    rows, piv = _rref_rows(aug, n + 1, f.p, f.inv, pivot_limit=n)
    ker = kernel(m)
    for r in rows[len(piv):]:
        if r[n]:
            return AffineSolutionSet(None, ker, tuple(r))
    x = [0] * n
    for i, pc in enumerate(piv):
        x[pc] = rows[i][n]
    return AffineSolutionSet(Vector(f, tuple(x)), ker)


def dependency(vectors: Sequence[Vector]) -> Vector | None:
    """A nonzero coefficient vector ``c`` with ``sum c_i v_i == 0``, or ``None``.

    The first kernel basis vector of the column-stacked matrix is returned,
    scaled so its first nonzero entry is 1.
    """
    if not vectors:
        return None
    stacked = Matrix.from_vectors(vectors).T
    ker = kernel(stacked)
    if ker.dim == 0:
        return None
    return _canonical(Vector(stacked.field, ker.basis[0]))


def _canonical(v: Vector) -> Vector:
    lead = next(x for x in v.entries if x)
    return v.scale(v.field.inv(lead))


def complete_basis(vectors: Sequence[Vector], n: int, f: FieldSpec) -> list[Vector]:
    """Extend independent ``vectors`` to a basis using the first standard basis
    vectors not already in the running span."""
    out = list(vectors)
    span = Subspace.span(f, n, out)
    for i in range(n):
        if span.dim == n:
            break
        e = Vector.unit(f, n, i)
        if not span.contains(e):
            out.append(e)
            span = Subspace.span(f, n, out)
    return out


def invertible_completion(partial_inputs: Sequence[Vector], partial_outputs: Sequence[Vector]) -> Matrix:
    """Invertible ``T`` with ``T @ inputs[i] == outputs[i]`` for every ``i``.

    Both lists are completed to bases of the same ambient space by appending
    standard basis vectors in index order, then paired up positionally.
    """
    if len(partial_inputs) != len(partial_outputs):
        raise DimensionError("inputs and outputs must have equal length")
    if not partial_inputs:
        raise PreconditionError("at least one pinned pair is required")
    f = partial_inputs[0].field
    n = partial_inputs[0].dim
    for v in list(partial_inputs) + list(partial_outputs):
        _check_same(partial_inputs[0], v)
        if v.dim != n:
            raise DimensionError("all pinned vectors must share one ambient dimension")
    for name, vecs in (("inputs", partial_inputs), ("outputs", partial_outputs)):
        dep = dependency(vecs)
        if dep is not None:
            raise PreconditionError(f"{name} are linearly dependent", witness=dep)
    a = Matrix.from_vectors(complete_basis(partial_inputs, n, f)).T
    b = Matrix.from_vectors(complete_basis(partial_outputs, n, f)).T
    return matmul(b, inverse(a))


def kron(a, b):
    """Kronecker product of two vectors or two matrices.

    The composite index of factors ``(i, j)`` is ``i * len(b) + j``.
    """
    _check_same(a, b)
    p = a.field.p
    if isinstance(a, Vector) and isinstance(b, Vector):
        return Vector(a.field, tuple(x * y % p for x in a.entries for y in b.entries))
    if isinstance(a, Matrix) and isinstance(b, Matrix):
        rows = tuple(
            tuple(x * y % p for x in ra for y in rb)
            for ra in a.rows
            for rb in b.rows
        )
        return Matrix(a.field, rows, a.ncols * b.ncols)
    raise TypeError("kron needs two Vectors or two Matrices")


def kron_power(v: Vector, n: int) -> Vector:
    if n < 1:
        raise DimensionError("tensor power must be at least 1")
    out = v
    for _ in range(n - 1):
        out = kron(out, v)
    return out

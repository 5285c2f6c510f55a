"""Modal states, bases, evolution and bipartite structure.

A :class:`ModalState` stores the raw coefficient vector it was built from but
compares and hashes by its canonical ray (first nonzero coefficient equal to
1), since nonzero rescaling changes no possibility statement.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import DimensionError, InvalidEvolutionError, InvalidStateError, PreconditionError
from .gf import FieldSpec
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    inverse,
    is_invertible,
    kron,
    matmul,
    matvec,
    rank,
    solve,
)


@dataclass(frozen=True)
class StateSpace:
    field: FieldSpec
    dim: int

    def __post_init__(self):
        if self.dim < 1:
            raise DimensionError("state spaces have dimension >= 1")

    def basis_state(self, i: int) -> "ModalState":
        return ModalState(self, Vector.unit(self.field, self.dim, i).entries)

    def rays(self) -> list["ModalState"]:
        """Every ray of the space, in lexicographic order of canonical coefficients."""
        return [ModalState(self, c) for c in canonical_tuples(self.field.p, self.dim)]


def canonical_tuples(p: int, n: int):
    # first nonzero entry is 1; ordered lexicographically
    for lead in range(n - 1, -1, -1):
        tail_len = n - lead - 1
        for k in range(p**tail_len):
            tail = []
            for _ in range(tail_len):
                tail.append(k % p)
                k //= p
            yield (0,) * lead + (1,) + tuple(reversed(tail))


def _canonical_entries(entries: tuple[int, ...], f: FieldSpec) -> tuple[int, ...]:
    lead = next((x for x in entries if x), None)
    if lead is None:
        raise InvalidStateError("the zero vector is not a state")
    if lead == 1:
        return entries
    s = f.inv(lead)
    return tuple(x * s % f.p for x in entries)


@dataclass(frozen=True, eq=False)
class ModalState:
    space: StateSpace
    coeffs: tuple[int, ...]

    def __post_init__(self):
        f = self.space.field
        coeffs = tuple(int(c) % f.p for c in self.coeffs)
        if len(coeffs) != self.space.dim:
            raise DimensionError(f"{len(coeffs)} coefficients for a {self.space.dim}-dim space")
        object.__setattr__(self, "coeffs", coeffs)
        object.__setattr__(self, "_ray", _canonical_entries(coeffs, f))

    @classmethod
    def of(cls, f: FieldSpec, coeffs: Sequence[int]) -> "ModalState":
        return cls(StateSpace(f, len(coeffs)), tuple(coeffs))

    @classmethod
    def from_vector(cls, v: Vector) -> "ModalState":
        return cls(StateSpace(v.field, v.dim), v.entries)

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    @property
    def dim(self) -> int:
        return self.space.dim

    @property
    def vector(self) -> Vector:
        return Vector(self.space.field, self.coeffs)

    @property
    def ray(self) -> tuple[int, ...]:
        return self._ray

    def canonical(self) -> "ModalState":
        return ModalState(self.space, self._ray)

    def is_parallel(self, other: "ModalState") -> bool:
        return self == other

    def __eq__(self, other) -> bool:
        if not isinstance(other, ModalState):
            return NotImplemented
        return self.space == other.space and self._ray == other._ray

    def __hash__(self) -> int:
        return hash((self.space, self._ray))

    def __repr__(self) -> str:
        return f"ModalState(GF({self.field.p}), {list(self.coeffs)})"

    def to_json(self) -> dict:
        return {"p": self.field.p, "dim": self.dim, "coeffs": list(self.coeffs)}

    @classmethod
    def from_json(cls, data: dict) -> "ModalState":
        f = FieldSpec(int(data["p"]))
        coeffs = data["coeffs"]
        if "dim" in data and int(data["dim"]) != len(coeffs):
            raise DimensionError("dim does not match the coefficient count")
        return cls.of(f, coeffs)


def as_state(s) -> ModalState:
    if isinstance(s, ModalState):
        return s
    if isinstance(s, Vector):
        return ModalState.from_vector(s)
    raise TypeError(f"cannot interpret {type(s).__name__} as a modal state")


def canonical_ray(s: ModalState) -> ModalState:
    """Rescale so the first nonzero coefficient is 1."""
    return as_state(s).canonical()


@dataclass(frozen=True)
class Basis:
    """A basis of a state space; row ``i`` is the state for outcome ``i``."""

    space: StateSpace
    vectors: Matrix

    def __post_init__(self):
        if self.vectors.shape != (self.space.dim, self.space.dim):
            raise DimensionError("a basis needs exactly dim vectors of length dim")
        if self.vectors.field != self.space.field:
            raise DimensionError("basis field differs from the space field")
        if not is_invertible(self.vectors):
            raise PreconditionError("basis vectors are linearly dependent")

    @classmethod
    def standard(cls, space: StateSpace) -> "Basis":
        return cls(space, Matrix.identity(space.field, space.dim))

    @classmethod
    def from_states(cls, states: Sequence[ModalState | Vector]) -> "Basis":
        vecs = [as_state(s).vector for s in states]
        return cls(StateSpace(vecs[0].field, vecs[0].dim), Matrix.from_vectors(vecs))

    def state(self, i: int) -> ModalState:
        return ModalState(self.space, self.vectors.rows[i])

    def coordinates(self, v: Vector) -> Vector:
        """Coefficients ``c`` with ``v == sum c_i * basis[i]``."""
        if v.dim != self.space.dim:
            raise DimensionError("vector dimension does not match the basis")
        sol = solve(self.vectors.T, v)
        assert sol.feasible
        return sol.particular

    def to_json(self) -> list[list[int]]:
        return self.vectors.to_json()


def possible_outcomes(s: ModalState, b: Basis) -> frozenset[int]:
    """Outcomes ``i`` with a nonzero coefficient when ``s`` is written in ``b``."""
    s = as_state(s)
    if s.space != b.space:
        raise DimensionError("state and basis live in different spaces")
    coords = b.coordinates(s.vector)
    return frozenset(i for i, c in enumerate(coords) if c)


def possible_outcomes_mixed(m: Subspace, b: Basis) -> frozenset[int]:
    """Outcomes possible for some state in the mixed state ``m``.

    Outcome ``i`` is possible iff the ``i``-th coordinate functional does not
    vanish on all of ``m``; checking the basis of ``m`` suffices.
    """
    if m.ambient != b.space.dim or m.field != b.space.field:
        raise DimensionError("subspace and basis live in different spaces")
    out = set()
    for v in m.basis_vectors():
        out.update(i for i, c in enumerate(b.coordinates(v)) if c)
    return frozenset(out)


def evolve(s: ModalState, t: Matrix) -> ModalState:
    """Apply an invertible operator and return the canonical ray of the result."""
    s = as_state(s)
    if t.shape != (s.dim, s.dim):
        raise DimensionError(f"operator of shape {t.shape} on a {s.dim}-dim state")
    if not is_invertible(t):
        raise InvalidEvolutionError("time evolution must be invertible")
    return ModalState(s.space, matvec(t, s.vector).entries).canonical()


# -- gates ---------------------------------------------------------------


def permutation_gate(f: FieldSpec, perm: Sequence[int]) -> Matrix:
    """Matrix sending basis vector ``j`` to basis vector ``perm[j]``."""
    n = len(perm)
    rows = [[0] * n for _ in range(n)]
    for j, i in enumerate(perm):
        rows[i][j] = 1
    return Matrix.from_rows(f, rows, n)


def cnot(f: FieldSpec) -> Matrix:
    """Modal CNOT on two qubits: ``|a, b> -> |a, a xor b>``, control on the left."""
    perm = [2 * a + (a ^ b) for a in (0, 1) for b in (0, 1)]
    return permutation_gate(f, perm)


def pauli_x(f: FieldSpec) -> Matrix:
    return permutation_gate(f, [1, 0])


def swap(f: FieldSpec) -> Matrix:
    return permutation_gate(f, [0, 2, 1, 3])


# -- bipartite states ----------------------------------------------------


@dataclass(frozen=True)
class BipartiteState:
    """A state of a composite system, as its ``left_dim x right_dim`` coefficient matrix.

    Entry ``(i, j)`` is the coefficient of ``|i> (x) |j>``; flattening row by
    row gives the :func:`~modalqt.linalg.kron` index ``i * right_dim + j``.
    """

    matrix: Matrix

    def __post_init__(self):
        if self.matrix.is_zero():
            raise InvalidStateError("the zero vector is not a state")

    @classmethod
    def from_matrix(cls, f: FieldSpec, rows: Sequence[Sequence[int]]) -> "BipartiteState":
        return cls(Matrix.from_rows(f, rows))

    @classmethod
    def from_vector(cls, v: Vector, left_dim: int, right_dim: int) -> "BipartiteState":
        if v.dim != left_dim * right_dim:
            raise DimensionError(f"length {v.dim} != {left_dim} * {right_dim}")
        rows = [v.entries[i * right_dim:(i + 1) * right_dim] for i in range(left_dim)]
        return cls(Matrix.from_rows(v.field, rows, right_dim))

    @classmethod
    def product(cls, left: ModalState | Vector, right: ModalState | Vector) -> "BipartiteState":
        lv = left.vector if isinstance(left, ModalState) else left
        rv = right.vector if isinstance(right, ModalState) else right
        return cls.from_vector(kron(lv, rv), lv.dim, rv.dim)

    @property
    def field(self) -> FieldSpec:
        return self.matrix.field

    @property
    def left_dim(self) -> int:
        return self.matrix.nrows

    @property
    def right_dim(self) -> int:
        return self.matrix.ncols

    @property
    def vector(self) -> Vector:
        return Vector(self.field, tuple(x for r in self.matrix.rows for x in r))

    def as_state(self) -> ModalState:
        return ModalState.from_vector(self.vector)

    def to_json(self) -> dict:
        return {
            "p": self.field.p,
            "left_dim": self.left_dim,
            "right_dim": self.right_dim,
            "matrix": self.matrix.to_json(),
        }

    @classmethod
    def from_json(cls, data: dict) -> "BipartiteState":
        f = FieldSpec(int(data["p"]))
        m = Matrix.from_rows(f, data["matrix"])
        if m.shape != (int(data["left_dim"]), int(data["right_dim"])):
            raise DimensionError("matrix shape disagrees with left_dim/right_dim")
        return cls(m)


def conditional_states(psi: BipartiteState, b: Basis) -> list[Vector]:
    """System-2 vectors ``psi_i`` with ``Psi = sum_i phi_i (x) psi_i``.

    Zero entries are kept, so index ``i`` lines up with outcome ``i`` of ``b``;
    outcome ``i`` is possible exactly when ``psi_i`` is nonzero.
    """
    if b.space.dim != psi.left_dim or b.space.field != psi.field:
        raise DimensionError("basis does not match the left factor")
    # C = Phi^T Psi  =>  Psi = (Phi^T)^-1 C
    cond = matmul(inverse(b.vectors.T), psi.matrix)
    return [cond.row(i) for i in range(cond.nrows)]


def reduced_state(psi: BipartiteState, side: str = "right") -> Subspace:
    """Mixed state of one factor: the span of its conditional states."""
    if side == "right":
        m = psi.matrix
    elif side == "left":
        m = psi.matrix.T
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return Subspace.span(psi.field, m.ncols, m.rows)


def is_entangled(psi: BipartiteState) -> bool:
    return rank(psi.matrix) >= 2


def factorize(psi: BipartiteState) -> tuple[Vector, Vector] | None:
    """Split a product state as ``left (x) right`` with ``right`` ray-canonical.

    Returns ``None`` for entangled states.
    """
    if is_entangled(psi):
        return None
    f = psi.field
    r0 = next(i for i, r in enumerate(psi.matrix.rows) if any(r))
    right = ModalState.from_vector(psi.matrix.row(r0)).canonical().vector
    c = next(j for j, x in enumerate(right.entries) if x)
    left = psi.matrix.col(c)
    return left, right

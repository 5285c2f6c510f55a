"""Distinguishability of finite state sets and minimum copy counts.

A set of modal states is distinguishable exactly when it is linearly
independent. Dependent sets of pairwise non-parallel states become
independent after enough tensor copies; :func:`min_copies` finds the least
such count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import DimensionError, DomainError, PreconditionError, ResourceError
from .gf import FieldSpec
from .linalg import Matrix, Vector, complete_basis, dependency, kron_power, rank_of_vectors
from .states import Basis, ModalState, StateSpace, as_state, possible_outcomes

DEFAULT_COPY_CAP = 64


@dataclass(frozen=True)
class StateSet:
    """Nonempty list of pairwise non-parallel states from one space."""

    states: tuple[ModalState, ...]

    def __post_init__(self):
        states = tuple(as_state(s) for s in self.states)
        if not states:
            raise PreconditionError("a state set must be nonempty")
        space = states[0].space
        if any(s.space != space for s in states):
            raise DimensionError("all members must share one state space")
        seen = {}
        for i, s in enumerate(states):
            if s in seen:
                raise PreconditionError(
                    f"members {seen[s]} and {i} are parallel", witness=(seen[s], i)
                )
            seen[s] = i
        object.__setattr__(self, "states", states)

    @classmethod
    def of(cls, f: FieldSpec, coeff_lists: Iterable[Sequence[int]]) -> "StateSet":
        return cls(tuple(ModalState.of(f, c) for c in coeff_lists))

    @classmethod
    def all_rays(cls, f: FieldSpec, dim: int = 2) -> "StateSet":
        return cls(tuple(StateSpace(f, dim).rays()))

    @property
    def space(self) -> StateSpace:
        return self.states[0].space

    @property
    def field(self) -> FieldSpec:
        return self.space.field

    def vectors(self) -> list[Vector]:
        return [s.vector for s in self.states]

    def span_dim(self) -> int:
        return rank_of_vectors(self.vectors())

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self):
        return iter(self.states)

    def __getitem__(self, i):
        return self.states[i]

    def to_json(self) -> dict:
        return {
            "p": self.field.p,
            "dim": self.space.dim,
            "states": [list(s.coeffs) for s in self.states],
        }

    @classmethod
    def from_json(cls, data: dict) -> "StateSet":
        return cls.of(FieldSpec(int(data["p"])), data["states"])


@dataclass(frozen=True)
class DependencyWitness:
    """A linear relation ``sum_k coefficients[k] * states[k] == 0``.

    ``dependent_index`` is the last member with a nonzero coefficient and
    ``expansion`` writes that member in terms of the others.
    """

    coefficients: tuple[int, ...]
    field: FieldSpec

    @property
    def dependent_index(self) -> int:
        return max(i for i, c in enumerate(self.coefficients) if c)

    @property
    def expansion(self) -> tuple[int, ...]:
        j = self.dependent_index
        p = self.field.p
        s = -self.field.inv(self.coefficients[j])
        return tuple(0 if i == j else c * s % p for i, c in enumerate(self.coefficients))

    def to_json(self) -> list[int]:
        return list(self.coefficients)


def find_dependency(s: StateSet) -> DependencyWitness | None:
    """A dependency witness for ``s``, or ``None`` if ``s`` is independent."""
    dep = dependency(s.vectors())
    return None if dep is None else DependencyWitness(dep.entries, s.field)


def is_distinguishable(s: StateSet) -> bool:
    return rank_of_vectors(s.vectors()) == len(s)


@dataclass(frozen=True)
class Discriminator:
    """A basis whose first ``len(states)`` outcomes identify the set members."""

    basis: Basis
    decision: dict = field(hash=False)

    def identify(self, state: ModalState) -> int:
        outcomes = possible_outcomes(state, self.basis)
        if len(outcomes) != 1:
            raise PreconditionError(f"state is not a set member: outcomes {sorted(outcomes)}")
        (i,) = outcomes
        if i not in self.decision:
            raise PreconditionError(f"outcome {i} does not identify a member")
        return self.decision[i]


def build_discriminator(s: StateSet) -> Discriminator:
    """Complete an independent set to a basis; outcome ``i`` means member ``i``."""
    dep = find_dependency(s)
    if dep is not None:
        raise PreconditionError("set is not distinguishable", witness=dep)
    vecs = complete_basis(s.vectors(), s.space.dim, s.field)
    basis = Basis(s.space, Matrix.from_vectors(vecs))
    return Discriminator(basis, {i: i for i in range(len(s))})


def n_copy_set(s: StateSet, n: int) -> StateSet:
    if n < 1:
        raise DomainError("copy count must be at least 1")
    return StateSet(tuple(ModalState.from_vector(kron_power(v, n)) for v in s.vectors()))


def lemma_two_copy(s: StateSet) -> bool:
    """Check that d+1 states spanning d dimensions have independent two-copy states."""
    d = s.span_dim()
    if len(s) != d + 1:
        raise PreconditionError(f"expected d+1 = {d + 1} states spanning {d} dims, got {len(s)}")
    return rank_of_vectors([kron_power(v, 2) for v in s.vectors()]) == len(s)


@dataclass(frozen=True)
class CopyAnalysis:
    """Result of :func:`min_copies`.

    ``flags`` lists every copy count actually checked, sorted, paired with
    whether the n-copy set was independent there. ``witness_at`` holds the
    dependency found at each dependent count.
    """

    states: StateSet
    min_copies: int
    strategy: str
    flags: tuple[tuple[int, bool], ...]
    witness_at: dict = field(hash=False)

    @property
    def M(self) -> int:
        return self.min_copies

    def to_json(self) -> dict:
        return {
            "M": self.min_copies,
            "strategy": self.strategy,
            "flags": [[n, ok] for n, ok in self.flags],
            "witness_at": {str(n): w.to_json() for n, w in sorted(self.witness_at.items())},
        }


def min_copies(s: StateSet, strategy: str = "increment", cap: int = DEFAULT_COPY_CAP) -> CopyAnalysis:
    """Least ``M`` such that the M-copy states of ``s`` are independent.

    ``increment`` tries 1, 2, 3, ...; ``double`` tries 1, 2, 4, ... and then
    bisects between the last dependent and first independent count, which
    relies on independence being preserved when copies are added.
    """
    if cap < 1:
        raise DomainError("cap must be at least 1")
    checked: dict[int, bool] = {}
    witnesses: dict[int, DependencyWitness] = {}

    def independent(n: int) -> bool:
        if n not in checked:
            w = find_dependency(n_copy_set(s, n))
            checked[n] = w is None
            if w is not None:
                witnesses[n] = w
        return checked[n]

    if strategy == "increment":
        m = next((n for n in range(1, cap + 1) if independent(n)), None)
    elif strategy == "double":
        m = None
        lo, n = 0, 1
        while n <= cap:
            if independent(n):
                m = n
                break
            lo, n = n, 2 * n
        if m is None and lo < cap and independent(cap):
            m = cap
        if m is not None:
            hi = m
            while hi - lo > 1:
                mid = (lo + hi) // 2
                if independent(mid):
                    hi = mid
                else:
                    lo = mid
            m = hi
    else:
        raise DomainError(f"unknown strategy {strategy!r}")
    if m is None:
        raise ResourceError(f"no independent copy count up to cap={cap}")
    return CopyAnalysis(s, m, strategy, tuple(sorted(checked.items())), witnesses)

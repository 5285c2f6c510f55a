"""Cloning and deleting of finite state sets.

Constructive side: once the N-copy and (N+1)-copy states of a set are both
independent, an invertible map sending ``psi^N (x) blank`` to ``psi^(N+1)``
exists and is built by invertible completion; its inverse deletes.

Refutative side: "some linear machine does X for every member" is a linear
system in the unknown map entries, plus one scalar per ray-valued target.
:func:`exists_linear_map` decides it exactly, screening out solutions in
which a ray scalar vanishes.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Sequence, Union

from .distinguish import StateSet, build_discriminator, find_dependency, n_copy_set
from .errors import DimensionError, DomainError, NoCloningError, PreconditionError, ResourceError
from .gf import FieldSpec
from .linalg import (
    Matrix,
    Subspace,
    Vector,
    inverse,
    invertible_completion,
    is_invertible,
    kron,
    kron_power,
    matvec,
    rank_of_vectors,
    solve,
)
from .states import ModalState, StateSpace, as_state, canonical_tuples

DEFAULT_SCREEN_BOUND = 2**20


def _blank(s: StateSet, blank) -> ModalState:
    if blank is None:
        return s.space.basis_state(0)
    blank = as_state(blank)
    if blank.space != s.space:
        raise DimensionError("blank state must live in the members' space")
    return blank


def parallel(u: Vector, v: Vector) -> bool:
    """True iff ``u`` and ``v`` are nonzero multiples of each other."""
    if u.is_zero() or v.is_zero():
        return False
    return ModalState.from_vector(u) == ModalState.from_vector(v)


@dataclass(frozen=True)
class CloneTask:
    states: StateSet
    copies: int
    blank: ModalState | None = None

    def __post_init__(self):
        if self.copies < 1:
            raise DomainError("a cloning task needs at least one input copy")
        object.__setattr__(self, "blank", _blank(self.states, self.blank))

    def inputs(self) -> list[Vector]:
        """``psi^N (x) blank`` for each member."""
        b = self.blank.vector
        return [kron(kron_power(v, self.copies), b) for v in self.states.vectors()]

    def outputs(self) -> list[Vector]:
        """``psi^(N+1)`` for each member."""
        return [kron_power(v, self.copies + 1) for v in self.states.vectors()]


def build_cloner(task: CloneTask) -> Matrix:
    """Invertible ``T`` with ``T (psi^N (x) blank) == psi^(N+1)`` for every member."""
    dep = find_dependency(n_copy_set(task.states, task.copies))
    if dep is not None:
        raise NoCloningError(
            f"the {task.copies}-copy inputs are linearly dependent", witness=dep
        )
    dep = find_dependency(n_copy_set(task.states, task.copies + 1))
    if dep is not None:
        raise PreconditionError(
            f"the {task.copies + 1}-copy outputs are linearly dependent", witness=dep
        )
    return invertible_completion(task.inputs(), task.outputs())


def build_deleter(task: CloneTask) -> Matrix:
    """Inverse of :func:`build_cloner`: ``psi^(N+1) -> psi^N (x) blank``."""
    return inverse(build_cloner(task))


# -- exact linear feasibility --------------------------------------------


@dataclass(frozen=True)
class ExactTarget:
    """``T x == y``."""

    x: Vector
    y: Vector


@dataclass(frozen=True)
class RayTarget:
    """``T x == mu * y`` for some nonzero scalar ``mu``."""

    x: Vector
    y: Vector


@dataclass(frozen=True)
class SubspaceTarget:
    """``T x`` lies in ``target``."""

    x: Vector
    target: Subspace


Constraint = Union[ExactTarget, RayTarget, SubspaceTarget]


@dataclass(frozen=True)
class LinearFeasibilityProblem:
    """Find an ``nrows x ncols`` matrix satisfying every constraint.

    With ``require_invertible`` the map must also be invertible; that is only
    supported for exact and ray constraints.
    """

    field: FieldSpec
    nrows: int
    ncols: int
    constraints: tuple[Constraint, ...]
    require_invertible: bool = False
    screen_bound: int = DEFAULT_SCREEN_BOUND

    def __post_init__(self):
        object.__setattr__(self, "constraints", tuple(self.constraints))
        for c in self.constraints:
            if c.x.field != self.field or c.x.dim != self.ncols:
                raise DimensionError("constraint input does not fit the map domain")
            if isinstance(c, SubspaceTarget):
                if c.target.field != self.field or c.target.ambient != self.nrows:
                    raise DimensionError("target subspace does not fit the map codomain")
                if self.require_invertible:
                    raise DomainError("invertibility is not supported with subspace targets")
            elif isinstance(c, (ExactTarget, RayTarget)):
                if c.y.field != self.field or c.y.dim != self.nrows:
                    raise DimensionError("constraint target does not fit the map codomain")
                if isinstance(c, RayTarget) and c.y.is_zero():
                    raise DomainError("ray targets must be nonzero")
            else:
                raise TypeError(f"unknown constraint {type(c).__name__}")
        if self.require_invertible and self.nrows != self.ncols:
            raise DomainError("only square maps can be invertible")

    @property
    def ray_constraints(self) -> list[int]:
        return [i for i, c in enumerate(self.constraints) if isinstance(c, RayTarget)]


@dataclass(frozen=True)
class FeasibilityResult:
    """Outcome of :func:`exists_linear_map`.

    ``status`` is ``"feasible"``, ``"infeasible"`` (the linear system has no
    solution at all, or invertibility is impossible) or ``"degenerate"``
    (solutions exist but every one sets some ray scalar to zero).
    """

    status: str
    problem: LinearFeasibilityProblem = field(repr=False)
    matrix: Matrix | None = None
    scalars: tuple[int, ...] = ()
    certificate: tuple[int, ...] | None = None
    reason: str = ""

    @property
    def feasible(self) -> bool:
        return self.status == "feasible"

    def residuals(self) -> list[list[int]]:
        """``T x - target`` per exact/ray constraint; the projection onto the
        annihilator for subspace constraints. All zero when feasible."""
        if self.matrix is None:
            return []
        out = []
        mu = iter(self.scalars)
        for c in self.problem.constraints:
            tx = matvec(self.matrix, c.x)
            if isinstance(c, ExactTarget):
                out.append((tx - c.y).to_json())
            elif isinstance(c, RayTarget):
                out.append((tx - c.y.scale(next(mu))).to_json())
            else:
                out.append(c.target.residual(tx).to_json())
        return out

    def to_json(self) -> dict:
        data = {"status": self.status, "reason": self.reason}
        if self.matrix is not None:
            data["matrix"] = self.matrix.to_json()
            data["scalars"] = list(self.scalars)
            data["residuals"] = self.residuals()
        if self.certificate is not None:
            data["certificate"] = list(self.certificate)
        return data


def _system(problem: LinearFeasibilityProblem, fixed_mu: Sequence[int] | None = None):
    """Equations over the unknowns ``T[r, c]`` (row-major) then the ray scalars."""
    m, n = problem.nrows, problem.ncols
    rays = problem.ray_constraints
    k = 0 if fixed_mu is not None else len(rays)
    width = m * n + k
    rows: list[list[int]] = []
    rhs: list[int] = []
    j = 0
    for c in problem.constraints:
        if isinstance(c, SubspaceTarget):
            for a in c.target.annihilator().rows:
                row = [0] * width
                for r in range(m):
                    if a[r]:
                        for col in range(n):
                            row[r * n + col] = a[r] * c.x[col]
                rows.append(row)
                rhs.append(0)
            continue
        for r in range(m):
            row = [0] * width
            row[r * n:(r + 1) * n] = c.x.entries
            if isinstance(c, RayTarget):
                if fixed_mu is None:
                    row[m * n + j] = -c.y[r]
                    rhs.append(0)
                else:
                    rhs.append(fixed_mu[j] * c.y[r])
            else:
                rhs.append(c.y[r])
            rows.append(row)
        if isinstance(c, RayTarget):
            j += 1
    f = problem.field
    if not rows:
        rows, rhs = [[0] * width], [0]
    return Matrix.from_rows(f, rows, width), Vector(f, tuple(rhs))


def _reshape(x: Vector, m: int, n: int) -> Matrix:
    return Matrix.from_rows(x.field, [x.entries[r * n:(r + 1) * n] for r in range(m)], n)


def _choose_scalars(problem, sol) -> tuple[int, ...] | None:
    """A point of the solution set projected to the ray scalars with every
    coordinate nonzero, or ``None`` if there is none."""
    f = problem.field
    p = f.p
    mn = problem.nrows * problem.ncols
    k = len(problem.ray_constraints)
    base = sol.particular.entries[mn:]
    directions = Subspace.span(f, k, [r[mn:] for r in sol.kernel.basis]) if sol.kernel.dim else Subspace.zero(f, k)
    d = directions.dim

    def point(coeffs):
        return tuple(
            (base[i] + sum(c * b[i] for c, b in zip(coeffs, directions.basis))) % p
            for i in range(k)
        )

    if p**d <= problem.screen_bound:
        for coeffs in itertools.product(range(p), repeat=d):
            mu = point(coeffs)
            if all(mu):
                return mu
        return None
    # too many points: a coordinate that is identically zero rules feasibility out
    for i in range(k):
        if not base[i] and not any(b[i] for b in directions.basis):
            return None
    rng = random.Random(0)
    for _ in range(problem.screen_bound):
        mu = point([rng.randrange(p) for _ in range(d)])
        if all(mu):
            return mu
    raise ResourceError("could not locate nondegenerate ray scalars within the screening bound")


def exists_linear_map(problem: LinearFeasibilityProblem) -> FeasibilityResult:
    """Decide whether a (possibly invertible) linear map meets every constraint."""
    m, n = problem.nrows, problem.ncols
    a, y = _system(problem)
    sol = solve(a, y)
    if not sol.feasible:
        return FeasibilityResult("infeasible", problem, certificate=sol.certificate,
                                 reason="linear system is inconsistent")
    mu: tuple[int, ...] = ()
    if problem.ray_constraints:
        mu = _choose_scalars(problem, sol)
        if mu is None:
            return FeasibilityResult("degenerate", problem,
                                     reason="every solution sets some ray scalar to zero")
    targets = []
    it = iter(mu)
    for c in problem.constraints:
        if isinstance(c, ExactTarget):
            targets.append(c.y)
        elif isinstance(c, RayTarget):
            targets.append(c.y.scale(next(it)))
    if problem.require_invertible:
        xs = [c.x for c in problem.constraints]
        rx, ry = rank_of_vectors(xs), rank_of_vectors(targets)
        if rx != ry:
            return FeasibilityResult(
                "infeasible", problem,
                reason=f"inputs span {rx} dims but targets span {ry}; no invertible map",
            )
        chosen: list[int] = []
        for i in range(len(xs)):
            if rank_of_vectors([xs[j] for j in chosen + [i]]) == len(chosen) + 1:
                chosen.append(i)
        t = invertible_completion([xs[i] for i in chosen], [targets[i] for i in chosen])
    else:
        a2, y2 = _system(problem, fixed_mu=mu)
        sol2 = solve(a2, y2)
        assert sol2.feasible
        t = _reshape(sol2.particular, m, n)
    result = FeasibilityResult("feasible", problem, matrix=t, scalars=mu)
    assert all(not any(r) for r in result.residuals())
    assert not problem.require_invertible or is_invertible(t)
    return result


def clone_problem(states: StateSet, copies: int, blank=None, *, exact: bool = False,
                  require_invertible: bool = True) -> LinearFeasibilityProblem:
    """Cloning ``copies -> copies + 1`` as a feasibility problem.

    Targets are rays unless ``exact`` is set.
    """
    task = CloneTask(states, copies, blank)
    kind = ExactTarget if exact else RayTarget
    cons = tuple(kind(x, y) for x, y in zip(task.inputs(), task.outputs()))
    n = cons[0].x.dim
    return LinearFeasibilityProblem(states.field, n, n, cons, require_invertible)


def delete_problem(states: StateSet, copies: int, blank=None, *, exact: bool = False,
                   require_invertible: bool = True) -> LinearFeasibilityProblem:
    """Deleting ``copies + 1 -> copies`` (plus a blank) as a feasibility problem."""
    task = CloneTask(states, copies, blank)
    kind = ExactTarget if exact else RayTarget
    cons = tuple(kind(x, y) for x, y in zip(task.outputs(), task.inputs()))
    n = cons[0].x.dim
    return LinearFeasibilityProblem(states.field, n, n, cons, require_invertible)


# -- witnesses -----------------------------------------------------------


@dataclass(frozen=True)
class CloneWitness:
    """A superposition the cloner fails on: ``produced`` is not parallel to ``expected``."""

    coefficients: tuple[int, ...]
    sigma: Vector
    produced: Vector
    expected: Vector

    def to_json(self) -> dict:
        return {
            "coefficients": list(self.coefficients),
            "sigma": self.sigma.to_json(),
            "produced": self.produced.to_json(),
            "expected": self.expected.to_json(),
        }


def no_clone_witness(cloner: Matrix, states: StateSet, n: int, blank=None) -> CloneWitness | None:
    """First superposition of members (lexicographic coefficient order) that
    ``cloner`` fails to clone, or ``None`` if every one is cloned."""
    task = CloneTask(states, n, blank)
    for x, y in zip(task.inputs(), task.outputs()):
        if cloner.shape != (x.dim, x.dim):
            raise DimensionError(f"cloner shape {cloner.shape} does not fit {x.dim}-dim inputs")
        if not parallel(matvec(cloner, x), y):
            raise PreconditionError("the supplied map does not clone every member")
    f = states.field
    vecs = states.vectors()
    d = states.space.dim
    b = task.blank.vector
    for coeffs in canonical_tuples(f.p, len(vecs)):
        sigma = Vector(f, tuple(sum(c * v[i] for c, v in zip(coeffs, vecs)) for i in range(d)))
        if sigma.is_zero():
            continue
        produced = matvec(cloner, kron(kron_power(sigma, n), b))
        expected = kron_power(sigma, n + 1)
        if not parallel(produced, expected):
            return CloneWitness(coeffs, sigma, produced, expected)
    return None


@dataclass(frozen=True)
class MachineWitness:
    """What a deleter built for independent members does to a dependent state.

    ``leakage`` is ``output`` reduced modulo ``sigma (x) blank (x) V_anc``;
    it is zero exactly when the output has the required deleted form.
    """

    sigma: Vector
    output: Vector
    leakage: Vector
    deleter: Matrix
    independent: tuple[int, ...]
    ancilla_dim: int

    @property
    def is_required_form(self) -> bool:
        return self.leakage.is_zero()

    @property
    def retained_info(self) -> str:
        if self.is_required_form:
            return "none: output is sigma (x) blank (x) ancilla"
        return "nonzero component outside sigma (x) blank (x) V_anc"

    def to_json(self) -> dict:
        return {
            "sigma": self.sigma.to_json(),
            "output": self.output.to_json(),
            "leakage": self.leakage.to_json(),
            "is_required_form": self.is_required_form,
            "retained_info": self.retained_info,
            "independent": list(self.independent),
            "ancilla_dim": self.ancilla_dim,
            "deleter": self.deleter.to_json(),
        }


def _independent_prefix(vecs: Sequence[Vector]) -> list[int]:
    chosen: list[int] = []
    for i in range(len(vecs)):
        if rank_of_vectors([vecs[j] for j in chosen + [i]]) == len(chosen) + 1:
            chosen.append(i)
    return chosen


def no_delete_machine_witness(states: StateSet, blank=None, ancilla_dim: int = 2,
                              sigma=None) -> MachineWitness:
    """Build a deleter with a machine register for an independent subset and
    apply it to a dependent state.

    The independent members ``psi_a`` (chosen greedily in set order) are sent
    ``psi_a psi_a A_0 -> psi_a blank A_a`` with ``A_a`` the ``a``-th ancilla
    basis vector. ``sigma`` defaults to the first member outside that subset.
    """
    blank = _blank(states, blank)
    f = states.field
    vecs = states.vectors()
    indep = _independent_prefix(vecs)
    if len(indep) < 2:
        raise PreconditionError("the independent members must span at least 2 dimensions")
    if ancilla_dim < max(2, len(indep)):
        raise PreconditionError(f"ancilla_dim must be at least {max(2, len(indep))}")
    anc = [Vector.unit(f, ancilla_dim, a) for a in range(ancilla_dim)]
    b = blank.vector
    inputs = [kron(kron(vecs[i], vecs[i]), anc[0]) for i in indep]
    outputs = [kron(kron(vecs[i], b), anc[a]) for a, i in enumerate(indep)]
    t = invertible_completion(inputs, outputs)

    if sigma is None:
        rest = [i for i in range(len(vecs)) if i not in indep]
        if not rest:
            raise PreconditionError("no dependent member to test; pass sigma explicitly")
        sv = vecs[rest[0]]
    else:
        sv = as_state(sigma).vector
        if sv.dim != states.space.dim or sv.field != f:
            raise DimensionError("sigma must live in the members' space")
    out = matvec(t, kron(kron(sv, sv), anc[0]))
    allowed = Subspace.span(f, out.dim, [kron(kron(sv, b), e) for e in anc])
    return MachineWitness(sv, out, allowed.residual(out), t, tuple(indep), ancilla_dim)


# -- deleting with a classical record ------------------------------------


@dataclass(frozen=True)
class RecordDeleter:
    """Delete ``M -> M-1`` copies by measuring which member is present.

    :meth:`delete` returns the remaining copies (``None`` when ``M == 1``)
    and the classical identifier; :meth:`reconstruct` maps the identifier
    back to the canonical member.
    """

    states: StateSet
    copies: int
    discriminator: object

    def delete(self, state) -> tuple[ModalState | None, int]:
        state = as_state(state)
        i = self.discriminator.identify(state)
        if self.copies == 1:
            return None, i
        rest = kron_power(self.states[i].vector, self.copies - 1)
        return ModalState.from_vector(rest).canonical(), i

    def reconstruct(self, identifier: int) -> ModalState:
        return self.states[identifier].canonical()

    def to_json(self) -> dict:
        return {
            "copies": self.copies,
            "basis": self.discriminator.basis.to_json(),
            "decision": {str(k): v for k, v in sorted(self.discriminator.decision.items())},
        }


def delete_with_record(states: StateSet, copies: int) -> RecordDeleter:
    nset = n_copy_set(states, copies)
    dep = find_dependency(nset)
    if dep is not None:
        raise PreconditionError(
            f"{copies} copies are below the minimum needed to distinguish the set", witness=dep
        )
    return RecordDeleter(states, copies, build_discriminator(nset))

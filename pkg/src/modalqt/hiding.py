"""Hiding a qubit in the correlations of two qubits.

A linear map ``|0> -> Psi_0``, ``|1> -> Psi_1`` into two qubits hides its
input iff no nonzero superposition ``a Psi_0 + b Psi_1`` is a product
state. Writing each ``Psi`` as a 2x2 coefficient matrix, that is the
statement that ``det(a M0 + b M1)`` has no projective root. Over a finite
field a companion matrix of an irreducible quadratic gives such a map; over
the complex numbers a root always exists.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, PreconditionError
from .gf import FieldSpec, Polynomial, quadratic_roots
from .linalg import Matrix, Subspace, Vector, rank
from .states import BipartiteState, canonical_tuples, factorize, is_entangled, reduced_state


def _matrix(f: FieldSpec, m) -> Matrix:
    m = m if isinstance(m, Matrix) else Matrix.from_rows(f, m)
    if m.shape != (2, 2):
        raise DomainError("hiding maps act on qubit pairs: 2x2 coefficient matrices only")
    return m


@dataclass(frozen=True)
class HidingMapSpec:
    """Images of ``|0>`` and ``|1>`` as 2x2 coefficient matrices.

    ``M0`` defaults to the identity, i.e. ``|00> + |11>``; with that choice
    the entries of ``M1`` are the ``C_ij``.
    """

    field: FieldSpec
    M1: Matrix
    M0: Matrix = None

    def __post_init__(self):
        m0 = Matrix.identity(self.field, 2) if self.M0 is None else _matrix(self.field, self.M0)
        m1 = _matrix(self.field, self.M1)
        object.__setattr__(self, "M0", m0)
        object.__setattr__(self, "M1", m1)
        flat = Matrix.from_rows(self.field, [sum(m0.rows, ()), sum(m1.rows, ())])
        if rank(flat) < 2:
            raise PreconditionError("images of |0> and |1> are linearly dependent")

    @classmethod
    def from_rows(cls, p: int, M1, M0=None) -> "HidingMapSpec":
        f = FieldSpec(p)
        return cls(f, Matrix.from_rows(f, M1), None if M0 is None else Matrix.from_rows(f, M0))

    def image(self, a: int, b: int) -> Matrix:
        pf = self.field.p
        return Matrix.from_rows(
            self.field,
            [[(a * x + b * y) % pf for x, y in zip(r0, r1)] for r0, r1 in zip(self.M0.rows, self.M1.rows)],
        )

    def pencil_coefficients(self) -> tuple[int, int, int]:
        """``(c_aa, c_ab, c_bb)`` with ``det(a M0 + b M1) = c_aa a^2 + c_ab ab + c_bb b^2``."""
        return _pencil(self.M0.rows, self.M1.rows, self.field.p)

    def to_json(self) -> dict:
        return {"p": self.field.p, "M0": self.M0.to_json(), "M1": self.M1.to_json()}

    @classmethod
    def from_json(cls, data: dict) -> "HidingMapSpec":
        return cls.from_rows(int(data["p"]), data["M1"], data.get("M0"))


def _pencil(m0, m1, p=None):
    (a00, a01), (a10, a11) = m0
    (b00, b01), (b10, b11) = m1
    c_aa = a00 * a11 - a01 * a10
    c_ab = a00 * b11 + b00 * a11 - a01 * b10 - b01 * a10
    c_bb = b00 * b11 - b01 * b10
    if p is None:
        return c_aa, c_ab, c_bb
    return c_aa % p, c_ab % p, c_bb % p


@dataclass(frozen=True)
class ProductWitness:
    """A superposition ``a Psi_0 + b Psi_1`` that is a product state.

    ``k`` is the scalar with ``row_0 == k * row_1`` of the coefficient
    matrix, when the second row is nonzero.
    """

    a: int
    b: int
    state: BipartiteState
    left: Vector
    right: Vector
    k: int | None

    def to_json(self) -> dict:
        return {
            "pair": [self.a, self.b],
            "state": self.state.matrix.to_json(),
            "factors": [self.left.to_json(), self.right.to_json()],
            "k": self.k,
        }


def _witness(spec: HidingMapSpec, a: int, b: int) -> ProductWitness | None:
    m = spec.image(a, b)
    psi = BipartiteState(m)
    parts = factorize(psi)
    if parts is None:
        return None
    left, right = parts
    k = None
    r0, r1 = m.rows
    if any(r1):
        c = next(j for j, x in enumerate(r1) if x)
        k = r0[c] * spec.field.inv(r1[c]) % spec.field.p
    return ProductWitness(a, b, psi, left, right, k)


def product_state_locator(spec: HidingMapSpec) -> list[ProductWitness]:
    """Every projective ``(a : b)`` whose image is a product state.

    Points are visited as canonical pairs in lexicographic order,
    ``(0:1), (1:0), (1:1), ...``. An empty list means the map hides.
    """
    out = []
    for a, b in canonical_tuples(spec.field.p, 2):
        w = _witness(spec, a, b)
        if w is not None:
            out.append(w)
    return out


def paper_k_quadratic(spec: HidingMapSpec) -> Polynomial:
    """``C10 k^2 + (C11 - C00) k - C01`` for a map with ``M0 = identity``.

    Its roots ``k`` give product states ``(k C10 - C00 : 1)``; it can miss the
    point ``(1 : 0)`` and cases where the second row vanishes, so
    :func:`product_state_locator` is authoritative.
    """
    f = spec.field
    if spec.M0 != Matrix.identity(f, 2):
        raise DomainError("the k-quadratic is only defined for M0 = identity")
    (c00, c01), (c10, c11) = spec.M1.rows
    return Polynomial((-c01, c11 - c00, c10), f)


def companion_matrix(q: Polynomial) -> Matrix:
    q0, q1, _ = q.coeffs
    return Matrix.from_rows(q.field, [[0, -q0], [1, -q1]])


def build_hiding_map(f: FieldSpec, q: Polynomial) -> HidingMapSpec:
    """Hiding map with ``M0 = identity`` and ``M1`` the companion matrix of ``q``.

    ``det(a I + b C) = b^2 q(-a/b)`` for ``b != 0`` and ``a^2`` at ``b = 0``,
    so a rootless monic ``q`` leaves no product state in the image.
    """
    if q.field != f:
        raise DomainError("polynomial is over a different field")
    if q.degree != 2 or not q.is_monic:
        raise PreconditionError(f"need a monic quadratic, got {q}")
    roots = quadratic_roots(q)
    if roots:
        root = min(int(r) for r in roots)
        raise PreconditionError(f"{q} is reducible over GF({f.p}): root k = {root}", witness=root)
    return HidingMapSpec(f, companion_matrix(q))


@dataclass(frozen=True)
class HidingReport:
    spec: HidingMapSpec
    hides: bool
    checked: int
    entangled: int
    reduced_left: tuple[Subspace, ...] = field(repr=False)
    reduced_right: tuple[Subspace, ...] = field(repr=False)
    witness: ProductWitness | None = None

    @property
    def verdict(self) -> str:
        return "hides" if self.hides else "fails"

    def to_json(self) -> dict:
        full = Subspace.full(self.spec.field, 2)
        return {
            "spec": self.spec.to_json(),
            "verdict": self.verdict,
            "inputs_checked": self.checked,
            "inputs_entangled": self.entangled,
            "reduced_states_full": all(s == full for s in self.reduced_left + self.reduced_right),
            "witness": None if self.witness is None else self.witness.to_json(),
        }


def verify_hiding(spec: HidingMapSpec) -> HidingReport:
    """Check every nonzero input ``(a, b)`` in lexicographic order.

    The map hides iff each image is entangled and both reduced states are
    the full space, hence identical across inputs. On failure the first
    offending input is returned as a projective witness.
    """
    f = spec.field
    p = f.p
    full = Subspace.full(f, 2)
    checked = entangled = 0
    lefts, rights = [], []
    witness = None
    for a in range(p):
        for b in range(p):
            if a == b == 0:
                continue
            checked += 1
            psi = BipartiteState(spec.image(a, b))
            rl, rr = reduced_state(psi, "left"), reduced_state(psi, "right")
            lefts.append(rl)
            rights.append(rr)
            ok = is_entangled(psi) and rl == full and rr == full
            entangled += is_entangled(psi)
            if not ok and witness is None:
                lead = a or b
                s = f.inv(lead)
                witness = _witness(spec, a * s % p, b * s % p)
    hides = witness is None and len(set(lefts)) == 1 and len(set(rights)) == 1
    return HidingReport(spec, hides, checked, entangled, tuple(lefts), tuple(rights), witness)


def entangled_reduced_states_census(f: FieldSpec) -> dict:
    """For every nonzero 2x2 coefficient matrix up to scaling, compare
    entanglement with both reduced states being the full space."""
    full = Subspace.full(f, 2)
    total = entangled = 0
    exceptions = []
    for t in canonical_tuples(f.p, 4):
        psi = BipartiteState(Matrix.from_rows(f, [t[:2], t[2:]]))
        total += 1
        ent = is_entangled(psi)
        entangled += ent
        both_full = reduced_state(psi, "left") == full and reduced_state(psi, "right") == full
        if ent != both_full:
            exceptions.append(list(t))
    return {"p": f.p, "states": total, "entangled": entangled, "exceptions": exceptions}


# -- complex-amplitude counterpart ---------------------------------------


@dataclass(frozen=True)
class AqtHidingInstance:
    """``Psi_0 = sqrt(lam)|00> + sqrt(1-lam)|11>`` and ``Psi_1 = sum C_ij |ij>``."""

    lam: float
    C: np.ndarray = field(compare=False)
    tolerance: float = 1e-9

    def __post_init__(self):
        c = np.asarray(self.C, dtype=complex)
        if c.shape != (2, 2):
            raise DomainError("C must be 2x2")
        if not 0.0 < self.lam < 1.0:
            raise DomainError(f"lambda must lie in (0, 1), got {self.lam}")
        norm = np.linalg.norm(c)
        if abs(norm - 1.0) > self.tolerance:
            raise DomainError(f"Psi_1 must be normalized, |C| = {norm}")
        object.__setattr__(self, "C", c)

    @property
    def M0(self) -> np.ndarray:
        return np.diag([np.sqrt(self.lam), np.sqrt(1.0 - self.lam)]).astype(complex)

    @classmethod
    def random(cls, rng: np.random.Generator, tolerance: float = 1e-9) -> "AqtHidingInstance":
        lam = float(rng.uniform(0.0, 1.0))
        while not 0.0 < lam < 1.0:
            lam = float(rng.uniform(0.0, 1.0))
        c = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        return cls(lam, c / np.linalg.norm(c), tolerance)

    def paper_z_quadratic(self) -> tuple[complex, complex, complex]:
        """Coefficients ``(z^2, z, 1)`` of the z-quadratic for these ``C_ij``."""
        s, t = np.sqrt(self.lam), np.sqrt(1.0 - self.lam)
        c = self.C
        return (c[1, 0] * t, c[1, 1] * s - c[0, 0] * t, -c[0, 1] * s)


@dataclass(frozen=True)
class AqtProductWitness:
    alpha: complex
    beta: complex
    state: np.ndarray = field(compare=False)
    left: np.ndarray = field(compare=False)
    right: np.ndarray = field(compare=False)
    singular_ratio: float

    def to_json(self) -> dict:
        def cx(z):
            return [float(np.real(z)), float(np.imag(z))]

        return {
            "alpha": cx(self.alpha),
            "beta": cx(self.beta),
            "state": [[cx(z) for z in row] for row in self.state],
            "left": [cx(z) for z in self.left],
            "right": [cx(z) for z in self.right],
            "singular_ratio": float(self.singular_ratio),
        }


def _pick_root(c2: complex, c1: complex, c0: complex, tol: float) -> tuple[complex, complex]:
    """A projective root ``(alpha : beta)`` of ``c2 a^2 + c1 ab + c0 b^2``.

    With two finite roots the one with larger (real, imag) is taken, so the
    choice is deterministic.
    """
    scale = max(abs(c2), abs(c1), abs(c0))
    if abs(c2) <= tol * scale:
        return 1.0 + 0j, 0j
    disc = cmath.sqrt(c1 * c1 - 4 * c2 * c0)
    roots = [(-c1 + disc) / (2 * c2), (-c1 - disc) / (2 * c2)]
    roots.sort(key=lambda z: (round(z.real, 12), round(z.imag, 12)), reverse=True)
    return roots[0], 1.0 + 0j


def aqt_unhide_demo(inst: AqtHidingInstance) -> AqtProductWitness:
    """Find a product state in the span of ``Psi_0`` and ``Psi_1``."""
    m0, m1 = inst.M0, inst.C
    sv = np.linalg.svd(np.vstack([m0.ravel(), m1.ravel()]), compute_uv=False)
    if sv[-1] <= inst.tolerance * sv[0]:
        raise PreconditionError("Psi_0 and Psi_1 are linearly dependent")
    c2, c1, c0 = _pencil(m0, m1)
    alpha, beta = _pick_root(complex(c2), complex(c1), complex(c0), inst.tolerance)
    n = np.hypot(abs(alpha), abs(beta))
    alpha, beta = alpha / n, beta / n
    state = alpha * m0 + beta * m1
    state = state / np.linalg.norm(state)
    u, s, vh = np.linalg.svd(state)
    ratio = s[1] / s[0]
    if s[1] >= inst.tolerance:
        raise AssertionError(f"no product state found: sigma_min = {s[1]}")
    left = u[:, 0] * s[0]
    right = vh[0, :]
    return AqtProductWitness(alpha, beta, state, left, right, ratio)

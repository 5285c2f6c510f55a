"""Prime-field arithmetic and small polynomial utilities.

Elements are canonical residues in ``[0, p)``. The linear-algebra layer works
on plain ``int`` residues for speed and only uses :class:`FieldElement` at the
API boundary.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Union

from .errors import DomainError, FieldMismatchError

DEFAULT_MAX_PRIME = 2**15


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b)``."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(p).

    ``max_p`` bounds the modulus so that exhaustive per-element loops stay
    cheap; it does not take part in equality.
    """

    p: int
    max_p: int = field(default=DEFAULT_MAX_PRIME, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise DomainError(f"modulus must be an int, got {self.p!r}")
        if not _is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")
        if self.p > self.max_p:
            raise DomainError(f"p={self.p} exceeds the configured limit {self.max_p}")

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(value % self.p, self)

    def __iter__(self) -> Iterator["FieldElement"]:
        return (FieldElement(v, self) for v in range(self.p))

    @property
    def zero(self) -> "FieldElement":
        return FieldElement(0, self)

    @property
    def one(self) -> "FieldElement":
        return FieldElement(1, self)

    @cached_property
    def _inverse_table(self) -> tuple[int, ...]:
        table = [0] * self.p
        for x in range(1, self.p):
            g, s, _ = xgcd(x, self.p)
            assert g == 1
            table[x] = s % self.p
        return tuple(table)

    def inv(self, x: int) -> int:
        """Inverse of the residue ``x`` as an int."""
        x %= self.p
        if x == 0:
            raise ZeroDivisionError(f"0 has no inverse in GF({self.p})")
        return self._inverse_table[x]

    def to_json(self) -> dict:
        return {"p": self.p}

    @classmethod
    def from_json(cls, data: dict) -> "FieldSpec":
        return cls(int(data["p"]))


Operand = Union["FieldElement", int]


@dataclass(frozen=True)
class FieldElement:
    value: int
    field: FieldSpec

    def __post_init__(self):
        if not 0 <= self.value < self.field.p:
            raise DomainError(f"{self.value} is not a canonical residue mod {self.field.p}")

    def _coerce(self, other: Operand) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(
                    f"cannot combine GF({self.field.p}) and GF({other.field.p}) elements"
                )
            return other.value
        if isinstance(other, int):
            return other % self.field.p
        return NotImplemented

    def _make(self, v: int) -> "FieldElement":
        return FieldElement(v % self.field.p, self.field)

    def __add__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value + o)

    __radd__ = __add__

    def __sub__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value - o)

    def __rsub__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(o - self.value)

    def __mul__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._make(self.value * o)

    __rmul__ = __mul__

    def __truediv__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._make(self.value * self.field.inv(o))

    def __rtruediv__(self, other: Operand) -> "FieldElement":
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self._make(o * self.field.inv(self.value))

    def __neg__(self) -> "FieldElement":
        return self._make(-self.value)

    def __pow__(self, exponent: int) -> "FieldElement":
        if exponent < 0:
            return field_inverse(self) ** (-exponent)
        return self._make(pow(self.value, exponent, self.field.p))

    def __eq__(self, other) -> bool:
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.field.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"{self.value} (mod {self.field.p})"


def field_inverse(x: FieldElement) -> FieldElement:
    """Multiplicative inverse by the extended Euclidean algorithm.

    Raises ``ZeroDivisionError`` for zero.
    """
    return FieldElement(x.field.inv(x.value), x.field)


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial over GF(p), coefficients lowest degree first.

    Trailing zeros are stripped on construction, so the zero polynomial has
    ``coeffs == ()`` and ``degree is None``.
    """

    coeffs: tuple[int, ...]
    field: FieldSpec

    def __post_init__(self):
        c = [int(x) % self.field.p for x in self.coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def from_coeffs(cls, coeffs, f: FieldSpec) -> "Polynomial":
        return cls(tuple(int(c) for c in coeffs), f)

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def __call__(self, x: Operand) -> FieldElement:
        if isinstance(x, FieldElement) and x.field != self.field:
            raise FieldMismatchError("evaluation point is in a different field")
        x = int(x) % self.field.p
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.field.p
        return FieldElement(acc, self.field)

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if not mono:
                terms.append(str(c))
            else:
                terms.append(mono if c == 1 else f"{c}{mono}")
        return " + ".join(terms)

    def to_json(self) -> list[int]:
        return list(self.coeffs)


def quadratic_roots(q: Polynomial, f: FieldSpec | None = None) -> set[FieldElement]:
    """All roots of a degree-2 polynomial, by evaluation at every residue."""
    f = f or q.field
    if f != q.field:
        raise FieldMismatchError("polynomial and field disagree")
    if q.degree != 2:
        raise DomainError(f"expected a quadratic, got degree {q.degree}")
    return {k for k in f if q(k) == 0}


def find_irreducible_quadratic(f: FieldSpec) -> Polynomial:
    """First monic rootless quadratic, ordered by (linear, constant) coefficient."""
    for b, c in itertools.product(range(f.p), repeat=2):
        q = Polynomial((c, b, 1), f)
        if not quadratic_roots(q):
            return q
    raise AssertionError(f"no irreducible quadratic found over GF({f.p})")

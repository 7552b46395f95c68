"""Arithmetic in GF(p^e).

Elements are polynomial residues modulo a monic irreducible polynomial,
stored as coefficient tuples (constant term first).  For the array code
elsewhere in the package every element also has an integer code
``sum(c_i * p**i)``; :class:`FieldSpec` carries addition/multiplication
tables over those codes, built once from the polynomial arithmetic.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

# Monic irreducible moduli, coefficients constant-term first.
MODULUS_TABLE: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (7, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 0, 0, 0, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (5, 2): (2, 4, 1),
    (7, 2): (3, 6, 1),
}


class FieldError(ValueError):
    pass


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, int(n**0.5) + 1))


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a, mod, p):
    """Remainder of a modulo the monic polynomial mod over Z_p."""
    a = _trim(x % p for x in a)
    dm = len(mod) - 1
    while len(a) - 1 >= dm:
        lead = a[-1]
        shift = len(a) - 1 - dm
        for i, m in enumerate(mod):
            a[shift + i] = (a[shift + i] - lead * m) % p
        a = _trim(a)
    return a


def _is_irreducible(mod, p) -> bool:
    # Trial division by every monic polynomial of degree <= deg/2.
    e = len(mod) - 1
    if e == 1:
        return True
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _poly_mod(mod, list(low) + [1], p):
                return False
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The field with q = p**e elements."""

    p: int
    e: int
    modulus: tuple[int, ...]
    add_table: np.ndarray = field(repr=False, compare=False, hash=False)
    mul_table: np.ndarray = field(repr=False, compare=False, hash=False)

    @property
    def q(self) -> int:
        return self.p**self.e

    def __str__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    # -- code <-> element ---------------------------------------------
    def elem(self, value) -> "FieldElem":
        """Build an element from an int code, a coefficient list, or a FieldElem."""
        if isinstance(value, FieldElem):
            if value.field != self:
                raise FieldError("element belongs to another field")
            return value
        if isinstance(value, (int, np.integer)):
            value = int(value)
            if not 0 <= value < self.q:
                raise FieldError(f"code {value} out of range for {self}")
            coeffs = []
            for _ in range(self.e):
                coeffs.append(value % self.p)
                value //= self.p
            return FieldElem(self, tuple(coeffs))
        coeffs = [int(c) % self.p for c in value]
        if len(coeffs) > self.e:
            coeffs = _poly_mod(coeffs, self.modulus, self.p)
        coeffs = coeffs + [0] * (self.e - len(coeffs))
        return FieldElem(self, tuple(coeffs))

    def zero(self) -> "FieldElem":
        return self.elem(0)

    def one(self) -> "FieldElem":
        return self.elem(1)

    def elements(self) -> list["FieldElem"]:
        return [self.elem(c) for c in range(self.q)]

    @cached_property
    def inv_table(self) -> np.ndarray:
        inv = np.zeros(self.q, dtype=np.int64)
        for a in range(1, self.q):
            inv[a] = int(np.nonzero(self.mul_table[a] == 1)[0][0])
        return inv

    @cached_property
    def neg_table(self) -> np.ndarray:
        return np.array([int(np.nonzero(self.add_table[a] == 0)[0][0]) for a in range(self.q)])

    @cached_property
    def sub_table(self) -> np.ndarray:
        return self.add_table[:, self.neg_table]


@dataclass(frozen=True)
class FieldElem:
    field: FieldSpec
    coeffs: tuple[int, ...]

    @property
    def code(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def __bool__(self):
        return any(self.coeffs)

    def _check(self, other):
        if not isinstance(other, FieldElem) or other.field != self.field:
            raise FieldError("operands belong to different fields")

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return add(self, neg(other))

    def __mul__(self, other):
        return mul(self, other)

    def __neg__(self):
        return neg(self)

    def __pow__(self, k: int):
        out = self.field.one()
        for _ in range(k):
            out = out * self
        return out

    def __repr__(self):
        return f"FieldElem({list(self.coeffs)})"


def field_new(p: int, e: int = 1, modulus=None) -> FieldSpec:
    """Validate (p, e, modulus) and build the field.

    >>> field_new(2, 2).q
    4
    """
    if not is_prime(p):
        raise FieldError(f"characteristic {p} is not prime")
    if e < 1:
        raise FieldError("extension degree must be >= 1")
    if modulus is None:
        if (p, e) not in MODULUS_TABLE:
            raise FieldError(f"no built-in modulus for q={p**e}; pass one explicitly")
        modulus = MODULUS_TABLE[(p, e)]
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != e + 1 or modulus[-1] != 1:
        raise FieldError("modulus must be monic of degree e")
    if any(not 0 <= c < p for c in modulus):
        raise FieldError("modulus coefficients must lie in [0, p)")
    if not _is_irreducible(modulus, p):
        raise FieldError(f"modulus {list(modulus)} is reducible over Z_{p}")

    q = p**e
    digits = [[(c // p**i) % p for i in range(e)] for c in range(q)]
    weights = [p**i for i in range(e)]

    def code(coeffs):
        return sum(c * w for c, w in zip(coeffs, weights))

    add_t = np.zeros((q, q), dtype=np.int64)
    mul_t = np.zeros((q, q), dtype=np.int64)
    for a in range(q):
        for b in range(q):
            add_t[a, b] = code([(x + y) % p for x, y in zip(digits[a], digits[b])])
            prod = [0] * (2 * e - 1)
            for i, x in enumerate(digits[a]):
                for j, y in enumerate(digits[b]):
                    prod[i + j] += x * y
            r = _poly_mod(prod, modulus, p)
            mul_t[a, b] = code(r + [0] * (e - len(r)))
    add_t.flags.writeable = False
    mul_t.flags.writeable = False
    return FieldSpec(p, e, modulus, add_t, mul_t)


def parse_field(text: str, modulus: str | None = None) -> FieldSpec:
    """Parse the CLI form ``p^e`` (or a bare prime power such as ``4``)."""
    mod = [int(c) for c in modulus.split(",")] if modulus else None
    if "^" in text:
        p, e = (int(x) for x in text.split("^"))
        return field_new(p, e, mod)
    q = int(text)
    for p in range(2, q + 1):
        if q % p == 0:
            e, rest = 0, q
            while rest % p == 0:
                rest //= p
                e += 1
            if rest != 1:
                raise FieldError(f"{q} is not a prime power")
            return field_new(p, e, mod)
    raise FieldError(f"bad field size {text!r}")


def add(a: FieldElem, b: FieldElem) -> FieldElem:
    a._check(b)
    p = a.field.p
    return FieldElem(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def neg(a: FieldElem) -> FieldElem:
    p = a.field.p
    return FieldElem(a.field, tuple((-x) % p for x in a.coeffs))


def mul(a: FieldElem, b: FieldElem) -> FieldElem:
    a._check(b)
    f = a.field
    prod = [0] * (2 * f.e - 1)
    for i, x in enumerate(a.coeffs):
        for j, y in enumerate(b.coeffs):
            prod[i + j] += x * y
    return f.elem(_poly_mod(prod, f.modulus, f.p))


def inv(a: FieldElem) -> FieldElem:
    if not a:
        raise ZeroDivisionError("inverse of zero")
    # a^(q-2) by square and multiply
    f = a.field
    result, base, k = f.one(), a, f.q - 2
    while k:
        if k & 1:
            result = mul(result, base)
        base = mul(base, base)
        k >>= 1
    return result

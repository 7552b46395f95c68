"""Finite abelian groups, the group algebra FG, ideals, and structure invariants."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property, reduce

import numpy as np

from . import linalg
from .gf_arith import FieldElem, FieldSpec


class AlgebraError(ValueError):
    pass


@dataclass(frozen=True)
class AbelianGroupSpec:
    """Z_{m_1} x ... x Z_{m_t}, elements enumerated row-major (last factor fastest)."""

    cyclic_orders: tuple[int, ...]

    def __post_init__(self):
        orders = tuple(int(o) for o in self.cyclic_orders)
        if any(o < 1 for o in orders):
            raise AlgebraError("cyclic orders must be >= 1")
        object.__setattr__(self, "cyclic_orders", orders)

    @property
    def m(self) -> int:
        return math.prod(self.cyclic_orders)

    @cached_property
    def elements(self) -> list[tuple[int, ...]]:
        return list(itertools.product(*(range(o) for o in self.cyclic_orders)))

    def index(self, g) -> int:
        idx = 0
        for x, o in zip(g, self.cyclic_orders):
            idx = idx * o + x % o
        return idx

    @cached_property
    def op_table(self) -> np.ndarray:
        """``op_table[i, j]`` is the index of element_i + element_j."""
        els = self.elements
        t = np.empty((self.m, self.m), dtype=np.int64)
        for i, x in enumerate(els):
            for j, y in enumerate(els):
                t[i, j] = self.index(tuple(a + b for a, b in zip(x, y)))
        t.flags.writeable = False
        return t

    def __str__(self):
        return "x".join(str(o) for o in self.cyclic_orders) or "1"


def parse_group(text: str) -> AbelianGroupSpec:
    """``"3"`` -> Z_3, ``"2x4"`` -> Z_2 x Z_4, ``"1"`` -> trivial group."""
    return AbelianGroupSpec(tuple(int(x) for x in text.lower().split("x")))


class GroupAlgebra:
    """The group algebra FG of a finite abelian group over a finite field."""

    def __init__(self, field: FieldSpec, group: AbelianGroupSpec):
        self.field = field
        self.group = group
        self.m = group.m

    def __eq__(self, other):
        return isinstance(other, GroupAlgebra) and (self.field, self.group) == (other.field, other.group)

    def __hash__(self):
        return hash((self.field, self.group))

    def __repr__(self):
        return f"GroupAlgebra({self.field}, Z[{self.group}])"

    def __getstate__(self):
        return {"field": self.field, "group": self.group, "m": self.m}

    def elem(self, coeffs) -> "AlgebraElem":
        """From a length-m list of field codes, coefficient lists, or FieldElems."""
        coeffs = list(coeffs)
        if len(coeffs) != self.m:
            raise AlgebraError(f"expected {self.m} coefficients, got {len(coeffs)}")
        codes = tuple(self.field.elem(c).code for c in coeffs)
        return AlgebraElem(self, codes)

    def from_codes(self, codes) -> "AlgebraElem":
        return AlgebraElem(self, tuple(int(c) for c in codes))

    def zero(self):
        return AlgebraElem(self, (0,) * self.m)

    def one(self):
        return self.basis_element(0)

    def basis_element(self, g, coeff: int = 1):
        """``coeff * g`` for a group element given by index or residue tuple."""
        idx = g if isinstance(g, int) else self.group.index(g)
        codes = [0] * self.m
        codes[idx] = coeff
        return AlgebraElem(self, tuple(codes))

    def monomial(self, *powers):
        """Shorthand for cyclic groups: ``monomial(1)`` is x, the generator."""
        return self.basis_element(tuple(powers))

    def poly(self, exponents) -> "AlgebraElem":
        """Sum of x^e over the given exponents (single cyclic factor only)."""
        out = self.zero()
        for e in exponents:
            out = out + self.monomial(e)
        return out

    def all_elements(self):
        for codes in itertools.product(range(self.field.q), repeat=self.m):
            yield AlgebraElem(self, codes)

    def regular_matrix(self, a: "AlgebraElem") -> np.ndarray:
        """m x m matrix whose row g is the word of g*a, so word(b) @ R = word(b*a)."""
        t = self.group.op_table
        R = np.zeros((self.m, self.m), dtype=np.int64)
        for g in range(self.m):
            R[g, t[g]] = a.coeffs
        return R


@dataclass(frozen=True)
class AlgebraElem:
    algebra: GroupAlgebra = field(compare=False, repr=False)
    coeffs: tuple[int, ...]

    def __eq__(self, other):
        return isinstance(other, AlgebraElem) and self.algebra == other.algebra and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        return ga_add(self, other)

    def __mul__(self, other):
        return ga_mul(self, other)

    def __bool__(self):
        return any(self.coeffs)

    @property
    def word(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=np.int64)

    def field_coeffs(self) -> list[FieldElem]:
        return [self.algebra.field.elem(c) for c in self.coeffs]

    def __repr__(self):
        return f"AlgebraElem({list(self.coeffs)})"


def _check_same(a: AlgebraElem, b: AlgebraElem):
    if a.algebra != b.algebra:
        raise AlgebraError("operands live in different group algebras")


def ga_add(a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
    _check_same(a, b)
    add = a.algebra.field.add_table
    return AlgebraElem(a.algebra, tuple(int(add[x, y]) for x, y in zip(a.coeffs, b.coeffs)))


def ga_mul(a: AlgebraElem, b: AlgebraElem) -> AlgebraElem:
    """Convolution product: (ab)_z = sum over x + y = z of a_x b_y."""
    _check_same(a, b)
    A = a.algebra
    add, mul = A.field.add_table, A.field.mul_table
    t = A.group.op_table
    out = [0] * A.m
    for x, ax in enumerate(a.coeffs):
        if not ax:
            continue
        for y, by in enumerate(b.coeffs):
            if by:
                z = t[x, y]
                out[z] = int(add[out[z], mul[ax, by]])
    return AlgebraElem(A, tuple(out))


def weight(a: AlgebraElem) -> int:
    return sum(1 for c in a.coeffs if c)


@dataclass(frozen=True)
class IdealBasis:
    """An ideal of FG held as a reduced echelon F-basis (rows are words)."""

    algebra: GroupAlgebra = field(compare=False, repr=False)
    basis: tuple[tuple[int, ...], ...]
    pivots: tuple[int, ...] = field(compare=False)

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.basis, dtype=np.int64).reshape(self.dim, self.algebra.m)

    def elements(self) -> list[AlgebraElem]:
        words = linalg.span_words(self.matrix, self.algebra.field)
        return [self.algebra.from_codes(w) for w in words]

    def contains(self, a: AlgebraElem) -> bool:
        return linalg.rank(np.vstack([self.matrix, a.word[None, :]]), self.algebra.field) == self.dim

    def is_subideal_of(self, other: "IdealBasis") -> bool:
        if self.dim > other.dim:
            return False
        both = np.vstack([other.matrix, self.matrix])
        return linalg.rank(both, self.algebra.field) == other.dim

    def basis_elems(self) -> list[AlgebraElem]:
        return [self.algebra.from_codes(row) for row in self.basis]

    def __repr__(self):
        return f"IdealBasis(dim={self.dim}, basis={[list(b) for b in self.basis]})"


def ideal_from_words(algebra: GroupAlgebra, words) -> IdealBasis:
    """Echelonize an F-spanning set that is already closed under G."""
    M = np.asarray(list(words), dtype=np.int64).reshape(-1, algebra.m)
    R, piv = linalg.rref(M, algebra.field)
    return IdealBasis(algebra, tuple(tuple(int(x) for x in row) for row in R), tuple(piv))


def ideal_from_generators(gens, algebra: GroupAlgebra | None = None) -> IdealBasis:
    """F-span of {z*g : z in G, g in gens}, in reduced echelon form."""
    gens = list(gens)
    if algebra is None:
        if not gens:
            raise AlgebraError("need an algebra for an empty generator list")
        algebra = gens[0].algebra
    rows = [algebra.regular_matrix(g) for g in gens]
    if not rows:
        return ideal_from_words(algebra, [])
    return ideal_from_words(algebra, np.vstack(rows))


def ideal_sum(I: IdealBasis, J: IdealBasis) -> IdealBasis:
    return ideal_from_words(I.algebra, np.vstack([I.matrix, J.matrix]))


def is_closed(I: IdealBasis) -> bool:
    """Every z * basis vector stays in the span."""
    A = I.algebra
    for row in I.basis_elems():
        for z in range(A.m):
            if not I.contains(A.basis_element(z) * row):
                return False
    return True


@dataclass(frozen=True)
class StructureReport:
    mu: int
    m_prime: int
    h: int
    degrees: tuple[int, ...]

    def to_dict(self):
        return {"mu": self.mu, "m_prime": self.m_prime, "h": self.h, "degrees": list(self.degrees)}


def _p_split(n: int, p: int):
    mu = 0
    while n % p == 0:
        n //= p
        mu += 1
    return mu, n


def structure(field: FieldSpec, group: AbelianGroupSpec) -> StructureReport:
    """Numerical invariants of FG: m = p^mu * m', and the F-character degrees.

    The irreducible F-characters of G correspond to orbits of x -> q*x on
    the p'-part of G; their degrees are the orbit sizes.
    """
    p, q = field.p, field.q
    mu, primes = 0, []
    for o in group.cyclic_orders:
        a, b = _p_split(o, p)
        mu += a
        primes.append(b)
    m_prime = math.prod(primes)
    seen = set()
    degrees = []
    for x in itertools.product(*(range(o) for o in primes)):
        if x in seen:
            continue
        size = 0
        y = x
        while y not in seen:
            seen.add(y)
            size += 1
            y = tuple((q * c) % o for c, o in zip(y, primes))
        degrees.append(size)
    return StructureReport(mu, m_prime, len(degrees), tuple(degrees))


def count_generating_tuples(field: FieldSpec, group: AbelianGroupSpec, k: int) -> int:
    """Number of k-tuples in (FG)^k that generate FG as an ideal (exact)."""
    if k < 1:
        raise AlgebraError("k must be >= 1")
    s = structure(field, group)
    q, pm = field.q, field.p**s.mu
    return reduce(lambda acc, d: acc * q ** ((pm - 1) * d * k) * (q ** (d * k) - 1), s.degrees, 1)


def generating_ratio(field: FieldSpec, group: AbelianGroupSpec, k: int) -> float:
    if k < 1:
        raise AlgebraError("k must be >= 1")
    q = field.q
    return math.prod(1.0 - q ** (-d * k) for d in structure(field, group).degrees)

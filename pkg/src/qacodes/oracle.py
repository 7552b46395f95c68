"""Exact ground truth by exhaustive enumeration.

Everything here returns big integers or :class:`fractions.Fraction`; no
floating point enters these values.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .codes import (
    BudgetExceeded,
    EnsembleParams,
    flinear_expansion,
    matrix_from_index,
    weight_cutoff,
)
from .gf_arith import FieldSpec
from .group_algebra import (
    AbelianGroupSpec,
    GroupAlgebra,
    IdealBasis,
    ideal_from_generators,
    ideal_sum,
)

IDEAL_BUDGET = 1 << 16
WEIGHT_BUDGET = 1 << 20
ENSEMBLE_BUDGET = 1 << 24
PAIR_BUDGET = 1 << 20


@dataclass
class IdealLattice:
    """All ideals of FG sorted by dimension; ``below[i]`` lists the j with I_j <= I_i."""

    algebra: GroupAlgebra
    ideals: list[IdealBasis]
    below: list[list[int]]

    def __len__(self):
        return len(self.ideals)

    def contains(self, i: int, j: int) -> bool:
        """Whether ideal j is contained in ideal i."""
        return j in self.below[i]

    def index_of(self, I: IdealBasis) -> int:
        return self.ideals.index(I)

    def gen_counts(self, k: int) -> list[int]:
        return generating_counts(self, k)


def _key(I: IdealBasis):
    return I.basis


def enumerate_ideals(field: FieldSpec, group: AbelianGroupSpec, budget: int = IDEAL_BUDGET) -> IdealLattice:
    """Close the principal ideals FGa under pairwise sums."""
    A = GroupAlgebra(field, group)
    if field.q**A.m > budget:
        raise BudgetExceeded(f"|FG| = {field.q ** A.m} exceeds the ideal budget {budget}")
    found: dict = {}
    for a in A.all_elements():
        I = ideal_from_generators([a], A)
        found.setdefault(_key(I), I)
    frontier = list(found.values())
    while frontier:
        current = list(found.values())
        new = []
        for I in frontier:
            for J in current:
                S = ideal_sum(I, J)
                if _key(S) not in found:
                    found[_key(S)] = S
                    new.append(S)
        frontier = new
    ideals = sorted(found.values(), key=lambda I: (I.dim, I.basis))
    below = [[j for j, J in enumerate(ideals) if J.is_subideal_of(I)] for I in ideals]
    return IdealLattice(A, ideals, below)


def generating_counts(lattice: IdealLattice, k: int) -> list[int]:
    """|I^{k*}| for every ideal: the k-tuples in I^k generating exactly I."""
    q = lattice.algebra.field.q
    counts: list[int] = []
    for i, I in enumerate(lattice.ideals):
        counts.append(q ** (I.dim * k) - sum(counts[j] for j in lattice.below[i] if j != i))
    return counts


def weight_distribution(I: IdealBasis, budget: int = WEIGHT_BUDGET) -> list[int]:
    """Histogram of Hamming weights over all elements of I (length m + 1)."""
    F = I.algebra.field
    if F.q**I.dim > budget:
        raise BudgetExceeded(f"q^{I.dim} elements exceed the weight budget")
    if I.dim == 0:
        return [1] + [0] * I.algebra.m
    w = linalg.all_weights(I.matrix, F)
    return [int(c) for c in np.bincount(w, minlength=I.algebra.m + 1)]


def cumulative_count_product(wd, n: int, delta) -> int:
    """#{words of I^n with weight <= floor(mn*delta)}, zero word included."""
    m = len(wd) - 1
    cut = weight_cutoff(m, n, delta)
    poly = [1]
    for _ in range(n):
        nxt = [0] * (len(poly) + m)
        for i, a in enumerate(poly):
            if a:
                for j, b in enumerate(wd):
                    nxt[i + j] += a * b
        poly = nxt
    return sum(poly[:cut + 1])


def exact_expectation(params: EnsembleParams, lattice: IdealLattice | None = None) -> Fraction:
    """E(N-hat) summed over the ideal lattice."""
    if lattice is None:
        lattice = enumerate_ideals(params.field, params.group)
    q, n = params.q, params.n
    total = Fraction(0)
    for I, cnt in zip(lattice.ideals, generating_counts(lattice, params.k)):
        if I.dim == 0 or cnt == 0:
            continue
        small = cumulative_count_product(weight_distribution(I), n, params.delta) - 1
        total += Fraction(cnt * small, q ** (I.dim * n))
    return total


# -- whole-ensemble enumeration -----------------------------------------

def _encoding_map(params: EnsembleParams, b_codes: np.ndarray) -> np.ndarray:
    """Matrix T_b with word(bA) = vec(A) @ T_b, vec in flat (k, n, m) order."""
    alg = params.algebra
    k, n, m = params.k, params.n, params.m
    T = np.zeros((k * n * m, n * m), dtype=np.int64)
    for i in range(k):
        R = alg.regular_matrix(alg.from_codes(b_codes[i]))
        for j in range(n):
            T[(i * n + j) * m:(i * n + j + 1) * m, j * m:(j + 1) * m] = R
    return T


def _messages(params: EnsembleParams):
    q, k, m = params.q, params.k, params.m
    for idx in range(q ** (k * m)):
        digits = np.zeros(k * m, dtype=np.int64)
        for pos in range(k * m):
            idx, digits[pos] = divmod(idx, q)
        yield digits.reshape(k, m)


def _indicators(params: EnsembleParams):
    """For every message b, the 0/1 vector X_b over all matrices (by matrix index)."""
    cut = params.cutoff
    for b in _messages(params):
        if not b.any():
            continue  # X_0 = 0 identically
        w = linalg.all_weights(_encoding_map(params, b), params.field)
        yield (w >= 1) & (w <= cut)


def _ensemble_size(params: EnsembleParams) -> int:
    return params.q ** (params.m * params.k * params.n)


@dataclass(frozen=True)
class EnsembleStats:
    pr_exceeds: Fraction
    mean_enum: Fraction
    second_moment: Fraction


def _enum_vector(params: EnsembleParams, budget: int) -> np.ndarray:
    total = _ensemble_size(params)
    if total > budget:
        raise BudgetExceeded(f"{total} matrices exceed the ensemble budget {budget}")
    X = np.zeros(total, dtype=np.int64)
    for xb in _indicators(params):
        X += xb
    return X


def brute_force_ensemble(params: EnsembleParams, budget: int = ENSEMBLE_BUDGET) -> EnsembleStats:
    """Exact Pr(N-hat = 0), E(N-hat), E(N-hat^2) over every matrix of the ensemble."""
    X = _enum_vector(params, budget)
    total = X.size
    return EnsembleStats(
        pr_exceeds=Fraction(int(np.count_nonzero(X == 0)), total),
        mean_enum=Fraction(int(X.sum()), total),
        second_moment=Fraction(int((X * X).sum()), total),
    )


def second_moment_sides(params: EnsembleParams, budget: int = PAIR_BUDGET):
    """Both sides of Pr(X >= 1) >= sum_b E(X_b) / E(X | X_b = 1).

    E(X | X_b = 1) = E(X X_b) / E(X_b); messages with E(X_b) = 0 contribute 0.
    """
    X = _enum_vector(params, budget)
    total = X.size
    lhs = Fraction(int(np.count_nonzero(X)), total)
    rhs = Fraction(0)
    for xb in _indicators(params):
        hits = int(xb.sum())
        if hits == 0:
            continue
        joint = int(X[xb].sum())  # total * E(X X_b)
        # E(X_b) / E(X|X_b=1) = E(X_b)^2 / E(X X_b)
        rhs += Fraction(hits * hits, total * joint)
    return lhs, rhs


def second_moment_inequality_check(params: EnsembleParams, budget: int = PAIR_BUDGET) -> bool:
    lhs, rhs = second_moment_sides(params, budget)
    return lhs >= rhs


@dataclass(frozen=True)
class FullRankCount:
    count: int
    total: int
    two_method_agree: bool

    @property
    def not_full_rank_fraction(self) -> Fraction:
        return 1 - Fraction(self.count, self.total)


def image_size(A, expansion=None) -> int:
    """Number of distinct codewords of C_A."""
    E = flinear_expansion(A) if expansion is None else expansion
    F = A.algebra.field
    words = linalg.span_words(E, F)
    if F.q ** words.shape[1] >= 2**62:
        return len(np.unique(words, axis=0))
    return len(np.unique(words @ (F.q ** np.arange(words.shape[1], dtype=np.int64))))


def full_rank_count(params: EnsembleParams, budget: int = PAIR_BUDGET) -> FullRankCount:
    """Count full-rank matrices; cross-check rank against image cardinality."""
    total = _ensemble_size(params)
    if total > budget:
        raise BudgetExceeded(f"{total} matrices exceed the budget {budget}")
    alg = params.algebra
    full_image = params.q ** (params.m * params.k)
    full_rank_dim = params.m * params.k
    count, agree = 0, True
    for idx in range(total):
        A = matrix_from_index(alg, params.k, params.n, idx)
        E = flinear_expansion(A)
        fr = linalg.rank(E, A.algebra.field) == full_rank_dim
        count += fr
        agree &= fr == (image_size(A, E) == full_image)
    return FullRankCount(count, total, agree)


def brute_generating_count(field: FieldSpec, group: AbelianGroupSpec, k: int) -> int:
    """#{b in (FG)^k : the ideal generated by b is FG}, by enumeration."""
    A = GroupAlgebra(field, group)
    elems = list(A.all_elements())
    return sum(
        1 for b in itertools.product(elems, repeat=k) if ideal_from_generators(b, A).dim == A.m
    )

"""Random quasi-abelian codes: ensemble sampling, encoding, weight statistics,
full-rank testing, and balanced systems of information sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import linalg
from .bounds import entropy
from .gf_arith import FieldSpec
from .group_algebra import (
    AbelianGroupSpec,
    AlgebraElem,
    GroupAlgebra,
    IdealBasis,
    ga_add,
    ga_mul,
    structure,
    weight,
)

DEFAULT_BUDGET = 1 << 24
# Stream selector in the high Philox counter word.
_MATRIX_STREAM = 0
_MESSAGE_STREAM = 1


class BudgetExceeded(RuntimeError):
    """Exhaustive enumeration would exceed the configured budget."""


def round_rate(r: float, n: int) -> int:
    """Nearest integer to r*n, halves rounded up, at least 1."""
    k = math.floor(Fraction(r) * n + Fraction(1, 2)) if isinstance(r, Fraction) else math.floor(r * n + 0.5)
    return max(1, int(k))


def weight_cutoff(m: int, n: int, delta) -> int:
    """floor(m*n*delta); exact for Fractions, float products get 1e-9 headroom."""
    if isinstance(delta, (Fraction, int)):
        return math.floor(Fraction(delta) * m * n)
    return math.floor(m * n * float(delta) + 1e-9)


@dataclass(frozen=True)
class EnsembleParams:
    field: FieldSpec
    group: AbelianGroupSpec
    r: float
    n: int
    delta: float
    k: int | None = None

    def __post_init__(self):
        q = self.field.q
        if not 0 < self.r < 1:
            raise ValueError("rate must lie in (0, 1)")
        if not 0 < self.delta < 1 - Fraction(1, q):
            raise ValueError(f"delta must lie in (0, 1 - 1/{q})")
        if self.n < 1:
            raise ValueError("n must be >= 1")
        if self.k is None:
            object.__setattr__(self, "k", round_rate(self.r, self.n))
        if self.k < 1:
            raise ValueError("k must be >= 1")

    @classmethod
    def micro(cls, field, group, k, n, delta):
        """Parameters with an explicit k, for exhaustive small-scale checks.

        ``delta`` is not range-checked beyond (0, 1] here so that oracle
        edge cases (e.g. delta close to 1) stay expressible.
        """
        obj = object.__new__(cls)
        for name, val in dict(field=field, group=group, r=Fraction(k, n), n=n, delta=delta, k=k).items():
            object.__setattr__(obj, name, val)
        return obj

    @property
    def m(self) -> int:
        return self.group.m

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def algebra(self) -> GroupAlgebra:
        return GroupAlgebra(self.field, self.group)

    @property
    def cutoff(self) -> int:
        return weight_cutoff(self.m, self.n, self.delta)


@dataclass(frozen=True, eq=False)
class GeneratorMatrix:
    """k x n matrix over FG; ``codes[i, j]`` is the word of entry a_ij."""

    algebra: GroupAlgebra
    codes: np.ndarray  # shape (k, n, m)

    @property
    def k(self) -> int:
        return self.codes.shape[0]

    @property
    def n(self) -> int:
        return self.codes.shape[1]

    def entry(self, i, j) -> AlgebraElem:
        return self.algebra.from_codes(self.codes[i, j])

    def __eq__(self, other):
        return (isinstance(other, GeneratorMatrix) and self.algebra == other.algebra
                and np.array_equal(self.codes, other.codes))

    def to_json(self):
        return self.codes.tolist()

    @classmethod
    def from_entries(cls, rows) -> "GeneratorMatrix":
        """From a nested list (k rows of n AlgebraElems)."""
        algebra = rows[0][0].algebra
        codes = np.array([[e.coeffs for e in row] for row in rows], dtype=np.int64)
        return cls(algebra, codes)


@dataclass(frozen=True)
class MessageVector:
    entries: tuple[AlgebraElem, ...]

    def __post_init__(self):
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def word(self) -> np.ndarray:
        return np.concatenate([e.word for e in self.entries])


@dataclass(frozen=True)
class Codeword:
    blocks: tuple[AlgebraElem, ...]

    @property
    def word(self) -> np.ndarray:
        return np.concatenate([b.word for b in self.blocks])

    @property
    def weight(self) -> int:
        return sum(weight(b) for b in self.blocks)

    def to_json(self):
        return [list(b.coeffs) for b in self.blocks]


def _philox(seed: int, trial: int, stream: int) -> np.random.Generator:
    key = np.array([seed & (2**64 - 1), trial & (2**64 - 1)], dtype=np.uint64)
    counter = np.array([0, 0, 0, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key, counter=counter))


def sample_matrix(params: EnsembleParams, seed: int, trial: int) -> GeneratorMatrix:
    """Uniform draw from (FG)^{k x n}; a pure function of (params, seed, trial)."""
    rng = _philox(seed, trial, _MATRIX_STREAM)
    codes = rng.integers(0, params.q, size=(params.k, params.n, params.m), dtype=np.int64)
    return GeneratorMatrix(params.algebra, codes)


def matrix_from_index(algebra: GroupAlgebra, k: int, n: int, index: int) -> GeneratorMatrix:
    """The index-th matrix in the mixed-radix order of (FG)^{k x n} (flat C order)."""
    q, m = algebra.field.q, algebra.m
    digits = np.zeros(k * n * m, dtype=np.int64)
    for pos in range(k * n * m):
        index, digits[pos] = divmod(index, q)
    return GeneratorMatrix(algebra, digits.reshape(k, n, m))


def encode(b: MessageVector, A: GeneratorMatrix) -> Codeword:
    if len(b.entries) != A.k:
        raise ValueError(f"message length {len(b.entries)} != k={A.k}")
    blocks = []
    for j in range(A.n):
        acc = A.algebra.zero()
        for i, bi in enumerate(b.entries):
            acc = ga_add(acc, ga_mul(bi, A.entry(i, j)))
        blocks.append(acc)
    return Codeword(tuple(blocks))


def _translate_index(group: AbelianGroupSpec) -> np.ndarray:
    """P[g, x] = the h with g*h = x, so regular_matrix(a) == a[P]."""
    t = group.op_table
    P = np.empty_like(t)
    rows = np.arange(group.m)[:, None]
    P[rows, t] = np.arange(group.m)[None, :]
    return P


def flinear_expansion(A: GeneratorMatrix) -> np.ndarray:
    """(mk) x (mn) matrix E over F with word(encode(b, A)) = word(b) @ E."""
    m = A.algebra.m
    blocks = np.asarray(A.codes, dtype=np.int64)[:, :, _translate_index(A.algebra.group)]  # (k, n, m, m)
    return blocks.transpose(0, 2, 1, 3).reshape(A.k * m, A.n * m)


def _check_budget(A: GeneratorMatrix, budget: int):
    count = A.algebra.field.q ** (A.algebra.m * A.k)
    if count > budget:
        raise BudgetExceeded(f"{count} messages exceed the enumeration budget {budget}")


def weight_histogram(A: GeneratorMatrix, budget: int = DEFAULT_BUDGET) -> np.ndarray:
    """Codeword weight of every message, histogrammed (entry w = #messages)."""
    _check_budget(A, budget)
    L = A.algebra.m * A.n
    hist = np.zeros(L + 1, dtype=np.int64)
    for chunk in linalg.span_weights(flinear_expansion(A), A.algebra.field):
        hist += np.bincount(chunk, minlength=L + 1)
    return hist


def cumulative_enumerator(A: GeneratorMatrix, delta, budget: int = DEFAULT_BUDGET) -> int:
    """#{b : 1 <= w(bA) <= floor(mn*delta)} by exhaustive enumeration."""
    cut = weight_cutoff(A.algebra.m, A.n, delta)
    return int(weight_histogram(A, budget)[1:cut + 1].sum())


def sampled_weights(A: GeneratorMatrix, samples: int, seed: int, trial: int) -> np.ndarray:
    """Codeword weights of ``samples`` uniform messages, keyed by (seed, trial)."""
    F = A.algebra.field
    E = flinear_expansion(A)
    rng = _philox(seed, trial, _MESSAGE_STREAM)
    out = []
    for start in range(0, samples, 4096):
        msgs = rng.integers(0, F.q, size=(min(4096, samples - start), E.shape[0]))
        out.append(np.count_nonzero(linalg.matmul(msgs, E, F), axis=1))
    return np.concatenate(out)


def sampled_enumerator(A: GeneratorMatrix, delta, samples: int, seed: int, trial: int):
    """Monte Carlo estimate of the cumulative enumerator from uniform messages.

    Returns ``(estimate, hits)``; ``hits`` is the raw number of sampled
    messages whose codeword fell in the weight window.
    """
    cut = weight_cutoff(A.algebra.m, A.n, delta)
    w = sampled_weights(A, samples, seed, trial)
    hits = int(np.count_nonzero((w >= 1) & (w <= cut)))
    total = A.algebra.field.q ** (A.algebra.m * A.k)
    return round(Fraction(hits * total, samples)), hits


def relative_distance_exceeds(A: GeneratorMatrix, delta, budget: int = DEFAULT_BUDGET) -> bool:
    """Delta(C_A) > delta, defined as an empty weight window (zero code included)."""
    return cumulative_enumerator(A, delta, budget) == 0


def min_nonzero_weight(A: GeneratorMatrix, budget: int = DEFAULT_BUDGET) -> int | None:
    hist = weight_histogram(A, budget)
    nz = np.nonzero(hist[1:])[0]
    return int(nz[0]) + 1 if nz.size else None


def is_full_rank(A: GeneratorMatrix) -> bool:
    """F-rank of the expansion equals mk (C_A has dimension mk)."""
    return linalg.rank(flinear_expansion(A), A.algebra.field) == A.algebra.m * A.k


def full_rank_bound(field: FieldSpec, group: AbelianGroupSpec, k: int, n: int) -> float:
    """Union bound sum_j q^{d_j (k - n)} on Pr(A not full rank)."""
    if k > n:
        raise ValueError("need k <= n")
    return sum(float(field.q) ** (d * (k - n)) for d in structure(field, group).degrees)


# -- balanced systems ---------------------------------------------------

@dataclass(frozen=True)
class BalancedSystem:
    """Index sets I_1..I_s (0-based coordinates) of size d over a length-N code."""

    index_sets: tuple[tuple[int, ...], ...]
    d: int
    t: int
    N: int

    @property
    def s(self) -> int:
        return len(self.index_sets)

    def multiplicities(self) -> list[int]:
        counts = [0] * self.N
        for I in self.index_sets:
            for i in I:
                counts[i] += 1
        return counts

    def counting_identity(self) -> bool:
        return self.t * self.N == self.s * self.d


def balanced_system_group_code(I: IdealBasis) -> BalancedSystem:
    """Translates zT of one information set T of the group code I."""
    if I.dim < 1:
        raise ValueError("need a nonzero ideal")
    table = I.algebra.group.op_table
    T = I.pivots
    sets = tuple(tuple(sorted(int(table[z, x]) for x in T)) for z in range(I.algebra.m))
    return BalancedSystem(sets, d=I.dim, t=I.dim, N=I.algebra.m)


def balanced_system_product(sys: BalancedSystem, n_prime: int) -> BalancedSystem:
    """System for the n'-fold product code: each I_j repeated in every block."""
    if n_prime < 1:
        raise ValueError("n_prime must be >= 1")
    sets = tuple(tuple(c * sys.N + i for c in range(n_prime) for i in I) for I in sys.index_sets)
    return BalancedSystem(sets, d=sys.d * n_prime, t=sys.t, N=sys.N * n_prime)


def product_code(words, n_prime: int) -> np.ndarray:
    """All concatenations of n' words from the given code, one per row."""
    W = np.asarray(words, dtype=np.int64)
    out = W
    for _ in range(n_prime - 1):
        out = np.concatenate([np.repeat(out, len(W), axis=0), np.tile(W, (len(out), 1))], axis=1)
    return out


def _distinct_rows(M: np.ndarray, q: int) -> int:
    if M.shape[1] == 0:
        return 1 if len(M) else 0
    if q ** M.shape[1] < 2**62:
        keys = M @ (q ** np.arange(M.shape[1], dtype=np.int64))
        return len(np.unique(keys))
    return len(np.unique(M, axis=0))


def verify_balanced(sys: BalancedSystem, C, q: int) -> bool:
    """Exhaustively check multiplicity t and bijectivity of every projection."""
    C = np.asarray(C, dtype=np.int64)
    if C.ndim != 2 or C.shape[1] != sys.N:
        raise ValueError("code length does not match the system")
    if _distinct_rows(C, q) != len(C) or len(C) != q**sys.d:
        raise ValueError(f"|C| = {len(C)} but q^d = {q ** sys.d}")
    if any(len(I) != sys.d for I in sys.index_sets):
        return False
    if any(c != sys.t for c in sys.multiplicities()):
        return False
    # |C| = q^d, so injective projections are bijective
    return all(_distinct_rows(C[:, list(I)], q) == len(C) for I in sys.index_sets)


def average_relative_weight(B) -> float:
    B = [np.asarray(b) for b in B]
    return sum(int(np.count_nonzero(b)) for b in B) / (len(B[0]) * len(B))


def balanced_weight_bound_check(d: int, B, q: int) -> bool:
    """|B| <= q^{d h_q(omega)} for a subset B of a balanced code of information length d.

    Outside omega <= 1 - 1/q the inequality is not claimed and True is returned.
    """
    B = list(B)
    if not B:
        raise ValueError("B must be nonempty")
    omega = average_relative_weight(B)
    if omega > 1 - 1 / q:
        return True
    return math.log(len(B)) <= d * entropy(q, omega) * math.log(q) + 1e-9

import itertools
from fractions import Fraction

import pytest

from qacodes.codes import (
    BudgetExceeded,
    EnsembleParams,
    MessageVector,
    encode,
    full_rank_bound,
    matrix_from_index,
)
from qacodes.gf_arith import field_new
from qacodes.group_algebra import GroupAlgebra, count_generating_tuples, ideal_from_generators, ideal_sum
from qacodes.oracle import (
    brute_force_ensemble,
    cumulative_count_product,
    enumerate_ideals,
    exact_expectation,
    full_rank_count,
    generating_counts,
    second_moment_inequality_check,
    second_moment_sides,
    weight_distribution,
)
from qacodes.verify import MICRO, describe, micro_params

from conftest import cyclic

F2, F3, F4 = field_new(2), field_new(3), field_new(2, 2)
LATTICES = [(F2, (1,)), (F2, (2,)), (F2, (3,)), (F2, (4,)), (F2, (2, 2)), (F2, (6,)), (F3, (2,)),
            (F3, (3,)), (F3, (4,)), (F4, (3,))]


def micro(F, orders, k, n, delta):
    return EnsembleParams.micro(F, cyclic(*orders), k, n, delta)


def test_ideal_counts():
    assert len(enumerate_ideals(F2, cyclic(2))) == 3
    lat = enumerate_ideals(F2, cyclic(3))
    assert [I.dim for I in lat.ideals] == [0, 1, 2, 3]
    assert lat.ideals[1].basis == ((1, 1, 1),)
    assert len(enumerate_ideals(F2, cyclic(1))) == 2


def test_ideal_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_ideals(F2, cyclic(17))


@pytest.mark.parametrize("F,orders", LATTICES, ids=lambda v: str(v))
def test_lattice_closed_under_sum(F, orders):
    lat = enumerate_ideals(F, cyclic(*orders))
    keys = {I.basis for I in lat.ideals}
    assert lat.ideals[0].dim == 0 and lat.ideals[-1].dim == lat.algebra.m
    for I, J in itertools.combinations(lat.ideals, 2):
        assert ideal_sum(I, J).basis in keys


@pytest.mark.parametrize("F,orders", LATTICES, ids=lambda v: str(v))
@pytest.mark.parametrize("k", [1, 2, 3])
def test_partition_identity(F, orders, k):
    lat = enumerate_ideals(F, cyclic(*orders))
    counts = generating_counts(lat, k)
    for i, I in enumerate(lat.ideals):
        assert sum(counts[j] for j in lat.below[i]) == F.q ** (I.dim * k)
    assert counts[0] == 1
    assert counts[-1] == count_generating_tuples(F, cyclic(*orders), k)


def test_generating_counts_examples():
    assert generating_counts(enumerate_ideals(F2, cyclic(2)), 1) == [1, 1, 2]
    assert generating_counts(enumerate_ideals(F2, cyclic(3)), 1)[-1] == 3


def test_generating_counts_brute_force():
    # |I^{k*}| by grouping all k-tuples by the ideal they generate
    lat = enumerate_ideals(F2, cyclic(3))
    alg = lat.algebra
    tally = {}
    for b in itertools.product(list(alg.all_elements()), repeat=2):
        key = ideal_from_generators(b, alg).basis
        tally[key] = tally.get(key, 0) + 1
    assert [tally[I.basis] for I in lat.ideals] == generating_counts(lat, 2)


def test_weight_distribution_examples(Z3_over_F2):
    A = Z3_over_F2
    assert weight_distribution(ideal_from_generators([A.zero()]))[0] == 1
    assert sum(weight_distribution(ideal_from_generators([A.zero()]))) == 1
    wd = weight_distribution(ideal_from_generators([A.one() + A.monomial(1)]))
    assert wd == [1, 0, 3, 0]
    full = weight_distribution(ideal_from_generators([GroupAlgebra(F2, cyclic(2)).one()]))
    assert full == [1, 2, 1]


def test_cumulative_count_product_examples(Z3_over_F2):
    A = Z3_over_F2
    I = ideal_from_generators([A.one() + A.monomial(1)])
    wd = weight_distribution(I)
    assert cumulative_count_product(wd, 1, 1) == 4
    assert cumulative_count_product(wd, 2, Fraction(1, 3)) == 7
    # brute force over I^2
    els = [e.coeffs for e in I.elements()]
    assert sum(1 for a, b in itertools.product(els, els)
               if sum(map(bool, a + b)) <= 2) == 7
    fg = weight_distribution(ideal_from_generators([A.one()]))
    for n in (1, 2, 3):
        assert cumulative_count_product(fg, n, 0.99 / (3 * n)) == 1


def direct_ensemble(params):
    """Independent route: encode every message under every matrix directly."""
    alg = params.algebra
    msgs = [MessageVector(b) for b in itertools.product(list(alg.all_elements()), repeat=params.k)]
    cut = params.cutoff
    total = params.q ** (params.m * params.k * params.n)
    values = []
    for idx in range(total):
        A = matrix_from_index(alg, params.k, params.n, idx)
        values.append(sum(1 for b in msgs if 1 <= encode(b, A).weight <= cut))
    return (Fraction(values.count(0), total), Fraction(sum(values), total),
            Fraction(sum(v * v for v in values), total))


@pytest.mark.parametrize("inst", [(F2, (1,), 1, 2, 0.5), (F2, (2,), 1, 1, 0.5), (F2, (3,), 1, 2, Fraction(1, 3)),
                                  (F3, (2,), 1, 2, Fraction(1, 4)), (F2, (1,), 2, 3, Fraction(1, 3))])
def test_brute_force_ensemble_against_direct_encoding(inst):
    p = micro(*inst)
    stats = brute_force_ensemble(p)
    assert (stats.pr_exceeds, stats.mean_enum, stats.second_moment) == direct_ensemble(p)


def test_brute_force_examples():
    p = micro(F2, (1,), 1, 2, 0.5)
    stats = brute_force_ensemble(p)
    assert stats.pr_exceeds == Fraction(1, 2)
    assert stats.mean_enum == Fraction(1, 2)
    assert exact_expectation(p) == Fraction(1, 2)
    # delta = 1: only the zero code has no nonzero word in the window
    p = micro(F2, (2,), 1, 2, 1)
    assert brute_force_ensemble(p).pr_exceeds == Fraction(1, 2 ** 4)


def test_expectation_below_first_weight():
    for inst in [(F2, (2,), 1, 2, 0.2), (F3, (3,), 1, 2, 0.1)]:
        p = micro(*inst)
        assert exact_expectation(p) == 0
        assert brute_force_ensemble(p).pr_exceeds == 1


def test_expectation_z2_example():
    p = micro(F2, (2,), 1, 1, 0.5)
    assert exact_expectation(p) == brute_force_ensemble(p).mean_enum == 1


@pytest.mark.parametrize("inst", MICRO[:12], ids=describe)
def test_expectation_identity(inst):
    p = micro_params(inst)
    assert exact_expectation(p) == brute_force_ensemble(p).mean_enum


def test_ensemble_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_ensemble(micro(F2, (4,), 2, 4, 0.2), budget=1 << 16)


def test_second_moment_examples():
    lhs, rhs = second_moment_sides(micro(F2, (1,), 1, 2, 0.5))
    assert lhs == Fraction(1, 2) and lhs >= rhs
    lhs, rhs = second_moment_sides(micro(F2, (2,), 1, 2, 0.2))
    assert lhs == rhs == 0
    assert second_moment_inequality_check(micro(F2, (2,), 1, 2, 0.5))


@pytest.mark.parametrize("inst", MICRO[:12], ids=describe)
def test_second_moment_and_markov(inst):
    p = micro_params(inst)
    lhs, rhs = second_moment_sides(p)
    assert lhs >= rhs
    stats = brute_force_ensemble(p)
    assert 1 - stats.pr_exceeds <= stats.mean_enum
    # Cauchy-Schwarz form of the same inequality
    if stats.second_moment:
        assert lhs >= stats.mean_enum ** 2 / stats.second_moment


def test_full_rank_examples():
    assert full_rank_count(micro(F2, (1,), 1, 1, 0.5)).count == 1
    assert full_rank_count(micro(F2, (2,), 1, 1, 0.5)).count == 2
    res = full_rank_count(micro(F2, (2,), 1, 2, 0.5))
    assert res.two_method_agree
    assert res.not_full_rank_fraction <= Fraction(1, 2)
    assert full_rank_bound(F2, cyclic(2), 1, 2) == 0.5

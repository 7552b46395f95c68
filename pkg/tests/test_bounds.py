import math

import pytest

from qacodes.bounds import (
    binomial_ball,
    binomial_sandwich_check,
    binomial_upper_check,
    entropy,
    gv,
)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
def test_entropy_endpoints(q):
    assert entropy(q, 0) == 0
    assert entropy(q, 1 - 1 / q) == pytest.approx(1, abs=1e-12)
    assert gv(q, 0) == 1


def test_entropy_reference_values():
    assert entropy(2, 0.5) == pytest.approx(1, abs=1e-15)
    assert entropy(3, 2 / 3) == pytest.approx(1, abs=1e-15)
    assert gv(2, 0.5) == pytest.approx(0, abs=1e-15)
    assert gv(4, 0.75) == pytest.approx(0, abs=1e-15)
    # h_2(0.11) by the textbook formula
    h = -0.11 * math.log2(0.11) - 0.89 * math.log2(0.89)
    assert gv(2, 0.11) == pytest.approx(1 - h, abs=1e-14)


def test_entropy_at_one():
    # x = 1: only the x log(q-1) term survives
    assert entropy(3, 1.0) == pytest.approx(math.log(2, 3))
    assert entropy(2, 1.0) == 0


@pytest.mark.parametrize("x", [-0.1, 1.5])
def test_entropy_domain(x):
    with pytest.raises(ValueError):
        entropy(2, x)


def test_binomial_ball_values():
    assert binomial_ball(5, 7, 0) == 0
    assert binomial_ball(2, 4, 2) == 10
    assert binomial_ball(3, 3, 1) == 6
    with pytest.raises(ValueError):
        binomial_ball(2, 3, 4)


@pytest.mark.parametrize("q", [2, 3, 4, 7])
@pytest.mark.parametrize("n", [1, 5, 13])
def test_ball_completeness(q, n):
    assert binomial_ball(q, n, n) + 1 == q**n


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (2, 10, 5), (3, 6, 4)])
def test_sandwich_documented_cases(q, n, k):
    assert binomial_sandwich_check(q, n, k)


def test_sandwich_lower_bound_fails_for_tiny_n():
    # sum = C(2,1) = 2 while 2^{2 h(1/2) - (1/2) log2 2} = 2^{1.5}
    assert not binomial_sandwich_check(2, 2, 1)
    assert binomial_upper_check(2, 2, 1)


def test_sandwich_precondition():
    with pytest.raises(ValueError):
        binomial_sandwich_check(2, 4, 3)
    with pytest.raises(ValueError):
        binomial_sandwich_check(2, 4, 0)


def test_upper_bound_everywhere():
    for q in (2, 3, 4):
        for n in range(1, 25):
            for k in range(1, n * (q - 1) // q + 1):
                assert binomial_upper_check(q, n, k)

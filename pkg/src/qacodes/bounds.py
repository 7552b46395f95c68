"""q-ary entropy, the asymptotic Gilbert-Varshamov bound, and Hamming-ball sizes."""

from __future__ import annotations

import math

LOG_SLACK = 1e-9


def _check(q, x):
    if q < 2:
        raise ValueError("q must be >= 2")
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x={x} outside [0, 1]")


def entropy(q: int, x: float) -> float:
    """q-ary entropy h_q(x), with 0 log 0 = 0."""
    _check(q, x)
    h = x * math.log(q - 1) if q > 2 else 0.0
    if 0.0 < x:
        h -= x * math.log(x)
    if x < 1.0:
        h -= (1.0 - x) * math.log1p(-x)
    return h / math.log(q)


def gv(q: int, x: float) -> float:
    """Asymptotic GV rate 1 - h_q(x)."""
    return 1.0 - entropy(q, x)


def binomial_ball(q: int, n: int, k: int) -> int:
    """sum_{i=1}^{k} C(n, i) (q-1)^i -- the nonzero words of weight <= k."""
    if not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got k={k}, n={n}")
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(1, k + 1))


def binomial_sandwich_check(q: int, n: int, k: int) -> bool:
    """Whether q^{n h(k/n) - log_q(n)/2} <= binomial_ball(q, n, k) <= q^{n h(k/n)}.

    Compared in log_q space with ``LOG_SLACK`` tolerance.
    """
    if not (1 <= k and k * q <= n * (q - 1)):
        raise ValueError(f"k={k} outside [1, floor(n(1-1/q))] for n={n}, q={q}")
    lq = math.log(q)
    mid = math.log(binomial_ball(q, n, k)) / lq
    upper = n * entropy(q, k / n)
    lower = upper - 0.5 * math.log(n) / lq
    return lower - LOG_SLACK <= mid <= upper + LOG_SLACK


def binomial_upper_check(q: int, n: int, k: int) -> bool:
    """Only the upper half of the sandwich: binomial_ball(q, n, k) <= q^{n h(k/n)}."""
    return math.log(binomial_ball(q, n, k)) / math.log(q) <= n * entropy(q, k / n) + LOG_SLACK

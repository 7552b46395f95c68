"""Oracle self-checks behind ``qacodes verify``.

Each check returns a JSON-ready dict with at least ``check`` and ``passed``.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

from . import bounds, codes, oracle
from .codes import EnsembleParams
from .gf_arith import field_new
from .group_algebra import (
    AbelianGroupSpec,
    GroupAlgebra,
    count_generating_tuples,
    ideal_from_generators,
    structure,
)


def _g(*orders):
    return AbelianGroupSpec(tuple(orders))


F2, F3, F4 = field_new(2), field_new(3), field_new(2, 2)

# (field, group, k, n, delta); every entry has q^(mkn) <= 2^16
MICRO = [
    (F2, _g(1), 1, 2, Fraction(1, 2)),
    (F2, _g(1), 2, 4, Fraction(1, 4)),
    (F2, _g(1), 2, 6, Fraction(1, 3)),
    (F2, _g(1), 3, 5, Fraction(2, 5)),
    (F2, _g(2), 1, 1, Fraction(1, 2)),
    (F2, _g(2), 1, 2, Fraction(1, 4)),
    (F2, _g(2), 1, 2, Fraction(1, 2)),
    (F2, _g(2), 1, 4, Fraction(1, 4)),
    (F2, _g(2), 2, 3, Fraction(1, 3)),
    (F2, _g(3), 1, 2, Fraction(1, 3)),
    (F2, _g(3), 1, 4, Fraction(1, 4)),
    (F2, _g(3), 2, 2, Fraction(1, 3)),
    (F2, _g(4), 1, 3, Fraction(1, 4)),
    (F2, _g(2, 2), 1, 3, Fraction(1, 3)),
    (F2, _g(5), 1, 3, Fraction(1, 5)),
    (F2, _g(6), 1, 2, Fraction(1, 4)),
    (F3, _g(1), 1, 3, Fraction(1, 3)),
    (F3, _g(2), 1, 3, Fraction(1, 3)),
    (F3, _g(3), 1, 2, Fraction(1, 3)),
    (F4, _g(1), 1, 3, Fraction(1, 2)),
    (F4, _g(2), 1, 2, Fraction(1, 2)),
]

# Larger instances for the second-moment and Markov checks, q^(mkn) <= 2^20.
MICRO_LARGE = [
    (F2, _g(2), 2, 5, Fraction(1, 5)),
    (F2, _g(1), 4, 5, Fraction(1, 5)),
    (F2, _g(4), 1, 5, Fraction(1, 5)),
    (F2, _g(3), 1, 6, Fraction(1, 6)),
]

# The full-rank bound needs k <= n.
FULL_RANK = [inst for inst in MICRO if inst[2] <= inst[3]]

GENERATOR_CASES = [(F2, _g(3), 1), (F2, _g(3), 2), (F2, _g(2), 1), (F2, _g(2), 2),
                   (F2, _g(2), 3), (F3, _g(3), 1), (F3, _g(3), 2), (F2, _g(4), 1)]


def micro_params(inst) -> EnsembleParams:
    F, G, k, n, delta = inst
    return EnsembleParams.micro(F, G, k, n, delta)


def describe(inst) -> str:
    F, G, k, n, delta = inst
    return f"q={F.q} G=Z[{G}] k={k} n={n} delta={delta}"


def gv_grid(q: int, step: float = 1e-3) -> list[float]:
    """0, step, 2*step, ... up to and including 1 - 1/q."""
    top = 1 - 1 / q
    grid = [i * step for i in range(int(top / step) + 1) if i * step < top]
    return grid + [top]


def check_gv(qs=(2, 3, 4, 5, 8, 9)):
    worst = 0.0
    monotone = True
    for q in qs:
        worst = max(worst, abs(bounds.gv(q, 1 - 1 / q)))
        grid = gv_grid(q)
        vals = [bounds.gv(q, x) for x in grid]
        monotone &= all(a > b for a, b in zip(vals, vals[1:]))
    return {"check": "gv_zero_and_monotone", "passed": worst <= 1e-12 and monotone,
            "max_abs_gv_at_zero_point": worst}


def check_sandwich(qs=(2, 3, 4), n_max=24):
    cases = [(q, n, k) for q in qs for n in range(1, n_max + 1) for k in range(1, n * (q - 1) // q + 1)]
    bad = [c for c in cases if not bounds.binomial_sandwich_check(*c)]
    upper_bad = [c for c in bad if not bounds.binomial_upper_check(*c)]
    return {"check": "binomial_sandwich", "passed": not bad, "cases": len(cases),
            "violations": len(bad), "upper_violations": len(upper_bad), "first_violations": bad[:10]}


def check_generator_counts(cases=GENERATOR_CASES):
    rows = []
    for F, G, k in cases:
        closed = count_generating_tuples(F, G, k)
        brute = oracle.brute_generating_count(F, G, k)
        rows.append({"q": F.q, "group": str(G), "k": k, "closed_form": closed, "brute": brute})
    return {"check": "generating_tuple_count", "passed": all(r["closed_form"] == r["brute"] for r in rows),
            "cases": rows}


def check_expectation_identity(instances=MICRO):
    rows = []
    for inst in instances:
        p = micro_params(inst)
        ex = oracle.exact_expectation(p)
        bf = oracle.brute_force_ensemble(p).mean_enum
        rows.append({"instance": describe(inst), "lattice": str(ex), "brute": str(bf), "equal": ex == bf})
    return {"check": "expectation_identity", "passed": all(r["equal"] for r in rows), "cases": rows}


def check_second_moment(instances=MICRO + MICRO_LARGE):
    rows = []
    for inst in instances:
        p = micro_params(inst)
        lhs, rhs = oracle.second_moment_sides(p)
        stats = oracle.brute_force_ensemble(p)
        markov = 1 - stats.pr_exceeds <= stats.mean_enum
        rows.append({"instance": describe(inst), "pr_ge_1": str(lhs), "second_moment_sum": str(rhs),
                     "second_moment_ok": lhs >= rhs, "markov_ok": markov})
    ok = all(r["second_moment_ok"] and r["markov_ok"] for r in rows)
    return {"check": "second_moment_and_markov", "passed": ok, "cases": rows}


def check_full_rank(instances=FULL_RANK):
    rows = []
    for inst in instances:
        F, G, k, n, _ = inst
        res = oracle.full_rank_count(micro_params(inst))
        bound = codes.full_rank_bound(F, G, k, n)
        rows.append({"instance": describe(inst), "count": res.count, "total": res.total,
                     "not_full_rank": float(res.not_full_rank_fraction), "bound": bound,
                     "bound_ok": float(res.not_full_rank_fraction) <= bound + 1e-12,
                     "methods_agree": res.two_method_agree})
    ok = all(r["bound_ok"] and r["methods_agree"] for r in rows)
    return {"check": "full_rank", "passed": ok, "cases": rows}


def check_balanced(specs=((F2, _g(6)), (F3, _g(4))), n_primes=(2, 3)):
    rows = []
    for F, G in specs:
        lattice = oracle.enumerate_ideals(F, G)
        for I in lattice.ideals:
            if I.dim == 0:
                continue
            words = [e.coeffs for e in I.elements()]
            system = codes.balanced_system_group_code(I)
            ok = codes.verify_balanced(system, words, F.q) and system.counting_identity()
            for npr in n_primes:
                prod = codes.balanced_system_product(system, npr)
                ok &= codes.verify_balanced(prod, codes.product_code(words, npr), F.q)
                ok &= prod.counting_identity()
            rows.append({"q": F.q, "group": str(G), "dim": I.dim, "ok": bool(ok)})
    return {"check": "balanced_systems", "passed": all(r["ok"] for r in rows), "cases": rows}


def check_structure_sums():
    cases = [(F, _g(*o)) for F in (F2, F3, F4) for o in [(1,), (2,), (3,), (4,), (5,), (6,), (7,), (2, 3), (3, 3)]]
    ok = True
    for F, G in cases:
        s = structure(F, G)
        ok &= sum(s.degrees) == s.m_prime and math.gcd(s.m_prime, F.p) == 1
        ok &= s.m_prime * F.p**s.mu == G.m
    return {"check": "structure_degree_sums", "passed": bool(ok)}


def check_whole_algebra():
    A = GroupAlgebra(F2, _g(3))
    return {"check": "unit_generates_algebra", "passed": ideal_from_generators([A.one()]).dim == A.m}


def run_all(quick: bool = False):
    checks = [check_gv, check_sandwich, check_structure_sums, check_whole_algebra]
    if quick:
        checks += [lambda: check_generator_counts(GENERATOR_CASES[:3]),
                   lambda: check_expectation_identity(MICRO[:6]),
                   lambda: check_second_moment(MICRO[:6]),
                   lambda: check_full_rank([i for i in FULL_RANK if i[0].q ** (i[1].m * i[2] * i[3]) <= 1 << 8])]
    else:
        checks += [check_generator_counts, check_expectation_identity, check_second_moment,
                   check_full_rank, check_balanced]
    for chk in checks:
        t0 = time.perf_counter()
        try:
            result = chk()
        except Exception as exc:  # report and keep going; verify must emit every check
            result = {"check": getattr(chk, "__name__", "check"), "passed": False, "error": repr(exc)}
        result["seconds"] = round(time.perf_counter() - t0, 3)
        yield result

"""Acceptance criteria 1-10, each printed as one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` (the lines are also
printed without ``-s``: the reporter bypasses capture).
"""

import subprocess
import sys
import time

import numpy as np
import pytest

from qacodes import bounds, codes, oracle, verify
from qacodes.gf_arith import field_new
from qacodes.group_algebra import parse_group
from qacodes.runner import SweepConfig, run_sweep

PILOT_SEED = 20240611


@pytest.fixture
def report(capsys):
    def emit(number, title, passed, seconds, limit, detail=""):
        ok = passed and seconds < limit
        line = (f"CRITERION {number:2d} {'PASS' if ok else 'FAIL'}  {title}  "
                f"[{seconds:.2f}s / limit {limit:g}s] {detail}")
        with capsys.disabled():
            print("\n" + line)
        return ok
    return emit


def timed(fn):
    t0 = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t0


def test_criterion_01_gv_zero_and_monotone(report):
    res, sec = timed(verify.check_gv)
    assert report(1, "GV zero point and monotone decrease", res["passed"], sec, 1,
                  f"max|gv(1-1/q)|={res['max_abs_gv_at_zero_point']:.1e}")


def test_criterion_02_binomial_sandwich(report):
    res, sec = timed(verify.check_sandwich)
    detail = (f"{res['violations']}/{res['cases']} cases violate the lower bound "
              f"(upper bound violations: {res['upper_violations']}); first: {res['first_violations'][:3]}")
    assert report(2, "partial binomial sum sandwich", res["passed"], sec, 1, detail)


def test_criterion_03_generator_counts(report):
    res, sec = timed(verify.check_generator_counts)
    z3 = next(r for r in res["cases"] if r["q"] == 2 and r["group"] == "3" and r["k"] == 1)
    assert report(3, "generating tuple count vs brute force", res["passed"] and z3["brute"] == 3, sec, 10,
                  f"{len(res['cases'])} cases")


def test_criterion_04_expectation_identity(report):
    res, sec = timed(verify.check_expectation_identity)
    first = res["cases"][0]
    anchor = first["lattice"] == first["brute"] == "1/2"
    assert report(4, "exact expectation equals ensemble mean", res["passed"] and anchor, sec, 60,
                  f"{len(res['cases'])} micro instances")


def _subsets(words, q, count, rng):
    """Random nonempty subsets with average relative weight <= 1 - 1/q."""
    weights = np.count_nonzero(words, axis=1)
    limit = (1 - 1 / q) * words.shape[1]
    out = []
    while len(out) < count:
        if rng.random() < 0.5:
            pool = np.arange(len(words))
        else:  # bias toward low weight so that large subsets qualify too
            pool = np.flatnonzero(weights <= rng.integers(0, words.shape[1] + 1))
        size = int(rng.integers(1, len(pool) + 1))
        pick = rng.choice(pool, size=size, replace=False)
        if weights[pick].mean() <= limit:
            out.append(words[pick])
    return out


def test_criterion_05_balanced_weight_bound(report):
    def run():
        rng = np.random.default_rng(PILOT_SEED)
        checked = violations = 0
        for q in (2, 3):
            F = field_new(q)
            for g in ("2", "3", "4", "6"):
                lattice = oracle.enumerate_ideals(F, parse_group(g))
                for I in lattice.ideals:
                    if I.dim == 0:
                        continue
                    words = np.array([e.coeffs for e in I.elements()])
                    for B in _subsets(words, q, 200, rng):
                        checked += 1
                        violations += not codes.balanced_weight_bound_check(I.dim, B, q)
        return checked, violations
    (checked, violations), sec = timed(run)
    assert report(5, "subset size bound on balanced codes", violations == 0, sec, 30,
                  f"{checked} subsets, {violations} violations")


def test_criterion_06_balanced_systems(report):
    res, sec = timed(verify.check_balanced)
    assert report(6, "balanced systems and product systems", res["passed"], sec, 30,
                  f"{len(res['cases'])} ideals")


def test_criterion_07_second_moment(report):
    res, sec = timed(verify.check_second_moment)
    assert report(7, "second moment inequality and Markov", res["passed"], sec, 120,
                  f"{len(res['cases'])} instances")


def test_criterion_08_full_rank(report):
    res, sec = timed(verify.check_full_rank)
    assert report(8, "full-rank frequency bound, two criteria agree", res["passed"], sec, 60,
                  f"{len(res['cases'])} instances")


def _trend_ok(rows, direction):
    """Monotone in the given direction unless consecutive Wilson intervals overlap."""
    for a, b in zip(rows, rows[1:]):
        worse = b.p_hat < a.p_hat if direction > 0 else b.p_hat > a.p_hat
        overlap = b.ci_lo <= a.ci_hi and a.ci_lo <= b.ci_hi
        if worse and not overlap:
            return False
    return True


def test_criterion_09_threshold_trend(report):
    def run():
        out = {}
        for r in (0.3, 0.8):
            cfg = SweepConfig(field_new(2), parse_group("3"), r, [0.11], [4, 6, 8], 200, PILOT_SEED)
            out[r] = run_sweep(cfg)[1]
        return out
    rows, sec = timed(run)
    below, above = rows[0.3], rows[0.8]
    ok = (all(row.side == "below" for row in below) and all(row.side == "above" for row in above)
          and _trend_ok(below, +1) and below[-1].p_hat >= 0.95
          and _trend_ok(above, -1) and above[-1].p_hat <= 0.30)
    detail = (f"r=0.3 p_hat={[row.p_hat for row in below]}  "
              f"r=0.8 p_hat={[row.p_hat for row in above]}")
    assert report(9, "threshold trend on both sides of g_2(0.11)", ok, sec, 600, detail)


def test_criterion_10_reproducibility(report, tmp_path):
    def sweep(out, workers):
        cmd = [sys.executable, "-m", "qacodes.cli", "sweep", "--field", "2", "--group", "3", "--r", "0.8",
               "--deltas", "0.11,0.2", "--ns", "4,6,8", "--trials", "100", "--seed", str(PILOT_SEED),
               "--workers", str(workers), "--output", str(out)]
        subprocess.run(cmd, check=True, capture_output=True)
        return [(out / name).read_bytes() for name in ("trials.csv", "summary.csv")]

    def run():
        return [sweep(tmp_path / f"run{i}_w{w}", w) for i in range(2) for w in (1, 8)]
    outputs, sec = timed(run)
    same = all(o == outputs[0] for o in outputs)
    assert report(10, "byte-identical sweep CSV with 1 and 8 workers", same, sec, 300,
                  f"{len(outputs)} runs")

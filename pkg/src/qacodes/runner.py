"""Seeded threshold sweeps, exact-mode reports, and result files."""

from __future__ import annotations

import csv
import io
import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import bounds, oracle
from .codes import (
    DEFAULT_BUDGET,
    BudgetExceeded,
    EnsembleParams,
    is_full_rank,
    round_rate,
    sample_matrix,
    sampled_weights,
    weight_cutoff,
    weight_histogram,
)
from .gf_arith import FieldSpec
from .group_algebra import AbelianGroupSpec

MESSAGE_SAMPLES = 100_000
Z95 = 1.959963984540054
Z997 = 2.967737925199210

TRIAL_COLUMNS = ["q", "group", "r", "n", "k", "delta", "trial", "seed", "exceeds",
                 "enum_value", "full_rank", "exact", "elapsed_ms"]
SUMMARY_COLUMNS = ["q", "group", "r", "n", "k", "delta", "trials", "mean_enum",
                   "p_hat", "ci_lo", "ci_hi", "gv", "side"]


@dataclass
class SweepConfig:
    field: FieldSpec
    group: AbelianGroupSpec
    r: float
    deltas: list[float]
    ns: list[int]
    trials: int
    seed: int
    mode: str = "auto"
    enumeration_budget: int = DEFAULT_BUDGET
    output: Path | None = None
    format: str = "csv"
    workers: int = 1
    message_samples: int = MESSAGE_SAMPLES
    timing: bool = False

    def __post_init__(self):
        q = self.field.q
        if self.mode not in ("exact", "montecarlo", "auto"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.format not in ("csv", "json"):
            raise ValueError(f"unknown format {self.format!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if list(self.ns) != sorted(self.ns) or any(n < 1 for n in self.ns):
            raise ValueError("ns must be positive and ascending")
        if not self.deltas or any(not 0 < d < 1 - 1 / q for d in self.deltas):
            raise ValueError(f"deltas must lie in (0, 1 - 1/{q})")
        if not 0 < self.r < 1:
            raise ValueError("rate must lie in (0, 1)")


@dataclass
class TrialRecord:
    q: int
    group: str
    r: float
    n: int
    k: int
    delta: float
    trial: int
    seed: int
    exceeds: bool
    enum_value: int
    full_rank: bool
    exact: bool
    elapsed_ms: float | None = None


@dataclass
class SummaryRow:
    q: int
    group: str
    r: float
    n: int
    k: int
    delta: float
    trials: int
    mean_enum: float
    p_hat: float
    ci_lo: float
    ci_hi: float
    gv: float
    side: str


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    p = successes / trials
    denom = 1 + z * z / trials
    centre = (p + z * z / (2 * trials)) / denom
    half = z * math.sqrt(p * (1 - p) / trials + z * z / (4 * trials * trials)) / denom
    lo = 0.0 if successes == 0 else max(0.0, centre - half)
    hi = 1.0 if successes == trials else min(1.0, centre + half)
    return lo, hi


def _threshold_side(r: float, g: float) -> str:
    if r < g:
        return "below"
    if r > g:
        return "above"
    return "at"


def _run_item(config: SweepConfig, n: int, trial: int) -> list[TrialRecord]:
    """All delta records for one sampled matrix (shared across deltas)."""
    t0 = time.perf_counter()
    k = round_rate(config.r, n)
    params = EnsembleParams(config.field, config.group, config.r, n, config.deltas[0], k)
    A = sample_matrix(params, config.seed, trial)
    m, q = config.group.m, config.field.q
    within = q ** (m * k) <= config.enumeration_budget
    if config.mode == "exact" and not within:
        raise BudgetExceeded(f"q^(mk) = {q ** (m * k)} exceeds the budget in exact mode")
    exact = config.mode != "montecarlo" and within
    full = is_full_rank(A)
    if exact:
        hist = weight_histogram(A, config.enumeration_budget)
    else:
        w = sampled_weights(A, config.message_samples, config.seed, trial)
        hist = np.bincount(w, minlength=m * n + 1)
        scale = Fraction(q ** (m * k), config.message_samples)
    records = []
    for delta in config.deltas:
        cut = weight_cutoff(m, n, delta)
        hits = int(hist[1:cut + 1].sum())
        value = hits if exact else round(hits * scale)
        records.append(TrialRecord(q, str(config.group), config.r, n, k, delta, trial, config.seed,
                                   exceeds=hits == 0, enum_value=value, full_rank=full, exact=exact))
    if config.timing:
        ms = round((time.perf_counter() - t0) * 1000, 3)
        for rec in records:
            rec.elapsed_ms = ms
    return records


def _run_item_args(args):
    return _run_item(*args)


def summarize(config: SweepConfig, records: list[TrialRecord]) -> list[SummaryRow]:
    q = config.field.q
    groups: dict = {}
    for rec in records:
        groups.setdefault((rec.delta, rec.n), []).append(rec)
    rows = []
    for delta in config.deltas:
        g = bounds.gv(q, delta)
        for n in config.ns:
            recs = groups.get((delta, n), [])
            hits = sum(rec.exceeds for rec in recs)
            lo, hi = wilson_interval(hits, len(recs))
            mean = float(Fraction(sum(rec.enum_value for rec in recs), len(recs))) if recs else 0.0
            rows.append(SummaryRow(q, str(config.group), config.r, n, round_rate(config.r, n), delta,
                                   len(recs), mean, hits / len(recs) if recs else 0.0, lo, hi, g,
                                   _threshold_side(config.r, g)))
    return rows


def run_sweep(config: SweepConfig) -> tuple[list[TrialRecord], list[SummaryRow]]:
    """Sample, evaluate and aggregate every (n, trial); result order is fixed."""
    items = [(config, n, t) for n in config.ns for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_run_item_args, items, chunksize=max(1, len(items) // (4 * config.workers))))
    else:
        chunks = [_run_item(*it) for it in items]
    by_key = {}
    for recs in chunks:
        for rec in recs:
            by_key[(rec.n, rec.delta, rec.trial)] = rec
    records = [by_key[(n, d, t)] for n in config.ns for d in config.deltas for t in range(config.trials)]
    return records, summarize(config, records)


# -- exact mode ----------------------------------------------------------

def run_exact(params: EnsembleParams, budget: int = oracle.ENSEMBLE_BUDGET) -> dict:
    """Exact E(N-hat) from the ideal lattice, plus brute-force statistics when feasible."""
    q = params.q
    expectation = oracle.exact_expectation(params)
    g = bounds.gv(q, float(params.delta))
    report = {
        "q": q,
        "group": str(params.group),
        "n": params.n,
        "k": params.k,
        "delta": float(params.delta),
        "cutoff": params.cutoff,
        "expectation": str(expectation),
        "expectation_float": float(expectation),
        "gv": g,
        "r_minus_gv": float(params.r) - g,
        "side": _threshold_side(float(params.r), g),
    }
    if q ** (params.m * params.k * params.n) <= budget:
        stats = oracle.brute_force_ensemble(params, budget)
        report.update(
            pr_exceeds=str(stats.pr_exceeds),
            pr_exceeds_float=float(stats.pr_exceeds),
            second_moment=str(stats.second_moment),
            brute_force_mean=str(stats.mean_enum),
        )
    return report


# -- output --------------------------------------------------------------

def _csv_value(v):
    if isinstance(v, bool):
        return "1" if v else "0"
    if v is None:
        return ""
    return repr(v) if isinstance(v, float) else str(v)


def _csv_text(columns, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        d = asdict(row)
        w.writerow([_csv_value(d[c]) for c in columns])
    return buf.getvalue()


def _json_row(row, columns):
    d = asdict(row)
    out = {c: d[c] for c in columns}
    if "enum_value" in out:
        out["enum_value"] = str(out["enum_value"])
    return out


def record_from_json(obj: dict) -> TrialRecord:
    obj = dict(obj)
    obj["enum_value"] = int(obj["enum_value"])
    return TrialRecord(**obj)


def emit(records, summary, fmt: str, path) -> list[Path]:
    """Write trials, summary and one gnuplot (n, p_hat) file per delta into ``path``."""
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if fmt == "csv":
        (out / "trials.csv").write_text(_csv_text(TRIAL_COLUMNS, records))
        (out / "summary.csv").write_text(_csv_text(SUMMARY_COLUMNS, summary))
        written += [out / "trials.csv", out / "summary.csv"]
    elif fmt == "json":
        (out / "trials.json").write_text(json.dumps([_json_row(r, TRIAL_COLUMNS) for r in records], indent=1))
        (out / "summary.json").write_text(json.dumps([_json_row(r, SUMMARY_COLUMNS) for r in summary], indent=1))
        written += [out / "trials.json", out / "summary.json"]
    else:
        raise ValueError(f"unknown format {fmt!r}")
    deltas = sorted({row.delta for row in summary})
    for delta in deltas:
        p = out / f"phat_delta_{delta!r}.dat"
        lines = [f"# delta={delta!r} n p_hat"]
        lines += [f"{row.n} {row.p_hat!r}" for row in summary if row.delta == delta]
        p.write_text("\n".join(lines) + "\n")
        written.append(p)
    return written

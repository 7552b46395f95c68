"""Command line interface: ``qacodes {gv,structure,sample,sweep,exact,verify}``.

Exit codes: 0 success, 1 usage error, 2 enumeration budget exceeded,
3 verification failure.
"""

from __future__ import annotations

import argparse
import configparser
import json
import logging
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, codes, runner, verify
from .codes import BudgetExceeded, EnsembleParams
from .gf_arith import FieldError, parse_field
from .group_algebra import AlgebraError, parse_group, structure

log = logging.getLogger("qacodes")

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_VERIFY = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _floats(text):
    return [float(x) for x in text.split(",") if x]


def _ints(text):
    return [int(x) for x in text.split(",") if x]


def _add_field_group(p, field="2", group="1"):
    p.add_argument("--field", default=field, help="field as p^e or a prime power q (default 2)")
    p.add_argument("--modulus", help="irreducible modulus coefficients c0,c1,...,ce")
    p.add_argument("--group", default=group, help="abelian group as m1xm2x... (default trivial)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qacodes", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gv", help="q-ary entropy and GV bound at x")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--x", type=float, required=True)

    p = sub.add_parser("structure", help="mu, m', character degrees of FG")
    _add_field_group(p)

    p = sub.add_parser("sample", help="draw one generator matrix and report its statistics")
    _add_field_group(p)
    p.add_argument("--r", type=float, default=0.5)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=float, default=None)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--trial", type=int, default=0)
    p.add_argument("--budget", type=int, default=codes.DEFAULT_BUDGET)

    p = sub.add_parser("sweep", help="seeded Monte Carlo threshold sweep")
    _add_field_group(p, field=None, group=None)
    p.add_argument("--config", type=Path, help="key = value config file; flags override it")
    p.add_argument("--r", type=float)
    p.add_argument("--deltas", type=_floats)
    p.add_argument("--ns", type=_ints)
    p.add_argument("--trials", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=["exact", "montecarlo", "auto"])
    p.add_argument("--budget", type=int, help="message enumeration cap")
    p.add_argument("--output", type=Path)
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--workers", type=int)
    p.add_argument("--timing", action="store_true", default=None,
                   help="fill elapsed_ms (makes output run-dependent)")

    p = sub.add_parser("exact", help="exact expectation and, when feasible, exact probabilities")
    _add_field_group(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--delta", type=str, required=True, help="float or fraction a/b")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--r", type=float)
    g.add_argument("--k", type=int)
    p.add_argument("--budget", type=int, default=1 << 24)

    p = sub.add_parser("verify", help="run the oracle self-check suite")
    p.add_argument("--quick", action="store_true", help="smallest instances only")
    return parser


SWEEP_KEYS = {
    "field": str, "modulus": str, "group": str, "r": float, "deltas": _floats, "ns": _ints,
    "trials": int, "seed": int, "mode": str, "budget": int, "output": Path, "format": str,
    "workers": int, "timing": lambda s: s.strip().lower() in ("1", "true", "yes"),
}


def read_config(path: Path) -> dict:
    cp = configparser.ConfigParser()
    cp.read_string("[sweep]\n" + path.read_text())
    out = {}
    for key, raw in cp["sweep"].items():
        if key not in SWEEP_KEYS:
            raise UsageError(f"unknown config key {key!r}")
        out[key] = SWEEP_KEYS[key](raw)
    return out


def _sweep_config(args) -> runner.SweepConfig:
    values = read_config(args.config) if args.config else {}
    for key in SWEEP_KEYS:
        v = getattr(args, key, None)
        if v is not None:
            values[key] = v
    if "seed" not in values:
        raise UsageError("sweep requires --seed")
    for key in ("r", "deltas", "ns", "trials"):
        if key not in values:
            raise UsageError(f"sweep requires --{key}")
    return runner.SweepConfig(
        field=parse_field(str(values.get("field", "2")), values.get("modulus")),
        group=parse_group(str(values.get("group", "1"))),
        r=values["r"], deltas=values["deltas"], ns=values["ns"], trials=values["trials"],
        seed=values["seed"], mode=values.get("mode", "auto"),
        enumeration_budget=values.get("budget", codes.DEFAULT_BUDGET),
        output=values.get("output", Path("sweep_out")), format=values.get("format", "csv"),
        workers=values.get("workers", 1), timing=bool(values.get("timing", False)),
    )


def _parse_delta(text: str):
    return Fraction(text) if "/" in text else float(text)


def cmd_gv(args):
    print(json.dumps({"q": args.q, "x": args.x, "entropy": bounds.entropy(args.q, args.x),
                      "gv": bounds.gv(args.q, args.x), "zero_point": 1 - 1 / args.q}))


def cmd_structure(args):
    F, G = parse_field(args.field, args.modulus), parse_group(args.group)
    print(json.dumps(structure(F, G).to_dict()))


def cmd_sample(args):
    F, G = parse_field(args.field, args.modulus), parse_group(args.group)
    delta = args.delta if args.delta is not None else 0.5 * (1 - 1 / F.q)
    params = EnsembleParams(F, G, args.r, args.n, delta)
    A = codes.sample_matrix(params, args.seed, args.trial)
    out = {"q": F.q, "group": str(G), "n": params.n, "k": params.k, "seed": args.seed,
           "trial": args.trial, "matrix": A.to_json(), "full_rank": codes.is_full_rank(A)}
    if F.q ** (params.m * params.k) <= args.budget:
        out["delta"] = delta
        out["enum_value"] = str(codes.cumulative_enumerator(A, delta, args.budget))
        mw = codes.min_nonzero_weight(A, args.budget)
        out["min_weight"] = mw
        out["relative_distance"] = None if mw is None else mw / (params.m * params.n)
    print(json.dumps(out))


def cmd_sweep(args):
    config = _sweep_config(args)
    records, summary = runner.run_sweep(config)
    files = runner.emit(records, summary, config.format, config.output)
    for row in summary:
        log.info("delta=%s n=%d p_hat=%.4f [%.4f, %.4f] side=%s", row.delta, row.n, row.p_hat,
                 row.ci_lo, row.ci_hi, row.side)
    print(json.dumps({"written": [str(f) for f in files]}))


def cmd_exact(args):
    F, G = parse_field(args.field, args.modulus), parse_group(args.group)
    delta = _parse_delta(args.delta)
    if args.k is not None:
        params = EnsembleParams.micro(F, G, args.k, args.n, delta)
    else:
        params = EnsembleParams(F, G, args.r, args.n, delta)
    print(json.dumps(runner.run_exact(params, args.budget)))


def cmd_verify(args):
    ok = True
    for result in verify.run_all(quick=args.quick):
        ok &= result["passed"]
        print(json.dumps(result))
    return EXIT_OK if ok else EXIT_VERIFY


COMMANDS = {"gv": cmd_gv, "structure": cmd_structure, "sample": cmd_sample,
            "sweep": cmd_sweep, "exact": cmd_exact, "verify": cmd_verify}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return COMMANDS[args.command](args) or EXIT_OK
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, FieldError, AlgebraError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

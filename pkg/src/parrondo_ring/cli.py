"""Command-line front end.

Subcommands: ``mean`` (one exact mean), ``table`` (means over a range of ring
sizes, six-significant-digit CSV), ``simulate`` (Monte Carlo, optionally
checked against the exact mean), ``region`` (cube scan with volume summary),
and ``ergodicity`` (condition report or condition-region volumes).

Exit codes: 0 success, 2 invalid input, 3 solver failure, 4 a requested
statistical check flagged a discrepancy.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from dataclasses import asdict
from fractions import Fraction

from .games import ParamVector, PatternSpec
from .means import mean_for, six_significant
from .montecarlo import simulate, slln_check
from .region import condition_volumes, ergodicity_conditions, scan
from .stationary import NonStochastic, SolverFailure, UnsupportedBoundary

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_SOLVER = 3
EXIT_CHECK = 4

_PATTERNS_DEFAULT = "1,1;1,2;1,3;2,1;2,2;3,1"


def _add_pattern_args(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument("--pattern", metavar="R,S", help="periodic schedule: R turns of A, S of B")
    group.add_argument("--game", choices=["b"], help="always play game B")
    group.add_argument("--mixture", metavar="GAMMA", help="play A with probability GAMMA each turn")


def _parse_pattern(args) -> PatternSpec:
    if args.pattern:
        parts = args.pattern.split(",")
        if len(parts) != 2:
            raise ValueError(f"--pattern expects R,S, got {args.pattern!r}")
        return PatternSpec.pattern(int(parts[0]), int(parts[1]))
    if args.game:
        return PatternSpec.game_b()
    gamma = Fraction(args.mixture) if "/" in args.mixture else float(args.mixture)
    return PatternSpec.mixture(gamma)


def _parse_n_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    lo, hi = int(lo), int(hi or lo)
    if lo < 3 or hi < lo:
        raise ValueError(f"bad ring-size range {text!r}")
    return lo, hi


def _pattern_config(pattern: PatternSpec):
    if pattern.kind == "pattern":
        return {"kind": "pattern", "r": pattern.r, "s": pattern.s}
    if pattern.kind == "mixture":
        return {"kind": "mixture", "gamma": str(pattern.gamma)}
    return {"kind": "game_b"}


def _emit(text: str, out: str | None):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _json_document(config, result, diagnostics) -> str:
    return json.dumps(
        {"config": config, "result": result, "diagnostics": diagnostics}, indent=2
    ) + "\n"


def cmd_mean(args) -> int:
    params = ParamVector.parse(args.params)
    pattern = _parse_pattern(args)
    started = time.perf_counter()
    report = mean_for(args.n, params, pattern, group=args.group, mode=args.mode)
    wall = time.perf_counter() - started
    config = {
        "command": "mean",
        "n": args.n,
        "params": params.label(),
        "pattern": _pattern_config(pattern),
        "group": args.group,
        "mode": args.mode or ("rational" if report.params.exact else "float"),
    }
    result = {"mu": report.mu_float, "mu_6sig": report.mu_6sig}
    if report.params.exact:
        result["mu_exact"] = str(report.mu)
    diagnostics = {
        "residual": report.residual,
        "case_id": report.case_id,
        "class_count": report.class_count,
        "group": report.group,
        "method": report.method,
        "wall_time": wall,
    }
    if args.format == "json":
        _emit(_json_document(config, result, diagnostics), args.out)
    else:
        lines = [f"mu = {report.mu_float!r}", f"mu (6 sig. digits) = {report.mu_6sig}"]
        if report.params.exact:
            lines.insert(0, f"mu (exact) = {report.mu}")
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    params = ParamVector.parse(args.params)
    lo, hi = _parse_n_range(args.n_range)
    if hi > 14:
        print(f"warning: ring sizes above 14 may take a long time (asked for {hi})", file=sys.stderr)
    patterns = []
    for token in args.patterns.split(";"):
        r, s = token.split(",")
        patterns.append(PatternSpec.pattern(int(r), int(s)))
    rows = []
    for n in range(lo, hi + 1):
        row = {"n": n}
        for pattern in patterns:
            report = mean_for(n, params, pattern, mode=args.mode)
            row[pattern.label()] = report
        rows.append(row)
    if args.format == "json":
        payload = {
            "config": {
                "command": "table",
                "n_range": [lo, hi],
                "params": params.label(),
                "patterns": [p.label() for p in patterns],
            },
            "result": [
                {
                    "n": row["n"],
                    **{p.label(): row[p.label()].mu_float for p in patterns},
                }
                for row in rows
            ],
            "diagnostics": {},
        }
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        lines = [",".join(["n"] + [f'"{p.label()}"' for p in patterns])]
        for row in rows:
            cells = [str(row["n"])] + [row[p.label()].mu_6sig for p in patterns]
            lines.append(",".join(cells))
        _emit("\n".join(lines) + "\n", args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    params = ParamVector.parse(args.params)
    pattern = _parse_pattern(args)
    turns = int(float(args.turns))
    initial = {"random": None, "zeros": 0, "ones": (1 << args.n) - 1}[args.initial]
    config = {
        "command": "simulate",
        "n": args.n,
        "params": params.label(),
        "pattern": _pattern_config(pattern),
        "turns": turns,
        "seed": args.seed,
        "replications": args.replications,
        "initial": args.initial,
    }
    started = time.perf_counter()
    if args.replications > 1 or args.check_mean is not None:
        reference = None if args.check_mean in (None, "auto") else float(args.check_mean)
        report = slln_check(
            args.n, params, pattern, turns, max(1, args.replications),
            args.seed, reference_mu=reference, jobs=args.jobs,
        )
        wall = time.perf_counter() - started
        result = {
            "reference_mu": report.reference_mu,
            "rep_means": list(report.rep_means),
            "rep_z": list(report.rep_z),
            "combined_z": report.combined_z,
            "flagged": report.flagged,
        }
        doc = _json_document(config, result, {"wall_time": wall})
        _emit(doc, args.out if args.format == "json" else None)
        if args.format != "json":
            print(f"reference mu = {report.reference_mu!r}")
            for i, (m, z) in enumerate(zip(report.rep_means, report.rep_z)):
                print(f"rep {i}: mean = {m!r}  z = {z:.3f}")
            print(f"flagged = {report.flagged}")
        return EXIT_CHECK if report.flagged else EXIT_OK
    run = simulate(args.n, params, pattern, turns, args.seed, initial=initial)
    wall = time.perf_counter() - started
    if args.out and args.format == "csv":
        with open(args.out, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["turn", "running_mean"])
            for turn, mean in run.trajectory:
                writer.writerow([turn, repr(mean)])
    else:
        result = {
            "final_mean": run.final_mean,
            "total": run.total,
            "final_state": run.final_state,
            "initial_state": run.initial,
            "standard_error": run.standard_error(),
        }
        _emit(_json_document(config, result, {"wall_time": wall}), args.out)
    return EXIT_OK


def cmd_region(args) -> int:
    pattern = _parse_pattern(args)
    started = time.perf_counter()
    result = scan(args.n, pattern, args.resolution)
    wall = time.perf_counter() - started
    config = {
        "command": "region",
        "n": args.n,
        "pattern": _pattern_config(pattern),
        "resolution": args.resolution,
    }
    volumes = {
        label: {"volume": vol, "error": err} for label, (vol, err) in result.volumes.items()
    }
    if args.out:
        if args.format == "json":
            rows = [
                {"p0": a, "p3": b, "p1": c, "mu_b": mb, "mu_pattern": mp, "label": lab}
                for a, b, c, mb, mp, lab in result.rows()
            ]
            _emit(
                _json_document(config, {"volumes": volumes, "grid": rows}, {"wall_time": wall}),
                args.out,
            )
        else:
            with open(args.out, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["p0", "p3", "p1", "mu_b", "mu_pattern", "label"])
                for a, b, c, mb, mp, lab in result.rows():
                    writer.writerow([repr(a), repr(b), repr(c), repr(mb), repr(mp), lab])
    _emit(_json_document(config, {"volumes": volumes}, {"wall_time": wall}), None)
    return EXIT_OK


def cmd_ergodicity(args) -> int:
    config = {"command": "ergodicity"}
    if args.samples:
        report = condition_volumes(int(float(args.samples)), args.seed)
        config.update({"samples": report.samples, "seed": args.seed})
        result = {
            name: {"volume": vol, "se": se} for name, (vol, se) in report.estimates.items()
        }
        _emit(_json_document(config, result, {}), args.out)
        return EXIT_OK
    if not args.params:
        raise ValueError("--params is required unless --samples is given")
    params = ParamVector.parse(args.params)
    gamma = None
    if args.mixture:
        gamma = Fraction(args.mixture) if "/" in args.mixture else float(args.mixture)
    report = ergodicity_conditions(params, gamma=gamma)
    config.update({"params": params.label(), "mixture": str(gamma) if gamma else None})
    result = {
        "conditions": {k: v for k, v in zip("abcd", report.holds)},
        "in_union": report.in_union,
        "p_bar": report.p_bar,
    }
    _emit(_json_document(config, result, {}), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="parrondo-ring",
        description="Exact means, simulations, and parameter-region maps for "
        "spatially dependent Parrondo games on a ring of players.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_mean = sub.add_parser("mean", help="exact mean profit per turn")
    p_mean.add_argument("--n", type=int, required=True, help="number of players (>= 3)")
    p_mean.add_argument("--params", required=True, metavar="P0,P1,P2,P3",
                        help="win probabilities; three values imply p2 = p1; fractions like 4/25 select exact arithmetic")
    _add_pattern_args(p_mean)
    p_mean.add_argument("--group", default="auto", choices=["auto", "cyclic", "dihedral"])
    p_mean.add_argument("--mode", default=None, choices=["rational", "float"])
    p_mean.add_argument("--format", default="text", choices=["text", "json"])
    p_mean.add_argument("--out", default=None)
    p_mean.set_defaults(func=cmd_mean)

    p_table = sub.add_parser("table", help="means over a range of ring sizes")
    p_table.add_argument("--n-range", required=True, metavar="A:B")
    p_table.add_argument("--params", required=True)
    p_table.add_argument("--patterns", default=_PATTERNS_DEFAULT,
                         help=f"semicolon-separated R,S list (default {_PATTERNS_DEFAULT})")
    p_table.add_argument("--mode", default=None, choices=["rational", "float"])
    p_table.add_argument("--format", default="csv", choices=["csv", "json"])
    p_table.add_argument("--out", default=None)
    p_table.set_defaults(func=cmd_table)

    p_sim = sub.add_parser("simulate", help="Monte Carlo simulation")
    p_sim.add_argument("--n", type=int, required=True)
    p_sim.add_argument("--params", required=True)
    _add_pattern_args(p_sim)
    p_sim.add_argument("--turns", required=True, help="number of turns (scientific notation ok)")
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--initial", default="random", choices=["random", "zeros", "ones"])
    p_sim.add_argument("--replications", type=int, default=1)
    p_sim.add_argument("--check-mean", default=None, metavar="auto|VALUE",
                       help="compare against the exact mean (auto) or a given value; exit 4 when flagged")
    p_sim.add_argument("--jobs", type=int, default=1)
    p_sim.add_argument("--format", default="json", choices=["json", "csv"])
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_region = sub.add_parser("region", help="scan the (p0, p3, p1) cube")
    p_region.add_argument("--n", type=int, required=True)
    _add_pattern_args(p_region)
    p_region.add_argument("--resolution", type=int, default=32)
    p_region.add_argument("--format", default="csv", choices=["csv", "json"])
    p_region.add_argument("--out", default=None, help="grid output file")
    p_region.set_defaults(func=cmd_region)

    p_erg = sub.add_parser("ergodicity", help="infinite-ring ergodicity conditions")
    p_erg.add_argument("--params", default=None)
    p_erg.add_argument("--mixture", default=None, metavar="GAMMA")
    p_erg.add_argument("--samples", default=None, help="estimate condition-region volumes instead")
    p_erg.add_argument("--seed", type=int, default=0)
    p_erg.add_argument("--out", default=None)
    p_erg.set_defaults(func=cmd_ergodicity)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UnsupportedBoundary, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (SolverFailure, NonStochastic) as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

"""Command line interface.

Subcommands:

``run``       execute one cell or a grid and write results/metadata CSV+JSON
``validate``  check a scenario file and echo the resolved configuration
``oracle``    print the brute-force enumeration of a tiny environment

Exit codes: 0 on success, 2 for configuration problems (bad flags, malformed
or invalid scenario files), 3 when a model invariant breaks mid-run.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError, InvariantViolation
from .landscape import generate_landscape, random_matrix
from .oracle import ORACLE_MAX_N, oracle_report
from .organization import INCENTIVE_PRESETS, IncentiveScheme
from .simulation import (
    GRID_INCENTIVES,
    GRID_STRATEGIES,
    GRID_STRUCTURES,
    STRATEGIES,
    ExperimentResult,
    ScenarioConfig,
    run_experiment,
    run_grid,
    write_beliefs_csv,
    write_metadata_json,
    write_results_csv,
    write_trades_csv,
)

SCENARIO_KEYS = {
    "structure", "incentive", "strategy", "n", "m", "tau", "horizon", "reps",
    "sigma", "capacity", "seed", "grid",
}
GRID_KEYS = {"structures", "incentives", "strategies"}
EMIT_TOKENS = {"csv", "json", "beliefs", "trades"}
SUMMARY_CHECKPOINTS = (100, 250, 500)


def parse_incentive(text: str) -> IncentiveScheme:
    if text in INCENTIVE_PRESETS:
        return IncentiveScheme.from_name(text)
    if text.startswith("alpha="):
        try:
            alpha = float(text[6:])
        except ValueError:
            raise ConfigError(f"cannot parse incentive weight in {text!r}") from None
        return IncentiveScheme.from_alpha(alpha)
    raise ConfigError(
        f"unknown incentive {text!r}; use one of {sorted(INCENTIVE_PRESETS)} or alpha=<value>"
    )


def parse_capacity(value) -> int | tuple[int, ...]:
    if isinstance(value, bool):
        raise ConfigError(f"capacity must be an integer or list of integers, got {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        parts = [p.strip() for p in value.split(",") if p.strip()]
        try:
            numbers = [int(p) for p in parts]
        except ValueError:
            raise ConfigError(f"cannot parse capacity {value!r}") from None
        if not numbers:
            raise ConfigError(f"cannot parse capacity {value!r}")
        return numbers[0] if len(numbers) == 1 else tuple(numbers)
    if isinstance(value, list):
        if not all(isinstance(c, int) and not isinstance(c, bool) for c in value):
            raise ConfigError(f"capacity list must hold integers, got {value!r}")
        return tuple(value)
    raise ConfigError(f"capacity must be an integer or list of integers, got {value!r}")


def load_scenario_file(path: str) -> dict:
    """Read and shape-check a JSON scenario file; values are range-checked later."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read scenario file: {exc}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: scenario file must hold a JSON object")

    unknown = sorted(set(data) - SCENARIO_KEYS)
    if unknown:
        raise ConfigError(f"{path}: unknown keys {unknown}; allowed keys are {sorted(SCENARIO_KEYS)}")

    for key in ("n", "m", "tau", "horizon", "reps", "seed"):
        if key in data and (isinstance(data[key], bool) or not isinstance(data[key], int)):
            raise ConfigError(f"{path}: {key} must be an integer, got {data[key]!r}")
    if "sigma" in data and (isinstance(data["sigma"], bool) or not isinstance(data["sigma"], (int, float))):
        raise ConfigError(f"{path}: sigma must be a number, got {data['sigma']!r}")
    for key in ("structure", "incentive", "strategy"):
        if key in data and not isinstance(data[key], str):
            raise ConfigError(f"{path}: {key} must be a string, got {data[key]!r}")
    if "grid" in data:
        grid = data["grid"]
        if not isinstance(grid, dict):
            raise ConfigError(f"{path}: grid must be an object with {sorted(GRID_KEYS)}")
        unknown = sorted(set(grid) - GRID_KEYS)
        if unknown:
            raise ConfigError(f"{path}: unknown grid keys {unknown}")
        for axis, values in grid.items():
            if not isinstance(values, list) or not values or not all(isinstance(v, str) for v in values):
                raise ConfigError(f"{path}: grid {axis} must be a non-empty list of strings")
    return data


def build_scenario(data: dict, args: argparse.Namespace) -> tuple[ScenarioConfig, dict | None]:
    """Merge file values and CLI flags (flags win) into a scenario plus grid axes."""
    merged = dict(data)
    for key in ("structure", "incentive", "strategy", "n", "m", "tau", "horizon", "reps", "sigma", "seed"):
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    if getattr(args, "capacity", None) is not None:
        merged["capacity"] = args.capacity

    grid_axes: dict | None = None
    if getattr(args, "preset", None) == "paper-grid":
        grid_axes = {
            "structures": list(GRID_STRUCTURES),
            "incentives": list(GRID_INCENTIVES),
            "strategies": list(GRID_STRATEGIES),
        }
    elif "grid" in merged:
        file_grid = merged["grid"]
        grid_axes = {
            "structures": list(file_grid.get("structures", GRID_STRUCTURES)),
            "incentives": list(file_grid.get("incentives", GRID_INCENTIVES)),
            "strategies": list(file_grid.get("strategies", GRID_STRATEGIES)),
        }
    merged.pop("grid", None)

    if grid_axes is not None:
        merged.setdefault("structure", grid_axes["structures"][0])
        merged.setdefault("incentive", grid_axes["incentives"][0])
        merged.setdefault("strategy", grid_axes["strategies"][0])
    missing = [key for key in ("structure", "incentive", "strategy") if key not in merged]
    if missing:
        raise ConfigError(f"missing required settings: {', '.join(missing)} (no defaults exist for these)")

    if isinstance(merged["incentive"], str):
        merged["incentive"] = parse_incentive(merged["incentive"])
    if "capacity" in merged:
        merged["capacity"] = parse_capacity(merged["capacity"])
    try:
        scenario = ScenarioConfig(**merged)
    except TypeError as exc:
        raise ConfigError(f"bad scenario settings: {exc}") from None
    return scenario, grid_axes


def expand_grid(base: ScenarioConfig, grid_axes: dict) -> list[ScenarioConfig]:
    """The scenarios run_grid would execute, in its enumeration order."""
    scenarios = []
    cell_index = 0
    for structure in grid_axes["structures"]:
        for incentive in grid_axes["incentives"]:
            scheme = parse_incentive(incentive)
            for strategy in grid_axes["strategies"]:
                scenarios.append(
                    replace(base, structure=structure, incentive=scheme, strategy=strategy, cell_index=cell_index)
                )
                cell_index += 1
    return scenarios


def parse_emit(text: str) -> set[str]:
    tokens = {token.strip() for token in text.split(",") if token.strip()}
    unknown = tokens - EMIT_TOKENS
    if unknown:
        raise ConfigError(f"unknown emit targets {sorted(unknown)}; choose from {sorted(EMIT_TOKENS)}")
    return tokens or {"csv", "json"}


def print_summary(results: list[ExperimentResult]) -> None:
    horizon = len(results[0].mean_norm_perf)
    checkpoints = [t for t in SUMMARY_CHECKPOINTS if t < horizon] + [horizon]
    header = f"{'cell':<40} {'reps':>5}" + "".join(f"{f't={t}':>12}" for t in checkpoints) + f"{'ci99':>12}"
    print(header)
    for result in results:
        row = f"{result.cell:<40} {result.scenario.reps:>5}"
        for t in checkpoints:
            row += f"{result.mean_norm_perf[t - 1]:>12.6f}"
        row += f"{result.final_half_width:>12.6f}"
        print(row)


def cmd_run(args: argparse.Namespace) -> int:
    data = load_scenario_file(args.scenario) if args.scenario else {}
    base, grid_axes = build_scenario(data, args)
    emit = parse_emit(args.emit)
    if args.jobs < 1:
        raise ConfigError(f"--jobs must be at least 1, got {args.jobs}")
    collect_trades = "trades" in emit
    collect_beliefs = "beliefs" in emit

    scenarios = expand_grid(base, grid_axes) if grid_axes is not None else [base]
    problems = []
    for scenario in scenarios:
        problems += [f"{scenario.cell}: {p}" for p in scenario.validate()]
    if problems:
        raise ConfigError("; ".join(problems))

    if grid_axes is not None:
        results = run_grid(
            base,
            structures=grid_axes["structures"],
            incentives=grid_axes["incentives"],
            strategies=grid_axes["strategies"],
            jobs=args.jobs,
            collect_trades=collect_trades,
            collect_beliefs=collect_beliefs,
        )
    else:
        results = [
            run_experiment(base, jobs=args.jobs, collect_trades=collect_trades, collect_beliefs=collect_beliefs)
        ]

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    if "csv" in emit:
        write_results_csv(results, out / "results.csv")
        written.append("results.csv")
    if "json" in emit:
        write_metadata_json(results, out / "metadata.json")
        written.append("metadata.json")
    if collect_trades:
        write_trades_csv(results, out / "trades.csv")
        written.append("trades.csv")
    if collect_beliefs:
        write_beliefs_csv(results, out / "beliefs.csv")
        written.append("beliefs.csv")

    print_summary(results)
    print(f"wrote {', '.join(written)} to {out}")
    return 0


def cmd_validate(args: argparse.Namespace) -> int:
    try:
        data = load_scenario_file(args.scenario)
        base, grid_axes = build_scenario(data, args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    scenarios = expand_grid(base, grid_axes) if grid_axes is not None else [base]
    problems = []
    for scenario in scenarios:
        problems += [f"{scenario.cell}: {p}" for p in scenario.validate()]
    if problems:
        for problem in problems:
            print(f"error: {problem}", file=sys.stderr)
        return 2
    resolved = {
        "cells": [
            {
                "cell": s.cell,
                "structure": s.structure,
                "incentive": {"name": s.incentive.name, "alpha": s.incentive.alpha, "beta": s.incentive.beta},
                "strategy": s.strategy,
                "n": s.n,
                "m": s.m,
                "tau": s.tau,
                "horizon": s.horizon,
                "reps": s.reps,
                "sigma": s.sigma,
                "capacity": list(s.resolved_capacities()),
                "seed": s.seed,
            }
            for s in scenarios
        ]
    }
    print(json.dumps(resolved, indent=2, sort_keys=True))
    print(f"ok: {len(scenarios)} cell(s)", file=sys.stderr)
    return 0


def cmd_oracle(args: argparse.Namespace) -> int:
    if args.n > ORACLE_MAX_N:
        raise ConfigError(f"oracle enumeration is limited to n <= {ORACLE_MAX_N}, got n={args.n}")
    rng = np.random.default_rng(args.seed)
    matrix = random_matrix(args.n, args.k, rng)
    landscape = generate_landscape(matrix, rng)
    report = oracle_report(landscape)

    print(f"n={report['n']} seed={args.seed} k={args.k}")
    for j in range(report["n"]):
        print(f"decision {j} depends on {report['dependencies'][str(j)]}")
    print()
    print("config " + " ".join(f"{f'f{j}':>19}" for j in range(report["n"])) + f"{'performance':>21}")
    for row in report["configs"]:
        cells = " ".join(f"{value:>19.17f}" for value in row["contributions"])
        print(f"{row['config']:>6} {cells} {row['performance']:>21.17f}")
    print()
    optimum = report["optimum"]
    print(f"optimum config={optimum['config']} performance={optimum['performance']!r}")

    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "oracle.json", "w", encoding="utf-8") as fh:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        print(f"wrote oracle.json to {out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="orgsim", description="Self-organizing task allocation simulator")
    parser.add_argument("--version", action="version", version=f"orgsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run one cell or a grid and write results")
    run.add_argument("scenario", nargs="?", help="JSON scenario file (flags override file values)")
    run.add_argument("--preset", choices=["paper-grid"], help="run the full 18-cell reference grid")
    run.add_argument("--structure", help="k2, k5, or file:<path>")
    run.add_argument("--incentive", help=f"one of {sorted(INCENTIVE_PRESETS)} or alpha=<value>")
    run.add_argument("--strategy", choices=list(STRATEGIES), help="auction strategy or benchmark")
    run.add_argument("--n", type=int, help="number of decisions")
    run.add_argument("--m", type=int, help="number of agents")
    run.add_argument("--reps", type=int, help="replications per cell")
    run.add_argument("--horizon", type=int, help="periods per replication")
    run.add_argument("--tau", type=int, help="auction interval")
    run.add_argument("--sigma", type=float, help="bid noise standard deviation")
    run.add_argument("--capacity", help="per-agent capacity: one integer or m comma-separated integers")
    run.add_argument("--seed", type=int, help="master seed")
    run.add_argument("--jobs", type=int, default=1, help="worker processes (default 1)")
    run.add_argument("--out", default="results", help="output directory (default: results)")
    run.add_argument("--emit", default="csv,json", help="comma list from csv,json,beliefs,trades")
    run.set_defaults(func=cmd_run)

    validate = sub.add_parser("validate", help="check a scenario file without running it")
    validate.add_argument("scenario", help="JSON scenario file")
    validate.set_defaults(func=cmd_validate)

    oracle = sub.add_parser("oracle", help="print the brute-force tables for a tiny environment")
    oracle.add_argument("--n", type=int, default=3, help=f"decisions (max {ORACLE_MAX_N})")
    oracle.add_argument("--k", type=int, default=1, help="dependencies per decision")
    oracle.add_argument("--seed", type=int, default=0, help="generator seed")
    oracle.add_argument("--out", help="also write oracle.json to this directory")
    oracle.set_defaults(func=cmd_oracle)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except InvariantViolation as exc:
        print(f"invariant violation: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    raise SystemExit(main())

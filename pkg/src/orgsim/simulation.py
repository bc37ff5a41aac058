"""Replication engine, experiment harness, and result serialization.

A replication draws a fresh landscape, allocates decisions to agents, and runs
``horizon`` periods. In ordinary periods every agent evaluates one random
single-flip neighbor of its own decisions against the status quo (residual
decisions frozen at the previous period), all adopted flips land
simultaneously, and adopting agents book one belief observation per other
owned decision. In auction periods (every ``tau`` periods, unless the strategy
is ``benchmark``) agents trade decisions instead of flipping them; the
configuration carries over unchanged, so performance repeats the previous
period's value exactly.

Performance is reported normalized by the landscape's exhaustive optimum, so
values live in (0, 1] and 1.0 means the global optimum was found. Experiments
aggregate ``reps`` independent replications into a per-period mean and a 99
percent confidence half-width.

Randomness is split into per-role streams seeded as
``SeedSequence(master_seed, spawn_key=(cell_index, rep_index, role))``. Every
replication is therefore self-contained: results are byte-identical no matter
how replications are distributed over worker processes.

The period loop is hand-inlined for speed (table lookups on plain lists, no
array allocation per agent); ``tests/test_simulation.py`` pins it to a slow
reference replication composed from the public ops, to exact float equality.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .auction import (
    STRATEGY_INTERDEPENDENCE,
    STRATEGY_UTILITY,
    TradeRecord,
    clear_auction,
    select_offer_interdependence,
    select_offer_utility,
)
from .errors import ConfigError, InvariantViolation
from .landscape import (
    DECOMPOSABLE_K2,
    NONDECOMPOSABLE_K5,
    InteractionMatrix,
    Landscape,
    build_stylized_matrix,
    generate_landscape,
    load_matrix,
)
from .learning import BeliefCounters, init_beliefs, update_beliefs
from .organization import AgentState, IncentiveScheme, initial_allocation, mirrored_allocation

STRATEGY_BENCHMARK = "benchmark"
STRATEGIES = (STRATEGY_UTILITY, STRATEGY_INTERDEPENDENCE, STRATEGY_BENCHMARK)

STRUCTURE_K2 = "k2"
STRUCTURE_K5 = "k5"

# Stream roles: one independent generator per concern and replication.
ROLE_LANDSCAPE = 0
ROLE_INIT = 1
ROLE_HILLCLIMB = 2
ROLE_NOISE = 3
ROLE_TIEBREAK = 4
ROLE_NAMES = {
    ROLE_LANDSCAPE: "landscape",
    ROLE_INIT: "init",
    ROLE_HILLCLIMB: "hillclimb",
    ROLE_NOISE: "bid_noise",
    ROLE_TIEBREAK: "tie_breaks",
}

# z-value for the 99 percent confidence interval.
CI99_Z = 2.576

GRID_STRUCTURES = (STRUCTURE_K2, STRUCTURE_K5)
GRID_INCENTIVES = ("individualistic", "balanced", "altruistic")
GRID_STRATEGIES = (STRATEGY_UTILITY, STRATEGY_INTERDEPENDENCE, STRATEGY_BENCHMARK)


def replication_rng(master_seed: int, cell_index: int, rep_index: int, role: int) -> np.random.Generator:
    """Independent generator for one (cell, replication, role) triple."""
    return np.random.default_rng(np.random.SeedSequence(master_seed, spawn_key=(cell_index, rep_index, role)))


@dataclass(frozen=True)
class ScenarioConfig:
    """Full description of one experiment cell.

    ``structure`` is ``"k2"``, ``"k5"``, or ``"file:<path>"``; ``strategy`` is
    ``"utility"``, ``"interdependence"``, or ``"benchmark"``. All numeric
    defaults follow the reference parameterization.
    """

    structure: str
    incentive: IncentiveScheme
    strategy: str
    n: int = 15
    m: int = 5
    tau: int = 25
    horizon: int = 500
    reps: int = 800
    sigma: float = 0.05
    capacity: int | tuple[int, ...] = 5
    seed: int = 0
    cell_index: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.capacity, (list, tuple)):
            object.__setattr__(self, "capacity", tuple(int(c) for c in self.capacity))

    def resolved_capacities(self) -> tuple[int, ...]:
        if isinstance(self.capacity, tuple):
            return self.capacity
        return (int(self.capacity),) * self.m

    @property
    def cell(self) -> str:
        structure = self.structure
        if structure.startswith("file:"):
            structure = Path(structure[5:]).stem
        return f"{structure}-{self.incentive.name}-{self.strategy}"

    def validate(self) -> list[str]:
        """Collect every violation instead of stopping at the first."""
        problems: list[str] = []
        if self.strategy not in STRATEGIES:
            problems.append(f"strategy must be one of {STRATEGIES}, got {self.strategy!r}")
        if self.n < 1:
            problems.append(f"n must be positive, got {self.n}")
        if self.m < 1:
            problems.append(f"m must be positive, got {self.m}")
        if self.n >= 1 and self.m >= 1 and self.n % self.m != 0:
            problems.append(f"n={self.n} must be divisible by m={self.m} for the equal initial split")
        if self.tau < 2:
            problems.append(f"tau must be at least 2, got {self.tau}")
        if self.horizon < 1:
            problems.append(f"horizon must be positive, got {self.horizon}")
        if self.reps < 1:
            problems.append(f"reps must be positive, got {self.reps}")
        if self.sigma < 0:
            problems.append(f"sigma must be nonnegative, got {self.sigma}")
        if self.seed < 0:
            problems.append(f"seed must be nonnegative, got {self.seed}")
        if self.cell_index < 0:
            problems.append(f"cell_index must be nonnegative, got {self.cell_index}")

        caps = self.resolved_capacities()
        if len(caps) != self.m:
            problems.append(f"expected {self.m} capacities, got {len(caps)}")
        elif any(c < 1 for c in caps):
            problems.append(f"capacities must be positive, got {caps}")
        elif self.m >= 1 and self.n % self.m == 0 and min(caps) < self.n // self.m:
            problems.append(
                f"equal share {self.n // self.m} exceeds the smallest capacity {min(caps)}"
            )

        if self.m == 1 and self.incentive.alpha != 1.0:
            problems.append("a single agent has no residual; alpha must be 1.0 when m=1")

        try:
            matrix = resolve_matrix(self)
        except ConfigError as exc:
            problems.append(str(exc))
        else:
            if matrix.n != self.n:
                problems.append(f"structure defines {matrix.n} decisions but scenario says n={self.n}")
        return problems


def resolve_matrix(scenario: ScenarioConfig) -> InteractionMatrix:
    """Build the interaction matrix the scenario's structure token names."""
    token = scenario.structure
    if token == STRUCTURE_K2:
        return build_stylized_matrix(DECOMPOSABLE_K2, scenario.n)
    if token == STRUCTURE_K5:
        return build_stylized_matrix(NONDECOMPOSABLE_K5, scenario.n)
    if token.startswith("file:"):
        return load_matrix(token[5:])
    raise ConfigError(f"unknown structure {token!r}; use 'k2', 'k5', or 'file:<path>'")


@dataclass(frozen=True, slots=True)
class PeriodRecord:
    period: int
    performance: float
    normalized: float
    sizes: tuple[int, ...]
    trades: int


@dataclass(eq=False)
class ReplicationResult:
    records: list[PeriodRecord]
    trades: list[TradeRecord]
    agents: list[AgentState]
    observation_counts: list[int]
    optimum_performance: float
    belief_snapshots: list[tuple[int, list[BeliefCounters]]] = field(default_factory=list)

    @property
    def normalized_series(self) -> np.ndarray:
        return np.array([rec.normalized for rec in self.records], dtype=np.float64)


def run_replication(
    scenario: ScenarioConfig,
    rep_index: int,
    matrix: InteractionMatrix | None = None,
    collect_beliefs: bool = False,
) -> ReplicationResult:
    """Run one replication; see the module docstring for the period semantics."""
    if matrix is None:
        matrix = resolve_matrix(scenario)
    n, m = scenario.n, scenario.m
    tau = scenario.tau
    sigma = scenario.sigma
    strategy = scenario.strategy
    alpha, beta = scenario.incentive.alpha, scenario.incentive.beta

    rng_land = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_LANDSCAPE)
    rng_init = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_INIT)
    rng_hc = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_HILLCLIMB)
    rng_noise = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_NOISE)
    rng_tie = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_TIEBREAK)

    land = generate_landscape(matrix, rng_land)
    optimum = land.optimum_performance
    caps = scenario.resolved_capacities()
    if strategy == STRATEGY_BENCHMARK:
        owned_lists = mirrored_allocation(n, m)
    else:
        owned_lists = initial_allocation(n, m, caps, rng_init)
    agents = [AgentState(a, owned_lists[a], caps[a], init_beliefs(n)) for a in range(m)]
    bits = [int(b) for b in rng_init.integers(0, 2, size=n)]

    # Hot-loop views of the landscape: plain lists beat ndarray indexing here.
    orders = land._orders
    tables = [table.tolist() for table in land.tables]
    dependents = [matrix.dependents(i) for i in range(n)]

    contribs = []
    for j in range(n):
        index = 0
        for i in orders[j]:
            index = (index << 1) | bits[i]
        contribs.append(tables[j][index])

    records: list[PeriodRecord] = []
    trades: list[TradeRecord] = []
    snapshots: list[tuple[int, list[BeliefCounters]]] = []
    observations = [0] * m

    for t in range(1, scenario.horizon + 1):
        owner = [0] * n
        for agent in agents:
            for d in agent.owned:
                owner[d] = agent.id

        if t % tau == 0 and strategy != STRATEGY_BENCHMARK:
            offers = []
            for agent in agents:
                if strategy == STRATEGY_UTILITY:
                    offer = select_offer_utility(agent, land, bits, rng_tie)
                else:
                    offer = select_offer_interdependence(agent, rng_tie)
                if offer is not None:
                    offers.append(offer)
            round_trades = clear_auction(offers, agents, strategy, land, bits, sigma, rng_noise, rng_tie, t)
            trades.extend(round_trades)
            trade_count = len(round_trades)
            _check_allocation(agents, n, rep_index, t)
        else:
            flips: list[tuple[AgentState, int]] = []
            for agent in agents:
                owned = agent.owned
                aid = agent.id
                pos = int(rng_hc.integers(len(owned)))
                flip = owned[pos]

                own_sum = 0.0
                for d in owned:
                    own_sum += contribs[d]
                res_sum = 0.0
                for d in range(n):
                    if owner[d] != aid:
                        res_sum += contribs[d]
                n_res = n - len(owned)
                res_mean = res_sum / n_res if n_res else 0.0
                status_quo = alpha * (own_sum / len(owned)) + beta * res_mean

                candidate = contribs.copy()
                bits[flip] ^= 1
                for j in dependents[flip]:
                    index = 0
                    for i in orders[j]:
                        index = (index << 1) | bits[i]
                    candidate[j] = tables[j][index]
                bits[flip] ^= 1

                own_sum = 0.0
                for d in owned:
                    own_sum += candidate[d]
                res_sum = 0.0
                for d in range(n):
                    if owner[d] != aid:
                        res_sum += candidate[d]
                res_mean = res_sum / n_res if n_res else 0.0
                challenger = alpha * (own_sum / len(owned)) + beta * res_mean

                if challenger > status_quo:
                    flips.append((agent, flip))

            if flips:
                previous = contribs
                for _, flip in flips:
                    bits[flip] ^= 1
                contribs = []
                for j in range(n):
                    index = 0
                    for i in orders[j]:
                        index = (index << 1) | bits[i]
                    contribs.append(tables[j][index])
                for agent, flip in flips:
                    before = {j: previous[j] for j in agent.owned}
                    after = {j: contribs[j] for j in agent.owned}
                    update_beliefs(agent, flip, before, after)
                    observations[agent.id] += len(agent.owned) - 1
            trade_count = 0

        total = 0.0
        for value in contribs:
            total += value
        perf = total / n
        norm = perf / optimum
        if not 0.0 < norm <= 1.0:
            raise InvariantViolation(
                f"rep {rep_index}, period {t}: normalized performance {norm!r} outside (0, 1]"
            )
        records.append(PeriodRecord(t, perf, norm, tuple(len(a.owned) for a in agents), trade_count))

        if collect_beliefs and (t % tau == 0 or t == scenario.horizon):
            snapshots.append((t, [agent.beliefs.copy() for agent in agents]))

    return ReplicationResult(records, trades, agents, observations, optimum, snapshots)


def _check_allocation(agents: Sequence[AgentState], n: int, rep_index: int, t: int) -> None:
    held = sorted(d for agent in agents for d in agent.owned)
    if held != list(range(n)):
        raise InvariantViolation(f"rep {rep_index}, period {t}: owned sets do not partition the decisions")
    for agent in agents:
        if not 1 <= len(agent.owned) <= agent.capacity:
            raise InvariantViolation(
                f"rep {rep_index}, period {t}: agent {agent.id} holds {len(agent.owned)} decisions"
            )


@dataclass(eq=False)
class ExperimentResult:
    """Aggregated output of one cell: per-period mean and CI99 half-width."""

    scenario: ScenarioConfig
    cell: str
    mean_norm_perf: np.ndarray
    ci99_half_width: np.ndarray
    trades: list[tuple[int, TradeRecord]] | None = None
    belief_snapshots: list[tuple[int, int, list[BeliefCounters]]] | None = None

    @property
    def final_mean(self) -> float:
        return float(self.mean_norm_perf[-1])

    @property
    def final_half_width(self) -> float:
        return float(self.ci99_half_width[-1])


def aggregate_norm_series(series: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Mean and 99 percent CI half-width across replications (rows)."""
    reps = series.shape[0]
    mean = series.mean(axis=0)
    if reps < 2:
        return mean, np.zeros_like(mean)
    half_width = CI99_Z * series.std(axis=0, ddof=1) / math.sqrt(reps)
    return mean, half_width


def _replication_payload(task: tuple[ScenarioConfig, int, InteractionMatrix, bool, bool]):
    scenario, rep, matrix, want_trades, want_beliefs = task
    result = run_replication(scenario, rep, matrix=matrix, collect_beliefs=want_beliefs)
    trades = result.trades if want_trades else None
    beliefs = result.belief_snapshots if want_beliefs else None
    return result.normalized_series, trades, beliefs


def run_experiment(
    scenario: ScenarioConfig,
    jobs: int = 1,
    collect_trades: bool = False,
    collect_beliefs: bool = False,
) -> ExperimentResult:
    """Run all replications of one cell and aggregate them.

    ``jobs`` > 1 distributes replications over worker processes; because every
    replication owns its seed streams, the output does not depend on ``jobs``.
    """
    problems = scenario.validate()
    if problems:
        raise ConfigError("invalid scenario: " + "; ".join(problems))
    matrix = resolve_matrix(scenario)

    series = np.empty((scenario.reps, scenario.horizon), dtype=np.float64)
    trades: list[tuple[int, TradeRecord]] = []
    beliefs: list[tuple[int, int, list[BeliefCounters]]] = []
    tasks = [(scenario, rep, matrix, collect_trades, collect_beliefs) for rep in range(scenario.reps)]

    def consume(payloads) -> None:
        for rep, (norm, rep_trades, rep_beliefs) in enumerate(payloads):
            series[rep] = norm
            if collect_trades and rep_trades:
                trades.extend((rep, trade) for trade in rep_trades)
            if collect_beliefs and rep_beliefs:
                beliefs.extend((rep, period, counters) for period, counters in rep_beliefs)

    if jobs <= 1:
        consume(map(_replication_payload, tasks))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as executor:
            consume(executor.map(_replication_payload, tasks))

    mean, half_width = aggregate_norm_series(series)
    return ExperimentResult(
        scenario=scenario,
        cell=scenario.cell,
        mean_norm_perf=mean,
        ci99_half_width=half_width,
        trades=trades if collect_trades else None,
        belief_snapshots=beliefs if collect_beliefs else None,
    )


def run_grid(
    base: ScenarioConfig,
    structures: Sequence[str] = GRID_STRUCTURES,
    incentives: Sequence[str | IncentiveScheme] = GRID_INCENTIVES,
    strategies: Sequence[str] = GRID_STRATEGIES,
    jobs: int = 1,
    collect_trades: bool = False,
    collect_beliefs: bool = False,
) -> list[ExperimentResult]:
    """Run the cross of structures x incentives x strategies.

    Cells are enumerated in that nesting order and numbered sequentially, so a
    given grid always maps to the same cell indices and seed streams.
    """
    results = []
    cell_index = 0
    for structure in structures:
        for incentive in incentives:
            scheme = incentive if isinstance(incentive, IncentiveScheme) else IncentiveScheme.from_name(incentive)
            for strategy in strategies:
                scenario = replace(
                    base, structure=structure, incentive=scheme, strategy=strategy, cell_index=cell_index
                )
                results.append(
                    run_experiment(scenario, jobs=jobs, collect_trades=collect_trades, collect_beliefs=collect_beliefs)
                )
                cell_index += 1
    return results


def write_results_csv(results: Sequence[ExperimentResult], path: str | Path) -> None:
    """Per-period aggregates, one row per (cell, period).

    Floats are written with ``repr`` (shortest round-trip form), which keeps
    repeated runs byte-identical.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["cell", "period", "mean_norm_perf", "ci99_half_width"])
        for result in results:
            for t, (mean, half_width) in enumerate(zip(result.mean_norm_perf, result.ci99_half_width), start=1):
                writer.writerow([result.cell, t, repr(float(mean)), repr(float(half_width))])


def write_metadata_json(results: Sequence[ExperimentResult], path: str | Path) -> None:
    """Sidecar with everything needed to reproduce the run exactly."""
    cells = []
    for result in results:
        scenario = result.scenario
        matrix = resolve_matrix(scenario)
        cells.append(
            {
                "cell": result.cell,
                "cell_index": scenario.cell_index,
                "structure": scenario.structure,
                "dependencies": {str(j): matrix.dependencies(j) for j in range(matrix.n)},
                "incentive": {"name": scenario.incentive.name, "alpha": scenario.incentive.alpha,
                              "beta": scenario.incentive.beta},
                "strategy": scenario.strategy,
                "n": scenario.n,
                "m": scenario.m,
                "tau": scenario.tau,
                "horizon": scenario.horizon,
                "reps": scenario.reps,
                "sigma": scenario.sigma,
                "capacity": list(scenario.resolved_capacities()),
                "seed": scenario.seed,
            }
        )
    payload = {
        "version": __version__,
        "rng": {
            "generator": "numpy.random.PCG64 via default_rng",
            "scheme": "SeedSequence(master_seed, spawn_key=(cell_index, rep_index, role))",
            "roles": {str(role): name for role, name in ROLE_NAMES.items()},
        },
        "ci": {"level": 0.99, "z": CI99_Z},
        "cells": cells,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_trades_csv(results: Sequence[ExperimentResult], path: str | Path) -> None:
    """Trade ledger; requires experiments run with ``collect_trades=True``.

    Grid runs prefix a ``cell`` column so ledgers from different cells stay
    distinguishable.
    """
    grid = len(results) > 1
    header = ["rep", "period", "decision", "seller", "winner", "winning_bid", "price", "strategy"]
    if grid:
        header = ["cell"] + header
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for result in results:
            if result.trades is None:
                raise ValueError(f"cell {result.cell} was run without collect_trades")
            for rep, trade in result.trades:
                row = [rep, trade.period, trade.decision, trade.seller, trade.winner,
                       repr(float(trade.winning_bid)), repr(float(trade.price)), result.scenario.strategy]
                if grid:
                    row = [result.cell] + row
                writer.writerow(row)


def write_beliefs_csv(results: Sequence[ExperimentResult], path: str | Path) -> None:
    """Belief counter dump; requires experiments run with ``collect_beliefs=True``."""
    grid = len(results) > 1
    header = ["rep", "period", "agent", "i", "j", "p", "q", "belief"]
    if grid:
        header = ["cell"] + header
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for result in results:
            if result.belief_snapshots is None:
                raise ValueError(f"cell {result.cell} was run without collect_beliefs")
            for rep, period, counters_by_agent in result.belief_snapshots:
                for agent_id, counters in enumerate(counters_by_agent):
                    n = counters.p.shape[0]
                    for i in range(n):
                        for j in range(n):
                            if i == j:
                                continue
                            p = int(counters.p[i, j])
                            q = int(counters.q[i, j])
                            row = [rep, period, agent_id, i, j, p, q, repr(p / (p + q))]
                            if grid:
                                row = [result.cell] + row
                            writer.writerow(row)

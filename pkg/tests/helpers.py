"""Shared fixtures-in-code for the test suite.

``reference_replication`` re-derives a full replication purely from the public
ops (hillclimb_step, assemble_configuration, update_beliefs, clear_auction,
performance), consuming generator draws in the documented order. The engine's
optimized loop must match it to exact float equality.
"""

import numpy as np

from orgsim import (
    AgentState,
    InteractionMatrix,
    Landscape,
    PeriodRecord,
    ScenarioConfig,
    assemble_configuration,
    clear_auction,
    contribution,
    hillclimb_step,
    init_beliefs,
    initial_allocation,
    mirrored_allocation,
    performance,
    replication_rng,
    resolve_matrix,
    select_offer_interdependence,
    select_offer_utility,
    update_beliefs,
)
from orgsim.simulation import (
    ROLE_HILLCLIMB,
    ROLE_INIT,
    ROLE_LANDSCAPE,
    ROLE_NOISE,
    ROLE_TIEBREAK,
    STRATEGY_BENCHMARK,
    STRATEGY_UTILITY,
)
from orgsim.landscape import generate_landscape


def make_agent(aid, owned, capacity=10, n=8):
    return AgentState(aid, list(owned), capacity, init_beliefs(n))


def k0_landscape(values):
    """Independent decisions with explicit (off, on) contribution pairs."""
    n = len(values)
    matrix = InteractionMatrix(np.eye(n, dtype=bool))
    tables = [np.array(pair, dtype=np.float64) for pair in values]
    return Landscape(matrix=matrix, tables=tables)


def reference_replication(scenario: ScenarioConfig, rep_index: int):
    """Slow twin of orgsim.simulation.run_replication, composed from public ops."""
    matrix = resolve_matrix(scenario)
    rng_land = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_LANDSCAPE)
    rng_init = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_INIT)
    rng_hc = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_HILLCLIMB)
    rng_noise = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_NOISE)
    rng_tie = replication_rng(scenario.seed, scenario.cell_index, rep_index, ROLE_TIEBREAK)

    land = generate_landscape(matrix, rng_land)
    caps = scenario.resolved_capacities()
    if scenario.strategy == STRATEGY_BENCHMARK:
        owned_lists = mirrored_allocation(scenario.n, scenario.m)
    else:
        owned_lists = initial_allocation(scenario.n, scenario.m, caps, rng_init)
    agents = [AgentState(a, owned_lists[a], caps[a], init_beliefs(scenario.n)) for a in range(scenario.m)]
    config = [int(b) for b in rng_init.integers(0, 2, size=scenario.n)]

    records = []
    trades = []
    for t in range(1, scenario.horizon + 1):
        if t % scenario.tau == 0 and scenario.strategy != STRATEGY_BENCHMARK:
            offers = []
            for agent in agents:
                if scenario.strategy == STRATEGY_UTILITY:
                    offer = select_offer_utility(agent, land, config, rng_tie)
                else:
                    offer = select_offer_interdependence(agent, rng_tie)
                if offer is not None:
                    offers.append(offer)
            round_trades = clear_auction(
                offers, agents, scenario.strategy, land, config, scenario.sigma, rng_noise, rng_tie, t
            )
            trades.extend(round_trades)
            trade_count = len(round_trades)
        else:
            moves = [hillclimb_step(agent, land, config, scenario.incentive, rng_hc) for agent in agents]
            merged = assemble_configuration(
                [(agent.owned, values) for agent, (values, _) in zip(agents, moves)], scenario.n
            )
            for agent, (_, flip) in zip(agents, moves):
                if flip is not None:
                    before = {j: contribution(land, config, j) for j in agent.owned}
                    after = {j: contribution(land, merged, j) for j in agent.owned}
                    update_beliefs(agent, flip, before, after)
            config = [int(b) for b in merged]
            trade_count = 0

        perf = performance(land, config)
        records.append(
            PeriodRecord(t, perf, perf / land.optimum_performance, tuple(len(a.owned) for a in agents), trade_count)
        )
    return records, trades, agents

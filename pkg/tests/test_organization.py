"""Incentives, allocations, and the synchronous hillclimbing step."""

import numpy as np
import pytest

from orgsim import (
    AgentState,
    ConfigError,
    IncentiveScheme,
    InteractionMatrix,
    Landscape,
    agent_utility,
    assemble_configuration,
    contribution,
    hillclimb_step,
    init_beliefs,
    initial_allocation,
    mirrored_allocation,
    performance,
    propose_neighbor,
    utility,
)
from orgsim.landscape import DECOMPOSABLE_K2, build_stylized_matrix, generate_landscape


def make_agent(aid, owned, capacity=10, n=8):
    return AgentState(aid, list(owned), capacity, init_beliefs(n))


def k0_landscape(values):
    """Independent decisions with explicit (off, on) contribution pairs."""
    n = len(values)
    matrix = InteractionMatrix(np.eye(n, dtype=bool))
    tables = [np.array(pair, dtype=np.float64) for pair in values]
    return Landscape(matrix=matrix, tables=tables)


class TestIncentiveScheme:
    def test_presets(self):
        assert IncentiveScheme.from_name("individualistic") == IncentiveScheme(1.0, 0.0)
        assert IncentiveScheme.from_name("balanced") == IncentiveScheme(0.5, 0.5)
        assert IncentiveScheme.from_name("altruistic") == IncentiveScheme(0.25, 0.75)

    def test_names(self):
        assert IncentiveScheme.from_name("altruistic").name == "altruistic"
        assert IncentiveScheme.from_alpha(0.7).name == "alpha0.7"

    def test_from_alpha(self):
        scheme = IncentiveScheme.from_alpha(0.6)
        assert scheme.alpha == 0.6
        assert scheme.beta == 1.0 - 0.6

    def test_unknown_preset(self):
        with pytest.raises(ConfigError, match="unknown incentive"):
            IncentiveScheme.from_name("selfless")

    @pytest.mark.parametrize("alpha, beta", [(1.2, -0.2), (-0.1, 1.1), (0.5, 0.6), (0.9, 0.0)])
    def test_invalid_weights(self, alpha, beta):
        with pytest.raises(ConfigError):
            IncentiveScheme(alpha, beta)


class TestAllocations:
    def test_initial_allocation_partitions_equally(self):
        rng = np.random.default_rng(4)
        owned = initial_allocation(15, 5, [5] * 5, rng)
        assert [len(block) for block in owned] == [3] * 5
        assert sorted(d for block in owned for d in block) == list(range(15))
        for block in owned:
            assert block == sorted(block)

    def test_initial_allocation_varies_and_reproduces(self):
        a = initial_allocation(12, 4, [3] * 4, np.random.default_rng(8))
        b = initial_allocation(12, 4, [3] * 4, np.random.default_rng(8))
        assert a == b
        seen = {tuple(tuple(block) for block in initial_allocation(12, 4, [3] * 4, np.random.default_rng(s)))
                for s in range(30)}
        assert len(seen) > 1

    @pytest.mark.parametrize("n, m, caps, fragment", [
        (15, 4, [5] * 4, "split equally"),
        (15, 5, [2] * 5, "below the equal share"),
        (15, 5, [5] * 4, "expected 5 capacities"),
        (0, 1, [1], "n >= 1"),
    ])
    def test_initial_allocation_rejects(self, n, m, caps, fragment):
        with pytest.raises(ConfigError, match=fragment):
            initial_allocation(n, m, caps, np.random.default_rng(0))

    def test_mirrored_allocation_contiguous(self):
        assert mirrored_allocation(15, 5) == [
            [0, 1, 2], [3, 4, 5], [6, 7, 8], [9, 10, 11], [12, 13, 14],
        ]

    def test_mirrored_allocation_contains_k2_blocks(self):
        matrix = build_stylized_matrix(DECOMPOSABLE_K2, 15)
        owned = mirrored_allocation(15, 5)
        for block in owned:
            for j in block:
                assert set(matrix.dependencies(j)) <= set(block)

    def test_mirrored_allocation_rejects_uneven(self):
        with pytest.raises(ConfigError):
            mirrored_allocation(10, 3)


class TestAgentState:
    def test_owned_sorted(self):
        agent = make_agent(0, [5, 1, 3])
        assert agent.owned == [1, 3, 5]

    def test_rejects_empty(self):
        with pytest.raises(ConfigError, match="at least one"):
            make_agent(0, [])

    def test_rejects_over_capacity(self):
        with pytest.raises(ConfigError, match="capacity"):
            make_agent(0, [0, 1, 2], capacity=2)


class TestUtility:
    def test_linear_weighting(self):
        scheme = IncentiveScheme.from_name("altruistic")
        assert utility(scheme, 0.4, 0.8) == 0.25 * 0.4 + 0.75 * 0.8

    def test_agent_utility_composes_performance(self):
        land = k0_landscape([(0.1, 0.9), (0.2, 0.6), (0.3, 0.7), (0.8, 0.4)])
        agent = make_agent(0, [0, 2], n=4)
        config = [1, 0, 1, 1]
        scheme = IncentiveScheme.from_name("balanced")
        expected = 0.5 * performance(land, config, [0, 2]) + 0.5 * performance(land, config, [1, 3])
        assert agent_utility(agent, land, config, scheme) == expected

    def test_agent_utility_without_residual(self):
        land = k0_landscape([(0.1, 0.9), (0.2, 0.6)])
        agent = make_agent(0, [0, 1], n=2)
        scheme = IncentiveScheme.from_name("individualistic")
        assert agent_utility(agent, land, [1, 1], scheme) == 1.0 * performance(land, [1, 1])


class TestProposeNeighbor:
    def test_flips_exactly_one_owned_bit(self):
        rng = np.random.default_rng(2)
        agent = make_agent(0, [1, 4, 6])
        config = [0, 1, 0, 1, 1, 0, 0, 1]
        for _ in range(50):
            candidate, flip = propose_neighbor(agent, config, rng)
            assert flip in agent.owned
            diff = [d for d in range(8) if candidate[d] != config[d]]
            assert diff == [flip]

    def test_uniform_over_owned(self):
        rng = np.random.default_rng(3)
        agent = make_agent(0, [0, 2, 5])
        counts = {0: 0, 2: 0, 5: 0}
        for _ in range(3000):
            _, flip = propose_neighbor(agent, [0] * 8, rng)
            counts[flip] += 1
        for count in counts.values():
            assert 850 <= count <= 1150

    def test_consumes_exactly_one_draw(self):
        agent = make_agent(0, [0, 2, 5])
        rng_a = np.random.default_rng(9)
        propose_neighbor(agent, [0] * 8, rng_a)
        rng_b = np.random.default_rng(9)
        rng_b.integers(len(agent.owned))
        assert rng_a.integers(1 << 20) == rng_b.integers(1 << 20)


class TestHillclimbStep:
    def test_adopts_strict_improvement(self):
        land = k0_landscape([(0.2, 0.9)])
        agent = make_agent(0, [0], capacity=1, n=1)
        scheme = IncentiveScheme(1.0, 0.0)
        values, flip = hillclimb_step(agent, land, [0], scheme, np.random.default_rng(0))
        assert flip == 0
        assert values == [1]

    def test_keeps_status_quo_when_worse(self):
        land = k0_landscape([(0.2, 0.9)])
        agent = make_agent(0, [0], capacity=1, n=1)
        scheme = IncentiveScheme(1.0, 0.0)
        values, flip = hillclimb_step(agent, land, [1], scheme, np.random.default_rng(0))
        assert flip is None
        assert values == [1]

    def test_tie_keeps_status_quo(self):
        land = k0_landscape([(0.5, 0.5), (0.3, 0.4)])
        agent = make_agent(0, [0], capacity=1, n=2)
        scheme = IncentiveScheme(1.0, 0.0)
        for seed in range(5):
            values, flip = hillclimb_step(agent, land, [0, 1], scheme, np.random.default_rng(seed))
            assert flip is None
            assert values == [0]

    def test_weighting_can_flip_the_decision(self):
        # flipping decision 0 helps the residual but hurts the agent's own set;
        # an individualist declines, an altruist accepts
        matrix = InteractionMatrix(np.array([[1, 0], [1, 1]], dtype=bool))
        tables = [np.array([0.6, 0.5]), np.array([0.2, 0.9, 0.1, 0.3])]
        land = Landscape(matrix=matrix, tables=tables)
        agent = make_agent(0, [0], capacity=1, n=2)
        config = [0, 1]

        values, flip = hillclimb_step(agent, land, config, IncentiveScheme(1.0, 0.0), np.random.default_rng(0))
        assert flip is None
        values, flip = hillclimb_step(agent, land, config, IncentiveScheme(0.25, 0.75), np.random.default_rng(0))
        assert flip == 0
        assert values == [1]

    def test_residual_frozen_at_previous_config(self):
        land = k0_landscape([(0.1, 0.2), (0.9, 0.1)])
        agent = make_agent(0, [0], capacity=1, n=2)
        scheme = IncentiveScheme(0.5, 0.5)
        # candidate only changes the own bit; residual contribution stays 0.9
        values, flip = hillclimb_step(agent, land, [0, 0], scheme, np.random.default_rng(1))
        assert flip == 0
        expected_gain = 0.5 * (0.2 - 0.1)
        before = agent_utility(agent, land, [0, 0], scheme)
        after = agent_utility(agent, land, [1, 0], scheme)
        assert after - before == pytest.approx(expected_gain)


class TestAssembleConfiguration:
    def test_combines_pieces(self):
        config = assemble_configuration([([0, 2], [1, 0]), ([1, 3], [0, 1])], 4)
        assert config.tolist() == [1, 0, 0, 1]

    @pytest.mark.parametrize("pieces, fragment", [
        ([([0, 1], [1, 1]), ([1, 2], [0, 0])], "more than one"),
        ([([0], [1])], "not assigned"),
        ([([0, 1], [1])], "indices"),
        ([([0, 9], [1, 1])], "out of range"),
        ([([0, 1], [1, 2])], "non-binary"),
    ])
    def test_rejects_bad_partition(self, pieces, fragment):
        with pytest.raises(ValueError, match=fragment):
            assemble_configuration(pieces, 3)


class TestSynchronousSemantics:
    def test_agents_do_not_see_each_others_moves(self):
        # both agents flip toward the same better joint state simultaneously;
        # each evaluated against the old configuration
        rng = np.random.default_rng(0)
        matrix = build_stylized_matrix(DECOMPOSABLE_K2, 6)
        land = generate_landscape(matrix, rng)
        agents = [make_agent(0, [0, 1, 2], n=6), make_agent(1, [3, 4, 5], n=6)]
        scheme = IncentiveScheme.from_name("balanced")
        config = [0, 1, 0, 1, 0, 1]

        moves = [hillclimb_step(agent, land, config, scheme, np.random.default_rng(7)) for agent in agents]
        merged = assemble_configuration(
            [(agent.owned, values) for agent, (values, _) in zip(agents, moves)], 6
        )
        for agent, (values, flip) in zip(agents, moves):
            if flip is None:
                assert [merged[d] for d in agent.owned] == [config[d] for d in agent.owned]
            else:
                assert merged[flip] == 1 - config[flip]

"""Beta-Bernoulli interdependence learning."""

import numpy as np
import pytest

from orgsim import (
    AgentState,
    belief,
    init_beliefs,
    mean_external_belief,
    mean_internal_belief,
    update_beliefs,
)


def make_agent(owned, n=8):
    return AgentState(0, list(owned), capacity=10, beliefs=init_beliefs(n))


class TestInitBeliefs:
    def test_uniform_prior(self):
        counters = init_beliefs(4)
        assert counters.p.shape == (4, 4)
        assert np.all(counters.p == 1)
        assert np.all(counters.q == 1)
        for i in range(4):
            for j in range(4):
                if i != j:
                    assert belief(counters, i, j) == 0.5

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            init_beliefs(0)

    def test_copy_is_independent(self):
        counters = init_beliefs(3)
        clone = counters.copy()
        counters.p[0, 1] += 5
        assert clone.p[0, 1] == 1


class TestBelief:
    def test_exact_ratio(self):
        counters = init_beliefs(3)
        counters.p[0, 1] = 3
        counters.q[0, 1] = 1
        assert belief(counters, 0, 1) == 0.75
        counters.p[2, 1] = 1
        counters.q[2, 1] = 3
        assert belief(counters, 2, 1) == 0.25

    def test_self_belief_undefined(self):
        with pytest.raises(ValueError, match="self"):
            belief(init_beliefs(3), 1, 1)


class TestUpdateBeliefs:
    def test_books_one_observation_per_other_owned(self):
        agent = make_agent([0, 3, 7])
        before = {0: 0.5, 3: 0.2, 7: 0.9}
        after = {0: 0.6, 3: 0.4, 7: 0.9}
        update_beliefs(agent, 0, before, after)
        counters = agent.beliefs
        assert counters.p[0, 3] == 2 and counters.q[0, 3] == 1  # changed
        assert counters.q[0, 7] == 2 and counters.p[0, 7] == 1  # unchanged
        # the flipped decision books nothing about itself
        assert counters.p[0, 0] == 1 and counters.q[0, 0] == 1
        # untouched rows stay at the prior
        assert counters.p[3, 0] == 1 and counters.q[3, 0] == 1

    def test_observation_is_exact_equality(self):
        agent = make_agent([0, 3])
        nudged = np.nextafter(0.5, 1.0)
        update_beliefs(agent, 0, {0: 0.1, 3: 0.5}, {0: 0.2, 3: nudged})
        assert agent.beliefs.p[0, 3] == 2  # one ulp difference counts as change
        agent2 = make_agent([0, 3])
        update_beliefs(agent2, 0, {0: 0.1, 3: 0.5}, {0: 0.2, 3: 0.5})
        assert agent2.beliefs.q[0, 3] == 2

    def test_rejects_foreign_flip(self):
        agent = make_agent([0, 3])
        with pytest.raises(ValueError, match="does not own"):
            update_beliefs(agent, 5, {0: 0.1, 3: 0.2}, {0: 0.1, 3: 0.2})

    def test_rejects_wrong_coverage(self):
        agent = make_agent([0, 3])
        with pytest.raises(ValueError, match="exactly"):
            update_beliefs(agent, 0, {0: 0.1}, {0: 0.1, 3: 0.2})
        with pytest.raises(ValueError, match="exactly"):
            update_beliefs(agent, 0, {0: 0.1, 3: 0.2}, {0: 0.1, 3: 0.2, 5: 0.9})

    def test_counters_accumulate(self):
        agent = make_agent([0, 1])
        for round_ in range(4):
            update_beliefs(agent, 0, {0: 0.0, 1: 0.0}, {0: 1.0, 1: round_ % 2})
        # rounds alternate: changed (1), unchanged (0 == 0.0 at start? values 0,1,0,1)
        assert agent.beliefs.p[0, 1] + agent.beliefs.q[0, 1] == 6


class TestMeanBeliefs:
    def test_internal_mean_excludes_self(self):
        agent = make_agent([1, 2, 4])
        counters = agent.beliefs
        counters.p[1, 2] = 3  # belief 0.75
        counters.p[1, 4] = 1  # belief 0.5
        assert mean_internal_belief(agent, 1) == (0.75 + 0.5) / 2

    def test_internal_needs_portfolio(self):
        agent = make_agent([1])
        with pytest.raises(ValueError, match="at least two"):
            mean_internal_belief(agent, 1)
        with pytest.raises(ValueError, match="does not own"):
            mean_internal_belief(make_agent([1, 2]), 0)

    def test_external_mean_over_all_owned(self):
        agent = make_agent([1, 2])
        counters = agent.beliefs
        counters.p[5, 1] = 3  # belief 0.75
        counters.q[5, 2] = 3  # belief 0.25
        assert mean_external_belief(agent, 5) == (0.75 + 0.25) / 2

    def test_external_rejects_owned_decision(self):
        with pytest.raises(ValueError, match="already owned"):
            mean_external_belief(make_agent([1, 2]), 1)

    def test_denominators_differ(self):
        # same counters, same target, different normalization
        agent = make_agent([1, 2, 4])
        counters = agent.beliefs
        counters.p[1, 2] = 9  # belief 0.9
        internal = mean_internal_belief(agent, 1)
        assert internal == (0.9 + 0.5) / 2

        outsider = make_agent([2, 4, 6])
        outsider.beliefs.p[1, 2] = 9
        external = mean_external_belief(outsider, 1)
        assert external == (0.9 + 0.5 + 0.5) / 3

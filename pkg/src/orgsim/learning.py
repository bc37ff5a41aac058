"""Beta-Bernoulli belief learning about decision interdependencies.

Agents carry success/failure counters ``p`` and ``q`` for every ordered
decision pair (i, j): the belief that flipping ``i`` changes the contribution
of ``j`` is ``p / (p + q)``. Counters start at 1, so every belief starts at
0.5 (a uniform prior).

An agent learns only from its own adopted flips and only about its own
decisions: after flipping ``i``, each owned ``j != i`` whose contribution
changed increments ``p[i, j]``, otherwise ``q[i, j]``. The comparison is exact
equality on contribution values. Because several agents move at once, a
contribution can change through someone else's flip and still be booked
against the agent's own flip; beliefs may therefore drift toward spurious
dependencies on their own.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np


@dataclass(eq=False)
class BeliefCounters:
    """Pairwise observation counters; entry [i, j] concerns flips of i observed on j."""

    p: np.ndarray
    q: np.ndarray

    def copy(self) -> "BeliefCounters":
        return BeliefCounters(self.p.copy(), self.q.copy())


def init_beliefs(n: int) -> BeliefCounters:
    """Uniform prior: all counters at 1, all beliefs at 0.5."""
    if n < 1:
        raise ValueError(f"need at least one decision, got n={n}")
    return BeliefCounters(np.ones((n, n), dtype=np.int64), np.ones((n, n), dtype=np.int64))


def belief(counters: BeliefCounters, i: int, j: int) -> float:
    """Believed probability that flipping decision ``i`` changes contribution ``j``."""
    if i == j:
        raise ValueError("self-beliefs are undefined; a flip always changes its own contribution")
    p = int(counters.p[i, j])
    q = int(counters.q[i, j])
    return p / (p + q)


def update_beliefs(agent, flipped: int, before: Mapping[int, float], after: Mapping[int, float]) -> None:
    """Book one own-flip observation round for ``agent``.

    ``before`` and ``after`` map the agent's owned decisions to their
    contribution values in the previous and the current period. Exactly one
    counter per owned decision other than ``flipped`` is incremented.
    """
    if flipped not in agent.owned:
        raise ValueError(f"agent {agent.id} does not own decision {flipped}")
    owned = set(agent.owned)
    if set(before) != owned or set(after) != owned:
        raise ValueError("contribution maps must cover exactly the agent's owned decisions")
    counters = agent.beliefs
    for j in agent.owned:
        if j == flipped:
            continue
        if after[j] != before[j]:
            counters.p[flipped, j] += 1
        else:
            counters.q[flipped, j] += 1


def mean_internal_belief(agent, i: int) -> float:
    """Mean belief that decision ``i`` interacts with the agent's other decisions.

    Averages belief(i, j) over owned j != i, so the denominator is one less
    than the number of owned decisions. Needs at least two owned decisions.
    """
    if i not in agent.owned:
        raise ValueError(f"agent {agent.id} does not own decision {i}")
    others = [j for j in agent.owned if j != i]
    if not others:
        raise ValueError("mean internal belief needs at least two owned decisions")
    total = 0.0
    for j in others:
        total += belief(agent.beliefs, i, j)
    return total / len(others)


def mean_external_belief(agent, i: int) -> float:
    """Mean belief that a foreign decision ``i`` interacts with the agent's decisions.

    Averages belief(i, j) over all owned j; the denominator is the number of
    owned decisions. This is the valuation a bidder places on acquiring ``i``.
    """
    if i in agent.owned:
        raise ValueError(f"decision {i} is already owned by agent {agent.id}")
    if not agent.owned:
        raise ValueError("agent owns no decisions")
    total = 0.0
    for j in agent.owned:
        total += belief(agent.beliefs, i, j)
    return total / len(agent.owned)

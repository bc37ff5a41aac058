"""Agents, incentive schemes, task allocations, and the hillclimbing step.

Each of ``m`` agents owns a disjoint subset of the ``n`` decisions. Every
period an agent evaluates exactly one random single-flip neighbor within its
own decisions against the status quo, holding everyone else's decisions fixed
at the previous period, and keeps the status quo on ties. Moves are assembled
synchronously.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ConfigError
from .landscape import Landscape, performance
from .learning import BeliefCounters

INCENTIVE_PRESETS = {
    "individualistic": (1.0, 0.0),
    "balanced": (0.5, 0.5),
    "altruistic": (0.25, 0.75),
}

# An allocation is one sorted decision list per agent, indexed by agent id.
Allocation = list[list[int]]


@dataclass(frozen=True)
class IncentiveScheme:
    """Linear incentive weights: utility = alpha * own + beta * residual."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.alpha <= 1.0 and 0.0 <= self.beta <= 1.0):
            raise ConfigError(f"incentive weights must lie in [0, 1], got alpha={self.alpha}, beta={self.beta}")
        if abs(self.alpha + self.beta - 1.0) > 1e-12:
            raise ConfigError(f"incentive weights must sum to 1, got alpha={self.alpha}, beta={self.beta}")

    @classmethod
    def from_name(cls, name: str) -> "IncentiveScheme":
        try:
            alpha, beta = INCENTIVE_PRESETS[name]
        except KeyError:
            raise ConfigError(f"unknown incentive scheme {name!r}; choose from {sorted(INCENTIVE_PRESETS)}") from None
        return cls(alpha, beta)

    @classmethod
    def from_alpha(cls, alpha: float) -> "IncentiveScheme":
        return cls(float(alpha), 1.0 - float(alpha))

    @property
    def name(self) -> str:
        for label, (alpha, beta) in INCENTIVE_PRESETS.items():
            if alpha == self.alpha and beta == self.beta:
                return label
        return f"alpha{self.alpha:g}"


@dataclass(eq=False)
class AgentState:
    """One agent: identity, owned decisions (kept sorted), capacity, beliefs."""

    id: int
    owned: list[int]
    capacity: int
    beliefs: BeliefCounters

    def __post_init__(self) -> None:
        self.owned = sorted(int(d) for d in self.owned)
        if not self.owned:
            raise ConfigError(f"agent {self.id} must own at least one decision")
        if len(self.owned) > self.capacity:
            raise ConfigError(f"agent {self.id} owns {len(self.owned)} decisions, capacity is {self.capacity}")


def initial_allocation(n: int, m: int, capacities: Sequence[int], rng: np.random.Generator) -> Allocation:
    """Random equal split: a permutation of the decisions sliced into m blocks.

    Returns per-agent sorted decision lists. Requires n divisible by m and an
    equal share that fits every capacity.
    """
    if m < 1 or n < 1:
        raise ConfigError(f"need n >= 1 and m >= 1, got n={n}, m={m}")
    if n % m != 0:
        raise ConfigError(f"n={n} decisions cannot be split equally across m={m} agents")
    share = n // m
    if len(capacities) != m:
        raise ConfigError(f"expected {m} capacities, got {len(capacities)}")
    for a, cap in enumerate(capacities):
        if cap < share:
            raise ConfigError(f"agent {a} capacity {cap} is below the equal share {share}")
    perm = rng.permutation(n)
    return [sorted(int(d) for d in perm[a * share:(a + 1) * share]) for a in range(m)]


def mirrored_allocation(n: int, m: int) -> Allocation:
    """Contiguous equal split that mirrors the block structure of the stylized matrices."""
    if m < 1 or n < 1 or n % m != 0:
        raise ConfigError(f"n={n} decisions cannot be split equally across m={m} agents")
    share = n // m
    return [list(range(a * share, (a + 1) * share)) for a in range(m)]


def utility(scheme: IncentiveScheme, own_performance: float, residual_performance: float) -> float:
    """Linear incentive utility."""
    return scheme.alpha * own_performance + scheme.beta * residual_performance


def agent_utility(agent: AgentState, landscape: Landscape, config: Sequence[int], scheme: IncentiveScheme) -> float:
    """Utility of ``agent`` under ``config``.

    The residual is every decision the agent does not own; with a single agent
    the residual is empty and contributes 0 (alpha must then be 1).
    """
    owned = set(agent.owned)
    residual = [d for d in range(landscape.n) if d not in owned]
    own_perf = performance(landscape, config, agent.owned)
    residual_perf = performance(landscape, config, residual) if residual else 0.0
    return utility(scheme, own_perf, residual_perf)


def propose_neighbor(agent: AgentState, config: Sequence[int], rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Flip one uniformly drawn owned decision; exactly one generator draw."""
    pos = int(rng.integers(len(agent.owned)))
    flip = agent.owned[pos]
    candidate = np.array(config, dtype=np.int8)
    candidate[flip] ^= 1
    return candidate, flip


def hillclimb_step(
    agent: AgentState,
    landscape: Landscape,
    config: Sequence[int],
    scheme: IncentiveScheme,
    rng: np.random.Generator,
) -> tuple[list[int], int | None]:
    """One synchronous-period move for ``agent`` against the previous configuration.

    Returns the agent's chosen values for its owned decisions (ascending) and
    the flipped decision, or None when the status quo is kept. The candidate
    must be strictly better; ties keep the status quo.
    """
    candidate, flip = propose_neighbor(agent, config, rng)
    status_quo = agent_utility(agent, landscape, config, scheme)
    challenger = agent_utility(agent, landscape, candidate, scheme)
    if status_quo >= challenger:
        return [int(config[d]) for d in agent.owned], None
    return [int(candidate[d]) for d in agent.owned], flip


def assemble_configuration(pieces: Iterable[tuple[Sequence[int], Sequence[int]]], n: int) -> np.ndarray:
    """Combine per-agent (owned indices, chosen values) pieces into one configuration.

    Validates that the pieces partition range(n): every decision set exactly once.
    """
    out = np.full(n, -1, dtype=np.int8)
    for indices, values in pieces:
        if len(indices) != len(values):
            raise ValueError(f"piece has {len(indices)} indices but {len(values)} values")
        for d, v in zip(indices, values):
            if not 0 <= d < n:
                raise ValueError(f"decision index {d} out of range for n={n}")
            if out[d] != -1:
                raise ValueError(f"decision {d} assigned by more than one agent")
            if v not in (0, 1):
                raise ValueError(f"decision {d} got non-binary value {v!r}")
            out[d] = v
    missing = np.flatnonzero(out == -1)
    if missing.size:
        raise ValueError(f"decisions {[int(d) for d in missing]} not assigned by any agent")
    return out

"""Decision reallocation through sealed-bid second-price auctions.

Every tau periods each agent owning at least two decisions puts exactly one of
them up for sale with a reserve price. All other agents with spare capacity
submit one sealed bid per offer. Offers clear sequentially in uniformly random
order against the running allocation: the highest bid wins (ties uniform), a
trade happens when the winning bid reaches the reserve, and the winner pays
the second-highest bid when that strictly exceeds the reserve, else the
reserve. Payments are bookkeeping only and never feed back into utilities.

Two offer/bid strategies exist. Under the ``utility`` strategy agents trade on
observable contribution values: sell the weakest contribution at a reserve
equal to that contribution, bid the contribution the decision currently shows
plus zero-mean normal noise. Under the ``interdependence`` strategy agents
trade on learned structure: sell the decision with the lowest mean internal
belief at that mean as reserve, bid the mean belief that the offered decision
interacts with the bidder's portfolio.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InvariantViolation
from .landscape import Landscape, contribution
from .learning import mean_external_belief, mean_internal_belief
from .organization import AgentState

STRATEGY_UTILITY = "utility"
STRATEGY_INTERDEPENDENCE = "interdependence"


@dataclass(frozen=True)
class Offer:
    seller: int
    decision: int
    min_price: float


@dataclass(frozen=True)
class Bid:
    bidder: int
    decision: int
    amount: float


@dataclass(frozen=True)
class TradeRecord:
    period: int
    decision: int
    seller: int
    winner: int
    winning_bid: float
    price: float


def _argmin_with_ties(decisions: Sequence[int], values: Sequence[float], rng: np.random.Generator) -> tuple[int, float]:
    low = min(values)
    ties = [d for d, v in zip(decisions, values) if v == low]
    if len(ties) == 1:
        return ties[0], low
    return ties[int(rng.integers(len(ties)))], low


def select_offer_utility(
    agent: AgentState, landscape: Landscape, config: Sequence[int], rng_tie: np.random.Generator
) -> Offer | None:
    """Offer the owned decision with the lowest current contribution, reserve = that contribution."""
    if len(agent.owned) < 2:
        return None
    values = [contribution(landscape, config, d) for d in agent.owned]
    decision, low = _argmin_with_ties(agent.owned, values, rng_tie)
    return Offer(agent.id, decision, low)


def select_offer_interdependence(agent: AgentState, rng_tie: np.random.Generator) -> Offer | None:
    """Offer the owned decision believed least entangled with the rest of the portfolio."""
    if len(agent.owned) < 2:
        return None
    values = [mean_internal_belief(agent, d) for d in agent.owned]
    decision, low = _argmin_with_ties(agent.owned, values, rng_tie)
    return Offer(agent.id, decision, low)


def bid_utility(
    bidder: AgentState,
    offer: Offer,
    landscape: Landscape,
    config: Sequence[int],
    sigma: float,
    rng_noise: np.random.Generator,
) -> Bid | None:
    """Bid the decision's current contribution plus N(0, sigma) noise; None when at capacity.

    The noise is unclamped, so bids can leave [0, 1].
    """
    if bidder.id == offer.seller:
        raise ValueError("sellers do not bid on their own offers")
    if len(bidder.owned) >= bidder.capacity:
        return None
    amount = contribution(landscape, config, offer.decision) + rng_noise.normal(0.0, sigma)
    return Bid(bidder.id, offer.decision, float(amount))


def bid_interdependence(bidder: AgentState, offer: Offer) -> Bid | None:
    """Bid the mean believed interaction of the offered decision with the bidder's portfolio."""
    if bidder.id == offer.seller:
        raise ValueError("sellers do not bid on their own offers")
    if len(bidder.owned) >= bidder.capacity:
        return None
    return Bid(bidder.id, offer.decision, mean_external_belief(bidder, offer.decision))


def clear_auction(
    offers: Sequence[Offer],
    agents: Sequence[AgentState],
    strategy: str,
    landscape: Landscape,
    config: Sequence[int],
    sigma: float,
    rng_noise: np.random.Generator,
    rng_tie: np.random.Generator,
    period: int,
) -> list[TradeRecord]:
    """Clear one auction round, mutating the agents' owned lists.

    Offers are processed sequentially in a uniformly random order; bidder
    eligibility (spare capacity) is re-evaluated against the running
    allocation, so a trade earlier in the pass can disqualify or qualify a
    bidder later in the pass. Bids are collected in agent id order.
    """
    if strategy not in (STRATEGY_UTILITY, STRATEGY_INTERDEPENDENCE):
        raise ValueError(f"unknown auction strategy {strategy!r}")
    trades: list[TradeRecord] = []
    order = rng_tie.permutation(len(offers))
    for position in order:
        offer = offers[int(position)]
        seller = agents[offer.seller]
        if offer.decision not in seller.owned:
            raise InvariantViolation(
                f"period {period}: offered decision {offer.decision} left agent {offer.seller} before clearing"
            )

        bids: list[Bid] = []
        for bidder in agents:
            if bidder.id == offer.seller:
                continue
            if strategy == STRATEGY_UTILITY:
                bid = bid_utility(bidder, offer, landscape, config, sigma, rng_noise)
            else:
                bid = bid_interdependence(bidder, offer)
            if bid is not None:
                bids.append(bid)
        if not bids:
            continue

        amounts = sorted((b.amount for b in bids), reverse=True)
        high = amounts[0]
        top = [b for b in bids if b.amount == high]
        winner_bid = top[0] if len(top) == 1 else top[int(rng_tie.integers(len(top)))]
        if high < offer.min_price:
            continue
        price = amounts[1] if len(amounts) > 1 and amounts[1] > offer.min_price else offer.min_price

        winner = agents[winner_bid.bidder]
        if len(winner.owned) >= winner.capacity:
            raise InvariantViolation(f"period {period}: winner {winner.id} would exceed capacity {winner.capacity}")
        if len(seller.owned) < 2:
            raise InvariantViolation(f"period {period}: seller {seller.id} would drop below one decision")
        seller.owned.remove(offer.decision)
        winner.owned.append(offer.decision)
        winner.owned.sort()
        trades.append(TradeRecord(period, offer.decision, seller.id, winner.id, winner_bid.amount, price))
    return trades

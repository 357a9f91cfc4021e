"""Coalition values and Shapley payoffs for the relays of a route.

The relays of a route form the players of a cooperative game whose worth is
the transmission power they save. ``shapley`` computes each relay's share
exactly from the weighted marginal contributions over every sub-coalition;
``shapley_oracle`` averages marginal contributions over every join order and
exists to cross-check it.

Coalitions are indexed internally by bitmask over the route's relay order
(bit ``k`` set means ``route.relays[k]`` is a member) and enumerated by
increasing mask, which keeps every computation deterministic.
"""

import itertools
import logging
import math
from typing import (
    AbstractSet,
    Callable,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
)

import numpy as np
from pydantic import BaseModel, model_validator

from fastersim.core.geometry import direct_distance, distance, tx_cost
from fastersim.models.core import CoalitionValueVariant, NodeId, Route

logger = logging.getLogger(__name__)

Coalition = AbstractSet[NodeId]
"""A subset of a route's relays."""

DEFAULT_MAX_EXACT_N = 12
MAX_ORACLE_N = 8
EFFICIENCY_TOLERANCE = 1e-9


class InvalidCoalitionError(ValueError):
    """Raised when a coalition names nodes that are not relays of the route."""


class CoalitionTooLargeError(ValueError):
    """Raised when exact Shapley computation would exceed the configured size cap."""

    def __init__(self, n: int, max_exact_n: int) -> None:
        super().__init__(
            f"Route has {n} relays; exact Shapley computation is capped at "
            f"{max_exact_n} (cost grows with 2^n)"
        )
        self.n = n
        self.max_exact_n = max_exact_n


class OracleTooLargeError(ValueError):
    """Raised when the permutation oracle is asked for more than MAX_ORACLE_N relays."""


class PayoffVector(BaseModel):
    """Per-relay Shapley shares of a route's grand-coalition value."""

    shares: Dict[NodeId, float]
    """Shapley share of each relay, in normalized saved-power units."""

    grand_value: float
    """Value of the coalition of all relays."""

    @model_validator(mode="after")
    def _efficiency(self) -> "PayoffVector":
        total = sum(self.shares.values())
        tolerance = EFFICIENCY_TOLERANCE * max(1.0, abs(self.grand_value))
        if abs(total - self.grand_value) > tolerance:
            raise ValueError(
                f"Shares sum to {total}, expected grand value {self.grand_value}"
            )
        return self

    def non_positive(self) -> List[NodeId]:
        """Relays whose share is zero or negative."""
        return [node for node, share in self.shares.items() if share <= 0]


def _check_members(route: Route, coalition: Iterable[NodeId]) -> frozenset[NodeId]:
    members = frozenset(coalition)
    strangers = members.difference(route.relays)
    if strangers:
        raise InvalidCoalitionError(
            f"Coalition members {sorted(strangers)} are not relays of route "
            f"{route.label()}"
        )
    return members


def subpath(route: Route, coalition: Coalition) -> Route:
    """The route sender → coalition members (in relay order) → destination."""
    members = _check_members(route, coalition)
    relays = tuple(node for node in route.relays if node in members)
    # A sub-path of a valid route is valid; skip re-validation.
    return route.model_copy(update={"relays": relays})


def _literal_terms(route: Route) -> Dict[NodeId, float]:
    """Per-relay term ``1 - (d_{i,i+1} / d_sr) ** 4`` of the literal reading.

    ``i + 1`` is the relay's successor on the full route, so each term depends
    on its own relay only.
    """
    positions = route.positions
    d_sr = direct_distance(route)
    path = route.path
    return {
        node: 1.0 - tx_cost(distance(positions[node], positions[path[k + 2]]), d_sr)
        for k, node in enumerate(route.relays)
    }


def _chain_value(
    route: Route,
    members: Sequence[NodeId],
    variant: CoalitionValueVariant,
    terms: Optional[Mapping[NodeId, float]] = None,
) -> float:
    """Value of the coalition *members*, which must be listed in relay order.

    *terms* are the route's literal terms when the caller already has them.
    """
    if variant is CoalitionValueVariant.LITERAL:
        if terms is None:
            terms = _literal_terms(route)
        return float(sum(terms[node] for node in members))
    positions = route.positions
    d_sr = direct_distance(route)
    chain = [route.sender, *members, route.destination]
    return 1.0 - sum(
        tx_cost(distance(positions[u], positions[v]), d_sr)
        for u, v in zip(chain, chain[1:])
    )


def coalition_value(
    route: Route,
    coalition: Coalition,
    variant: CoalitionValueVariant = CoalitionValueVariant.SAVED,
) -> float:
    """Worth v(S) of *coalition* on *route*; v of the empty coalition is 0."""
    members = _check_members(route, coalition)
    ordered = [node for node in route.relays if node in members]
    return _chain_value(route, ordered, variant)


def coalition_values(
    route: Route,
    variant: CoalitionValueVariant = CoalitionValueVariant.SAVED,
) -> np.ndarray:
    """Table of v(S) for every coalition, indexed by relay bitmask."""
    relays = route.relays
    n = len(relays)
    terms = (
        _literal_terms(route) if variant is CoalitionValueVariant.LITERAL else None
    )
    values = np.empty(1 << n, dtype=float)
    for mask in range(1 << n):
        members = [relays[k] for k in range(n) if mask >> k & 1]
        values[mask] = _chain_value(route, members, variant, terms)
    return values


def shapley_from_values(values: np.ndarray) -> np.ndarray:
    """Exact Shapley shares of a game given as a bitmask-indexed value table.

    The share of player ``i`` is the sum over coalitions ``S`` without ``i`` of
    ``|S|! (n - |S| - 1)! / n!`` times the marginal gain ``v(S ∪ {i}) - v(S)``.
    """
    size = len(values)
    n = size.bit_length() - 1
    if size != 1 << n:
        raise ValueError(f"Value table length must be a power of two: {size}")
    if n == 0:
        return np.zeros(0)
    masks = np.arange(size)
    popcount = np.array([bin(mask).count("1") for mask in range(size)])
    weights = np.array(
        [
            math.factorial(s) * math.factorial(n - s - 1) / math.factorial(n)
            for s in range(n)
        ]
    )
    shares = np.empty(n)
    for i in range(n):
        bit = 1 << i
        without = masks[(masks & bit) == 0]
        marginal = values[without | bit] - values[without]
        shares[i] = np.dot(weights[popcount[without]], marginal)
    return shares


def shapley(
    route: Route,
    variant: CoalitionValueVariant = CoalitionValueVariant.SAVED,
    max_exact_n: int = DEFAULT_MAX_EXACT_N,
) -> PayoffVector:
    """Exact Shapley payoff of every relay on *route*.

    Raises:
        CoalitionTooLargeError: If the route has more than *max_exact_n* relays.
    """
    n = route.n_relays
    if n > max_exact_n:
        raise CoalitionTooLargeError(n, max_exact_n)
    values = coalition_values(route, variant)
    shares = shapley_from_values(values)
    logger.debug("Shapley shares for %s: %s", route.label(), shares.tolist())
    return PayoffVector(
        shares={node: float(share) for node, share in zip(route.relays, shares)},
        grand_value=float(values[-1]),
    )


def permutation_average(
    players: Sequence[NodeId], value: Callable[[frozenset[NodeId]], float]
) -> Dict[NodeId, float]:
    """Average marginal contribution of each player over all join orders."""
    totals = dict.fromkeys(players, 0.0)
    orders = 0
    for order in itertools.permutations(players):
        joined: frozenset[NodeId] = frozenset()
        before = value(joined)
        for player in order:
            joined = joined | {player}
            after = value(joined)
            totals[player] += after - before
            before = after
        orders += 1
    return {player: total / orders for player, total in totals.items()}


def shapley_oracle(
    route: Route,
    variant: CoalitionValueVariant = CoalitionValueVariant.SAVED,
) -> PayoffVector:
    """Shapley payoffs by brute-force averaging over all n! join orders.

    Raises:
        OracleTooLargeError: If the route has more than MAX_ORACLE_N relays.
    """
    n = route.n_relays
    if n > MAX_ORACLE_N:
        raise OracleTooLargeError(
            f"Permutation oracle supports at most {MAX_ORACLE_N} relays, got {n}"
        )
    memo: Dict[frozenset[NodeId], float] = {}

    def value(members: frozenset[NodeId]) -> float:
        if members not in memo:
            memo[members] = coalition_value(route, members, variant)
        return memo[members]

    shares = permutation_average(route.relays, value)
    return PayoffVector(
        shares=shares, grand_value=value(frozenset(route.relays))
    )

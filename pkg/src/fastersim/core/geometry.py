"""Positions, distances and the two-ray transmission-cost model.

All powers here are normalized so that a direct sender → destination
transmission costs exactly 1. Under the two-ray ground reflection model the
required transmit power grows with the fourth power of the distance, so a hop
of length ``d`` on a route whose endpoints are ``d_sr`` apart costs
``(d / d_sr) ** 4``.
"""

import math
from typing import List

from fastersim.models.core import Position, Route

PATH_LOSS_EXPONENT = 4


class InvalidReferenceError(ValueError):
    """Raised when the normalizing reference distance is not positive."""


def distance(a: Position, b: Position) -> float:
    """Euclidean distance between two positions, in meters."""
    return math.hypot(a.x - b.x, a.y - b.y)


def tx_cost(d: float, d_ref: float) -> float:
    """Normalized transmit power for a hop of length *d*.

    Args:
        d: Hop length in meters (non-negative).
        d_ref: Reference distance whose transmission costs 1.

    Returns:
        ``(d / d_ref) ** 4``.

    Raises:
        InvalidReferenceError: If *d_ref* is not strictly positive.
    """
    if not d_ref > 0:
        raise InvalidReferenceError(f"Reference distance must be positive: {d_ref}")
    return (d / d_ref) ** PATH_LOSS_EXPONENT


def direct_distance(route: Route) -> float:
    """Sender-to-destination distance of *route*."""
    return distance(
        route.positions[route.sender], route.positions[route.destination]
    )


def hop_distances(route: Route) -> List[float]:
    """Lengths of the consecutive hops sender → relays → destination."""
    path = route.path
    return [
        distance(route.positions[u], route.positions[v])
        for u, v in zip(path, path[1:])
    ]


def path_saving(route: Route) -> float:
    """Normalized power saved by relaying along *route* instead of sending direct.

    Zero for the direct route, negative when the relays waste power.
    """
    d_sr = direct_distance(route)
    return 1.0 - sum(tx_cost(hop, d_sr) for hop in hop_distances(route))


def relay_acceptable(route: Route, epsilon_min: float = 0.0) -> bool:
    """Whether relaying along *route* strictly saves more than *epsilon_min*."""
    if epsilon_min < 0:
        raise ValueError(f"epsilon_min must be non-negative: {epsilon_min}")
    return path_saving(route) > epsilon_min

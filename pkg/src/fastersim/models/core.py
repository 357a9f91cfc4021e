"""Core domain models for fastersim.

This module defines the foundational data structures shared by the geometry,
coalition, routing and simulation engines.
- Position is a point on the flat simulation plane, in meters.
- Route is the path handed to Partnership Formation by the routing layer:
  sender, ordered relays, destination, plus the coordinates of every hop.
- The enums name the engine variants selectable from configuration.

Design:
- Models are frozen pydantic models so they can be shared freely between
  routing queries and batch workers.
- Route validates its structural invariants on construction; distance math
  lives in ``fastersim.core.geometry``.
"""

import math
from enum import Enum
from typing import Dict, Tuple

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

NodeId = int
"""Node identifiers are small non-negative integers assigned by the topology."""


class CoalitionValueVariant(str, Enum):
    """Reading of the coalition value function.

    SAVED charges every hop of the coalition's sub-path (total saved power);
    LITERAL sums the per-member terms only, omitting the sender's first hop.
    """

    SAVED = "saved"
    LITERAL = "literal"
    """Additive by construction: each term uses the relay's successor on the
    full route, not on the coalition's sub-path, so every share equals the
    relay's own term."""


class RoutingPolicy(str, Enum):
    """Objective of the stand-in routing protocol."""

    MIN_ENERGY = "min_energy"
    MIN_HOP = "min_hop"


class SimMode(str, Enum):
    """Payment scheme used by the simulator."""

    FASTER = "faster"
    BASELINE = "baseline"


class Position(BaseModel):
    """A node location on the simulation plane (meters)."""

    model_config = ConfigDict(frozen=True)

    x: float
    """Horizontal coordinate in meters."""

    y: float
    """Vertical coordinate in meters."""

    @field_validator("x", "y")
    @classmethod
    def _finite(cls, value: float) -> float:
        if not math.isfinite(value):
            raise ValueError(f"Coordinate must be finite: {value}")
        return value


class Route(BaseModel):
    """A predefined sender → relays → destination path.

    The relays are ordered from the sender towards the destination. An empty
    relay tuple is the direct route.
    """

    model_config = ConfigDict(frozen=True)

    sender: NodeId
    destination: NodeId
    relays: Tuple[NodeId, ...] = ()
    positions: Dict[NodeId, Position]
    """Coordinates for every node on the path (extra entries are allowed)."""

    @model_validator(mode="after")
    def _check_invariants(self) -> "Route":
        if self.sender == self.destination:
            raise ValueError("Route sender and destination must differ")
        if self.sender in self.relays or self.destination in self.relays:
            raise ValueError("Relays must not contain the sender or destination")
        if len(set(self.relays)) != len(self.relays):
            raise ValueError(f"Relays must be pairwise distinct: {self.relays}")
        missing = [node for node in self.path if node not in self.positions]
        if missing:
            raise ValueError(f"Missing positions for nodes: {missing}")
        if self.positions[self.sender] == self.positions[self.destination]:
            raise ValueError("Sender and destination must not share a position")
        return self

    @property
    def path(self) -> Tuple[NodeId, ...]:
        """Every node on the route in travel order."""
        return (self.sender, *self.relays, self.destination)

    @property
    def n_relays(self) -> int:
        return len(self.relays)

    def label(self) -> str:
        """Compact ``0-4-7`` rendering used in packet logs."""
        return "-".join(str(node) for node in self.path)

"""Domain models for fastersim."""

from fastersim.models.config import SimConfig
from fastersim.models.core import (
    CoalitionValueVariant,
    NodeId,
    Position,
    Route,
    RoutingPolicy,
    SimMode,
)
from fastersim.models.ledger import PacketPurse, PurseSection
from fastersim.models.results import (
    ComparisonReport,
    DropReason,
    PacketLogEntry,
    RunSummary,
    SimResult,
    TimeSeriesRow,
)

__all__ = [
    "CoalitionValueVariant",
    "ComparisonReport",
    "DropReason",
    "NodeId",
    "PacketLogEntry",
    "PacketPurse",
    "Position",
    "PurseSection",
    "Route",
    "RoutingPolicy",
    "RunSummary",
    "SimConfig",
    "SimMode",
    "SimResult",
    "TimeSeriesRow",
]

"""Simulation result models.

These hold the data behind the richness and battery-life curves: one
TimeSeriesRow per node per recorded tick, the per-packet log, drop counters
and the per-run summary statistics compared across payment modes.
"""

from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field, model_validator

from fastersim.models.config import SimConfig
from fastersim.models.core import NodeId, SimMode


class DropReason(str, Enum):
    """Why a send attempt did not reach its destination."""

    NO_ROUTE = "no-route"
    CANNOT_AFFORD = "cannot-afford"
    RELAY_REFUSED = "relay-refused"
    NEGATIVE_PAYOFF = "negative-payoff"
    NODE_DIED = "node-died"


DELIVERED = "delivered"


class TimeSeriesRow(BaseModel):
    """State of one node at the end of one tick."""

    tick: int
    node_id: NodeId
    battery: float
    """Remaining battery in joules."""
    richness: int
    """Currency counter in micro-credits."""
    alive: bool


class PacketLogEntry(BaseModel):
    """One send attempt and how it was settled."""

    tick: int
    sender: NodeId
    destination: NodeId
    route: Tuple[NodeId, ...] = ()
    """Path actually used (empty when no route was found)."""
    outcome: str
    """``delivered`` or a DropReason value."""
    charge: int = 0
    """Micro-credits debited from the sender."""
    credits: Dict[NodeId, int] = Field(default_factory=dict)
    """Micro-credits claimed by each relay."""
    refund: int = 0
    """Micro-credits returned to the sender after an abort."""

    @property
    def route_label(self) -> str:
        return "-".join(str(node) for node in self.route)


class SimResult(BaseModel):
    """Everything a run produced."""

    config: SimConfig
    time_series: List[TimeSeriesRow] = Field(default_factory=list)
    death_tick: Dict[NodeId, Optional[int]] = Field(default_factory=dict)
    """Tick during which each node's battery ran out (None for survivors)."""
    packets_sent: int = 0
    packets_delivered: int = 0
    drops: Dict[DropReason, int] = Field(
        default_factory=lambda: dict.fromkeys(DropReason, 0)
    )
    packet_log: List[PacketLogEntry] = Field(default_factory=list)

    @model_validator(mode="after")
    def _accounting(self) -> "SimResult":
        dropped = sum(self.drops.values())
        if self.packets_delivered + dropped != self.packets_sent:
            raise ValueError(
                f"delivered ({self.packets_delivered}) + dropped ({dropped}) "
                f"!= sent ({self.packets_sent})"
            )
        return self

    @property
    def packets_dropped(self) -> int:
        return sum(self.drops.values())

    def final_rows(self) -> List[TimeSeriesRow]:
        """Rows of the last recorded tick, in node order."""
        last = self.time_series[-1].tick
        return [row for row in self.time_series if row.tick == last]


class RunSummary(BaseModel):
    """Headline statistics of one run."""

    mode: SimMode
    seed: int
    richness_stddev_final: float
    """Population standard deviation of end-of-run richness (micro-credits)."""
    mean_lifetime: float
    """Mean death tick, survivors counted as ticks + 1."""
    delivery_rate: float = Field(ge=0, le=1)
    drops: Dict[DropReason, int]


class ComparisonRow(BaseModel):
    """FASTER versus baseline for one seed."""

    seed: int
    richness_stddev_final_faster: float
    richness_stddev_final_baseline: float
    mean_lifetime_faster: float
    mean_lifetime_baseline: float

    @property
    def faster_fairer(self) -> bool:
        return self.richness_stddev_final_faster < self.richness_stddev_final_baseline

    @property
    def faster_lasts_longer(self) -> bool:
        return self.mean_lifetime_faster > self.mean_lifetime_baseline


class ComparisonReport(BaseModel):
    """Per-seed comparison rows and the fraction of seeds FASTER wins."""

    n_nodes: int
    rows: List[ComparisonRow]

    @property
    def richness_win_fraction(self) -> float:
        return sum(row.faster_fairer for row in self.rows) / len(self.rows)

    @property
    def lifetime_win_fraction(self) -> float:
        return sum(row.faster_lasts_longer for row in self.rows) / len(self.rows)

"""Packet-purse models for virtual-currency allocation.

A packet purse is the header a sender attaches to a packet: the total charge
it has paid plus one section per relay stating what that relay is owed. Each
relay may only open its own section, once.

All amounts are integer micro-credits; no fractional credit exists anywhere.
"""

from typing import Annotated, List, Optional, Set

from pydantic import BaseModel, Field, model_validator

from fastersim.models.core import NodeId

CurrencyAmount = Annotated[int, Field(ge=0)]
"""A non-negative integer number of micro-credits."""


class PurseSection(BaseModel):
    """The part of a purse addressed to one relay."""

    hop_id: NodeId
    """Relay that owns this section."""

    amount: Annotated[int, Field(gt=0)]
    """Micro-credits owed to the relay."""

    prev_hop: NodeId
    """Node the relay receives the packet from."""

    hop_power: float
    """Normalized power of the transmission into this relay."""


class PacketPurse(BaseModel):
    """Currency carried by one packet from its sender to the relays."""

    sender: NodeId
    total_charge: CurrencyAmount
    sections: List[PurseSection] = Field(default_factory=list)
    claimed: Set[NodeId] = Field(default_factory=set)
    """Relays that have already opened their section."""

    refunded: CurrencyAmount = 0
    """Unclaimed micro-credits returned to the sender when the packet aborted."""

    closed: bool = False
    """Set once the purse is fully claimed or refunded."""

    @model_validator(mode="after")
    def _check_invariants(self) -> "PacketPurse":
        total = sum(section.amount for section in self.sections)
        if total != self.total_charge:
            raise ValueError(
                f"Purse total {self.total_charge} differs from section sum {total}"
            )
        hop_ids = [section.hop_id for section in self.sections]
        if len(set(hop_ids)) != len(hop_ids):
            raise ValueError(f"Duplicate purse sections: {hop_ids}")
        if not self.claimed.issubset(hop_ids):
            raise ValueError("Claimed hops must have a section")
        return self

    def section_for(self, node: NodeId) -> Optional[PurseSection]:
        """The section addressed to *node*, if any."""
        for section in self.sections:
            if section.hop_id == node:
                return section
        return None

    @property
    def unclaimed(self) -> int:
        """Micro-credits still sitting in unopened sections."""
        if self.closed:
            return 0
        return sum(
            section.amount
            for section in self.sections
            if section.hop_id not in self.claimed
        )

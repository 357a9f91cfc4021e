"""Virtual-currency ledger and the packet-purse settlement protocol.

The sender of a packet is charged up front (``debit_sender``); the charge
travels inside the purse and each relay credits itself with its own section
(``claim_section``) as it forwards. Currency is only ever moved, never created
or destroyed, so the sum of all counters plus the currency held in open purses
equals the total endowment at every point.

Design:
- Counters are plain integers (micro-credits); apportioning real-valued
  Shapley shares uses the largest-remainder method so the sections add up to
  the total charge exactly.
- The per-section access rule stands in for the per-hop encryption of the
  purse: a node can open only the section whose ``hop_id`` is its own.
"""

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Tuple

import pandas as pd

from fastersim.core.coalition import PayoffVector
from fastersim.core.geometry import direct_distance, distance, tx_cost
from fastersim.models.core import NodeId, Route
from fastersim.models.ledger import PacketPurse, PurseSection

logger = logging.getLogger(__name__)

LEDGER_COLUMNS = ["node_id", "micro_credits"]


class LedgerError(Exception):
    """Base class for currency protocol violations."""


class NonPositivePayoffError(LedgerError, ValueError):
    """Raised when a relay's payoff (or its apportioned amount) is not positive."""


class CannotAffordError(LedgerError):
    """Raised when a sender's counter cannot cover a purse."""

    def __init__(self, sender: NodeId, balance: int, charge: int) -> None:
        super().__init__(
            f"Node {sender} cannot afford charge {charge} (balance {balance})"
        )
        self.sender = sender
        self.balance = balance
        self.charge = charge


class NotAHopError(LedgerError):
    """Raised when a node claims from a purse that holds no section for it."""


class DoubleClaimError(LedgerError):
    """Raised when a relay claims its section a second time."""


class PurseClosedError(LedgerError):
    """Raised when claiming from a purse that was already settled or refunded."""


@dataclass
class Ledger:
    """Per-node currency counters plus the currency held in open purses."""

    counters: Dict[NodeId, int] = field(default_factory=dict)
    in_flight: int = 0
    """Micro-credits debited from senders but not yet claimed or refunded."""

    @classmethod
    def endowed(cls, nodes: Iterable[NodeId], amount: int) -> "Ledger":
        """A ledger giving every node the same initial *amount*."""
        if amount < 0:
            raise ValueError(f"Endowment must be non-negative: {amount}")
        return cls(counters={node: amount for node in nodes})

    def balance(self, node: NodeId) -> int:
        return self.counters.get(node, 0)

    @property
    def total_issuance(self) -> int:
        """Counters plus in-flight currency; constant under every operation."""
        return sum(self.counters.values()) + self.in_flight


def _round_half_up(value: float) -> int:
    return math.floor(value + 0.5)


def _hop_sections(route: Route, amounts: Dict[NodeId, int]) -> List[PurseSection]:
    d_sr = direct_distance(route)
    path = route.path
    return [
        PurseSection(
            hop_id=node,
            amount=amounts[node],
            prev_hop=path[k],
            hop_power=tx_cost(
                distance(route.positions[path[k]], route.positions[node]), d_sr
            ),
        )
        for k, node in enumerate(route.relays)
    ]


def apportion(raw: Dict[NodeId, float]) -> Dict[NodeId, int]:
    """Round real-valued amounts to integers that add up to the rounded total.

    Every amount starts at its floor; the leftover units go to the largest
    fractional remainders, ties to the smaller node id.
    """
    target = _round_half_up(sum(raw.values()))
    amounts = {node: math.floor(value) for node, value in raw.items()}
    leftover = target - sum(amounts.values())
    # Remainders equal up to float noise count as ties.
    by_remainder = sorted(
        raw, key=lambda node: (-round(raw[node] - amounts[node], 9), node)
    )
    for node in by_remainder[:leftover]:
        amounts[node] += 1
    return amounts


def build_purse(payoffs: PayoffVector, route: Route, weight: int) -> PacketPurse:
    """Build the purse paying each relay ``weight`` micro-credits per unit of share.

    Raises:
        ValueError: If *weight* is not positive.
        NonPositivePayoffError: If a share is not positive or rounds to zero.
    """
    if weight <= 0:
        raise ValueError(f"Currency weight must be positive: {weight}")
    if set(payoffs.shares) != set(route.relays):
        raise ValueError(
            f"Payoffs {sorted(payoffs.shares)} do not match relays {route.relays}"
        )
    refused = payoffs.non_positive()
    if refused:
        raise NonPositivePayoffError(f"Non-positive payoff for relays {refused}")
    amounts = apportion(
        {node: weight * share for node, share in payoffs.shares.items()}
    )
    starved = [node for node, amount in amounts.items() if amount <= 0]
    if starved:
        raise NonPositivePayoffError(f"Payoff rounds to zero credits for {starved}")
    return PacketPurse(
        sender=route.sender,
        total_charge=sum(amounts.values()),
        sections=_hop_sections(route, amounts),
    )


def build_flat_purse(route: Route, flat_pay: int) -> PacketPurse:
    """Purse paying every relay the same *flat_pay* regardless of contribution."""
    if flat_pay <= 0:
        raise NonPositivePayoffError(f"Flat pay must be positive: {flat_pay}")
    amounts = dict.fromkeys(route.relays, flat_pay)
    return PacketPurse(
        sender=route.sender,
        total_charge=flat_pay * route.n_relays,
        sections=_hop_sections(route, amounts),
    )


def debit_sender(ledger: Ledger, purse: PacketPurse) -> Ledger:
    """Charge the purse's sender its total; the charge is held in flight.

    Raises:
        CannotAffordError: If the sender's counter is below the total charge.
    """
    balance = ledger.balance(purse.sender)
    if balance < purse.total_charge:
        raise CannotAffordError(purse.sender, balance, purse.total_charge)
    ledger.counters[purse.sender] = balance - purse.total_charge
    ledger.in_flight += purse.total_charge
    return ledger


def claim_section(
    ledger: Ledger, purse: PacketPurse, claimant: NodeId
) -> Tuple[Ledger, PacketPurse]:
    """Credit *claimant* with its own section of *purse*.

    Raises:
        NotAHopError: If the purse holds no section for *claimant*.
        DoubleClaimError: If *claimant* already claimed.
        PurseClosedError: If the purse was refunded before *claimant* claimed.
    """
    section = purse.section_for(claimant)
    if section is None:
        raise NotAHopError(f"Node {claimant} has no section in this purse")
    if claimant in purse.claimed:
        raise DoubleClaimError(f"Node {claimant} already claimed its section")
    if purse.closed:
        raise PurseClosedError(f"Purse from {purse.sender} is closed")
    ledger.counters[claimant] = ledger.balance(claimant) + section.amount
    ledger.in_flight -= section.amount
    purse.claimed.add(claimant)
    if len(purse.claimed) == len(purse.sections):
        purse.closed = True
    return ledger, purse


def refund_unclaimed(ledger: Ledger, purse: PacketPurse) -> Ledger:
    """Return the unopened sections of an aborted packet to its sender."""
    remaining = purse.unclaimed
    if remaining:
        ledger.counters[purse.sender] = ledger.balance(purse.sender) + remaining
        ledger.in_flight -= remaining
        logger.debug("Refunded %s micro-credits to node %s", remaining, purse.sender)
    purse.refunded = remaining
    purse.closed = True
    return ledger


def write_ledger_snapshot(ledger: Ledger, path: Path) -> None:
    """Write ``node_id,micro_credits`` rows sorted by node id."""
    frame = pd.DataFrame(sorted(ledger.counters.items()), columns=LEDGER_COLUMNS)
    frame.to_csv(path, index=False, lineterminator="\n")


def read_ledger_snapshot(path: Path) -> Ledger:
    """Read counters written by :func:`write_ledger_snapshot`."""
    frame = pd.read_csv(path, dtype={"node_id": int, "micro_credits": int})
    return Ledger(
        counters={
            int(row.node_id): int(row.micro_credits)
            for row in frame.itertuples(index=False)
        }
    )

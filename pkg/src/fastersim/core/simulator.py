"""Tick-based simulation of incentivized packet relaying.

Each tick every alive node flips a biased coin; on success it sends one
packet to a uniformly chosen alive destination. In FASTER mode the sender
prices the route's relays by their Shapley share of the saved power and pays
them through a packet purse; in baseline mode every relay is paid the same
flat rate and relays low on battery refuse to forward. Every alive node then
pays its idle energy for the tick.

Design:
- A run is single-threaded and fully determined by its SimConfig: topology
  placement draws from ``default_rng(seed)`` and traffic from
  ``default_rng([seed, 1])``.
- Failures never abort a run; they become DropReason counters and packet-log
  entries.
- The ledger is authoritative for currency; ``NodeState.richness`` mirrors it
  after every settlement.
"""

import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import (
    Dict,
    FrozenSet,
    List,
    Mapping,
    Optional,
    Protocol,
    Sequence,
    Tuple,
    Union,
)

import networkx as nx
import numpy as np

from fastersim.core.coalition import CoalitionTooLargeError, shapley
from fastersim.core.geometry import distance, relay_acceptable
from fastersim.core.ledger import (
    CannotAffordError,
    Ledger,
    NonPositivePayoffError,
    build_flat_purse,
    build_purse,
    claim_section,
    debit_sender,
    refund_unclaimed,
)
from fastersim.core.topology import (
    Topology,
    find_route,
    generate_topology,
    route_from_path,
)
from fastersim.models.config import SimConfig
from fastersim.models.core import NodeId, Position, Route, SimMode
from fastersim.models.ledger import PacketPurse
from fastersim.models.results import (
    DELIVERED,
    DropReason,
    PacketLogEntry,
    SimResult,
    TimeSeriesRow,
)

logger = logging.getLogger(__name__)

TRAFFIC_STREAM = 1


class TrafficSource(Protocol):
    """The slice of ``numpy.random.Generator`` the traffic model draws from."""

    def random(self) -> float: ...

    def integers(self, high: int) -> int: ...


@dataclass
class NodeState:
    """Battery, currency and liveness of one node."""

    id: NodeId
    position: Position
    battery: float
    """Remaining energy in joules."""
    richness: int
    """Mirror of the node's ledger counter, in micro-credits."""
    alive: bool = True


@dataclass
class SimulationState:
    """Mutable state of one simulation instance."""

    config: SimConfig
    topology: Topology
    nodes: Dict[NodeId, NodeState]
    ledger: Ledger
    tick: int = 0
    """Number of completed steps."""
    packets_sent: int = 0
    packets_delivered: int = 0
    drops: Counter = field(default_factory=Counter)
    death_tick: Dict[NodeId, int] = field(default_factory=dict)
    packet_log: List[PacketLogEntry] = field(default_factory=list)
    time_series: List[TimeSeriesRow] = field(default_factory=list)
    _graph: Optional[Tuple[FrozenSet[NodeId], nx.Graph]] = None

    @classmethod
    def initial(cls, config: SimConfig, topology: Topology) -> "SimulationState":
        """Fresh state with full batteries and the uniform endowment."""
        nodes = {
            node: NodeState(
                id=node,
                position=pos,
                battery=config.initial_energy,
                richness=config.initial_richness,
            )
            for node, pos in sorted(topology.nodes.items())
        }
        state = cls(
            config=config,
            topology=topology,
            nodes=nodes,
            ledger=Ledger.endowed(nodes, config.initial_richness),
        )
        state.snapshot()
        return state

    def alive_ids(self) -> FrozenSet[NodeId]:
        return frozenset(node.id for node in self.nodes.values() if node.alive)

    def connectivity(self) -> nx.Graph:
        """Link graph over the currently alive nodes (rebuilt when one dies)."""
        alive = self.alive_ids()
        if self._graph is None or self._graph[0] != alive:
            self._graph = (alive, self.topology.graph(alive))
        return self._graph[1]

    def snapshot(self) -> None:
        """Append one TimeSeriesRow per node for the current tick."""
        self.time_series.extend(
            TimeSeriesRow(
                tick=self.tick,
                node_id=node.id,
                battery=node.battery,
                richness=node.richness,
                alive=node.alive,
            )
            for node in self.nodes.values()
        )

    def to_result(self) -> SimResult:
        return SimResult(
            config=self.config,
            time_series=self.time_series,
            death_tick={node: self.death_tick.get(node) for node in self.nodes},
            packets_sent=self.packets_sent,
            packets_delivered=self.packets_delivered,
            drops={reason: self.drops[reason] for reason in DropReason},
            packet_log=self.packet_log,
        )


def _sync_richness(state: SimulationState, *node_ids: NodeId) -> None:
    for node in node_ids:
        state.nodes[node].richness = state.ledger.balance(node)


def _spend(state: SimulationState, node: NodeState, joules: float, tick: int) -> None:
    node.battery = max(0.0, node.battery - joules)
    if node.battery == 0.0 and node.alive:
        node.alive = False
        state.death_tick[node.id] = tick
        logger.debug("Node %s ran out of energy at tick %s", node.id, tick)


def _tx_energy(config: SimConfig, hop: float) -> float:
    energy = config.p_tx * config.tick_seconds
    if config.power_control:
        energy *= (hop / config.comm_range) ** 4
    return energy


def _direct_route(state: SimulationState, route: Route) -> Optional[Route]:
    if state.topology.in_range(route.sender, route.destination):
        return route_from_path(state.topology, [route.sender, route.destination])
    return None


Plan = Union[Tuple[Route, Optional[PacketPurse]], DropReason]


def _faster_plan(state: SimulationState, route: Route, config: SimConfig) -> Plan:
    """Partnership formation: price the relays or fall back to direct sending."""
    if not route.relays:
        return route, None
    if not relay_acceptable(route, config.epsilon_min):
        refusal = DropReason.RELAY_REFUSED
    else:
        try:
            payoffs = shapley(route, config.variant, config.max_exact_n)
            return route, build_purse(payoffs, route, config.currency_weight)
        except CoalitionTooLargeError as exc:
            logger.warning("%s", exc)
            refusal = DropReason.RELAY_REFUSED
        except NonPositivePayoffError:
            refusal = DropReason.NEGATIVE_PAYOFF
    direct = _direct_route(state, route)
    if direct is None:
        return refusal
    return direct, None


def _baseline_plan(state: SimulationState, route: Route, config: SimConfig) -> Plan:
    """Flat pay for every relay; refusals happen hop by hop in ``_deliver``."""
    if not route.relays or config.flat_pay == 0:
        return route, None
    return route, build_flat_purse(route, config.flat_pay)


def _refuses(node: NodeState, config: SimConfig) -> bool:
    return (
        config.mode is SimMode.BASELINE
        and node.battery / config.initial_energy <= config.baseline_refusal_threshold
    )


def _record(
    state: SimulationState, entry: PacketLogEntry
) -> PacketLogEntry:
    if entry.outcome == DELIVERED:
        state.packets_delivered += 1
    else:
        state.drops[DropReason(entry.outcome)] += 1
        logger.debug(
            "Tick %s: packet %s -> %s dropped (%s)",
            entry.tick,
            entry.sender,
            entry.destination,
            entry.outcome,
        )
    state.packet_log.append(entry)
    return entry


def _deliver(
    state: SimulationState,
    config: SimConfig,
    tick: int,
    route: Route,
    purse: Optional[PacketPurse],
) -> PacketLogEntry:
    """Walk the packet hop by hop, charging energy and settling the purse.

    A dead hop drops the packet as ``node-died``; a baseline relay at or
    below the refusal threshold drops it as ``relay-refused`` when the packet
    reaches it. Either way the upstream hops keep their energy cost and
    their claimed sections, and the rest of the purse goes back to the
    sender.
    """
    credits: Dict[NodeId, int] = {}
    path = route.path
    for k, (u, v) in enumerate(zip(path, path[1:])):
        transmitter, receiver = state.nodes[u], state.nodes[v]
        reason: Optional[DropReason] = None
        if not (transmitter.alive and receiver.alive):
            reason = DropReason.NODE_DIED
        elif k > 0 and _refuses(transmitter, config):
            reason = DropReason.RELAY_REFUSED
            logger.debug("Relay %s refuses to forward for node %s", u, route.sender)
        if reason is not None:
            refund = 0
            if purse is not None:
                refund_unclaimed(state.ledger, purse)
                refund = purse.refunded
                _sync_richness(state, route.sender)
            return PacketLogEntry(
                tick=tick,
                sender=route.sender,
                destination=route.destination,
                route=path,
                outcome=reason.value,
                charge=purse.total_charge if purse else 0,
                credits=credits,
                refund=refund,
            )
        hop = distance(transmitter.position, receiver.position)
        _spend(state, transmitter, _tx_energy(config, hop), tick)
        if k > 0 and purse is not None:
            claim_section(state.ledger, purse, u)
            section = purse.section_for(u)
            assert section is not None
            credits[u] = section.amount
            _sync_richness(state, u)
        _spend(state, receiver, config.p_rx * config.tick_seconds, tick)
    return PacketLogEntry(
        tick=tick,
        sender=route.sender,
        destination=route.destination,
        route=path,
        outcome=DELIVERED,
        charge=purse.total_charge if purse else 0,
        credits=credits,
    )


def send_packet(
    state: SimulationState,
    sender: NodeId,
    destination: NodeId,
    config: Optional[SimConfig] = None,
) -> PacketLogEntry:
    """Attempt to send one packet and settle its payment.

    Returns the packet-log entry describing the outcome; the same entry is
    appended to ``state.packet_log``.
    """
    config = config or state.config
    tick = state.tick + 1
    state.packets_sent += 1

    def dropped(reason: DropReason, path: Tuple[NodeId, ...] = ()) -> PacketLogEntry:
        return _record(
            state,
            PacketLogEntry(
                tick=tick,
                sender=sender,
                destination=destination,
                route=path,
                outcome=reason.value,
            ),
        )

    route = find_route(
        state.topology,
        sender,
        destination,
        config.routing_policy,
        graph=state.connectivity(),
    )
    if route is None:
        return dropped(DropReason.NO_ROUTE)

    if config.mode is SimMode.FASTER:
        plan = _faster_plan(state, route, config)
    else:
        plan = _baseline_plan(state, route, config)
    if isinstance(plan, DropReason):
        return dropped(plan, route.path)
    route, purse = plan

    if purse is not None:
        try:
            debit_sender(state.ledger, purse)
        except CannotAffordError:
            return dropped(DropReason.CANNOT_AFFORD, route.path)
        _sync_richness(state, sender)
    return _record(state, _deliver(state, config, tick, route, purse))


def step(
    state: SimulationState, config: SimConfig, rng: TrafficSource
) -> SimulationState:
    """Advance the simulation by one tick."""
    if state.tick >= config.ticks:
        raise ValueError(f"Simulation already completed {config.ticks} ticks")
    tick = state.tick + 1
    for node_id in sorted(state.nodes):
        if not state.nodes[node_id].alive:
            continue
        if not rng.random() < config.p_send:
            continue
        candidates = [
            other
            for other in sorted(state.nodes)
            if other != node_id and state.nodes[other].alive
        ]
        if not candidates:
            continue
        destination = candidates[int(rng.integers(len(candidates)))]
        send_packet(state, node_id, destination, config)

    idle = config.p_idle * config.tick_seconds
    for node in state.nodes.values():
        if node.alive:
            _spend(state, node, idle, tick)
    state.tick = tick
    state.snapshot()
    return state


def simulate(config: SimConfig) -> SimulationState:
    """Run *config* to completion and return the final state."""
    topology = generate_topology(
        config.n_nodes, config.area, config.comm_range, config.seed
    )
    state = SimulationState.initial(config, topology)
    rng = np.random.default_rng([config.seed, TRAFFIC_STREAM])
    for _ in range(config.ticks):
        step(state, config, rng)
    return state


def run(config: SimConfig) -> SimResult:
    """Run a complete simulation described by *config*."""
    state = simulate(config)
    result = state.to_result()
    logger.info(
        "Run %s seed=%s: %s/%s packets delivered, %s nodes dead",
        config.mode.value,
        config.seed,
        result.packets_delivered,
        result.packets_sent,
        len(state.death_tick),
    )
    return result


def replay_richness(
    log: Sequence[PacketLogEntry], initial: Mapping[NodeId, int]
) -> Dict[NodeId, int]:
    """Recompute every node's balance from a packet log and the endowment."""
    balances = dict(initial)
    for entry in log:
        balances[entry.sender] = (
            balances.get(entry.sender, 0) - entry.charge + entry.refund
        )
        for node, amount in entry.credits.items():
            balances[node] = balances.get(node, 0) + amount
    return balances

"""Random geometric topologies and the stand-in routing protocol.

Nodes are scattered uniformly over a rectangular area; two alive nodes share a
bidirectional link when they are within communication range. Routes are
shortest paths on that connectivity graph (built with networkx), with every
tie broken deterministically so simulations are bit-reproducible.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import AbstractSet, Dict, Iterable, List, Optional, Tuple

import networkx as nx
import numpy as np
import pandas as pd

from fastersim.core.geometry import PATH_LOSS_EXPONENT, distance
from fastersim.models.core import NodeId, Position, Route, RoutingPolicy

logger = logging.getLogger(__name__)

TOPOLOGY_COLUMNS = ["node_id", "x", "y"]


class InvalidTopologyError(ValueError):
    """Raised for impossible topology parameters."""


class InvalidNodeError(ValueError):
    """Raised when a route query names an unknown node or a degenerate pair."""


@dataclass(frozen=True)
class Topology:
    """Node placement plus the radio parameters that induce the link graph."""

    nodes: Dict[NodeId, Position]
    comm_range: float
    area: Tuple[float, float]

    def __post_init__(self) -> None:
        if not self.comm_range > 0:
            raise InvalidTopologyError(
                f"Communication range must be positive: {self.comm_range}"
            )
        width, height = self.area
        outside = [
            node
            for node, pos in self.nodes.items()
            if not (0 <= pos.x <= width and 0 <= pos.y <= height)
        ]
        if outside:
            raise InvalidTopologyError(f"Nodes outside the area: {outside}")

    def in_range(self, u: NodeId, v: NodeId) -> bool:
        return distance(self.nodes[u], self.nodes[v]) <= self.comm_range

    def graph(self, alive: Optional[AbstractSet[NodeId]] = None) -> nx.Graph:
        """Connectivity graph over the alive nodes.

        Edges carry ``distance`` (meters) and ``energy`` (``distance ** 4``).
        """
        members = sorted(
            self.nodes if alive is None else set(alive).intersection(self.nodes)
        )
        graph = nx.Graph()
        graph.add_nodes_from(members)
        for k, u in enumerate(members):
            for v in members[k + 1 :]:
                d = distance(self.nodes[u], self.nodes[v])
                if d <= self.comm_range:
                    graph.add_edge(u, v, distance=d, energy=d**PATH_LOSS_EXPONENT)
        return graph


def generate_topology(
    n_nodes: int,
    area: Tuple[float, float],
    comm_range: float,
    rng_seed: int,
) -> Topology:
    """Place *n_nodes* uniformly at random over *area* using a seeded generator."""
    width, height = area
    if n_nodes < 2:
        raise InvalidTopologyError(f"Need at least 2 nodes, got {n_nodes}")
    if not (width > 0 and height > 0):
        raise InvalidTopologyError(f"Area dimensions must be positive: {area}")
    rng = np.random.default_rng(rng_seed)
    xs = rng.uniform(0.0, width, size=n_nodes)
    ys = rng.uniform(0.0, height, size=n_nodes)
    nodes = {
        node: Position(x=float(x), y=float(y))
        for node, (x, y) in enumerate(zip(xs, ys))
    }
    return Topology(nodes=nodes, comm_range=comm_range, area=(width, height))


def path_energy(topology: Topology, path: Iterable[NodeId]) -> float:
    """Sum of ``d_hop ** 4`` over the consecutive hops of *path*."""
    nodes = list(path)
    return sum(
        distance(topology.nodes[u], topology.nodes[v]) ** PATH_LOSS_EXPONENT
        for u, v in zip(nodes, nodes[1:])
    )


def route_from_path(topology: Topology, path: List[NodeId]) -> Route:
    """Wrap a node path as a Route carrying the hop coordinates."""
    return Route(
        sender=path[0],
        destination=path[-1],
        relays=tuple(path[1:-1]),
        positions={node: topology.nodes[node] for node in path},
    )


def find_route(
    topology: Topology,
    sender: NodeId,
    destination: NodeId,
    policy: RoutingPolicy = RoutingPolicy.MIN_ENERGY,
    alive: Optional[AbstractSet[NodeId]] = None,
    graph: Optional[nx.Graph] = None,
) -> Optional[Route]:
    """Best route from *sender* to *destination*, or None when disconnected.

    ``min_energy`` minimizes the summed ``d ** 4`` hop energy, then hop count,
    then the node-id sequence. ``min_hop`` minimizes hop count, then energy,
    then the node-id sequence.

    A prebuilt *graph* (from :meth:`Topology.graph`) may be passed to share
    one connectivity graph across the queries of a tick.

    Raises:
        InvalidNodeError: If either endpoint is unknown or they coincide.
    """
    for node in (sender, destination):
        if node not in topology.nodes:
            raise InvalidNodeError(f"Unknown node id: {node}")
    if sender == destination:
        raise InvalidNodeError(f"Sender and destination are the same node: {sender}")
    if graph is None:
        graph = topology.graph(alive)
    if sender not in graph or destination not in graph:
        return None
    if not nx.has_path(graph, sender, destination):
        return None

    if policy is RoutingPolicy.MIN_ENERGY:
        candidates = nx.all_shortest_paths(
            graph, sender, destination, weight="energy"
        )
        best = min(candidates, key=lambda path: (len(path), path))
    else:
        candidates = nx.all_shortest_paths(graph, sender, destination)
        best = min(
            candidates, key=lambda path: (path_energy(topology, path), path)
        )
    logger.debug("Route %s -> %s (%s): %s", sender, destination, policy.value, best)
    return route_from_path(topology, best)


def dump_topology(topology: Topology, path: Path) -> None:
    """Write ``node_id,x,y`` rows (6 decimal places) to *path*."""
    frame = pd.DataFrame(
        [(node, pos.x, pos.y) for node, pos in sorted(topology.nodes.items())],
        columns=TOPOLOGY_COLUMNS,
    )
    frame.to_csv(path, index=False, float_format="%.6f", lineterminator="\n")


def load_topology(path: Path, comm_range: float, area: Tuple[float, float]) -> Topology:
    """Read a topology written by :func:`dump_topology`."""
    frame = pd.read_csv(path)
    if list(frame.columns) != TOPOLOGY_COLUMNS:
        raise InvalidTopologyError(
            f"Unexpected topology columns in {path}: {list(frame.columns)}"
        )
    nodes = {
        int(row.node_id): Position(x=float(row.x), y=float(row.y))
        for row in frame.itertuples(index=False)
    }
    return Topology(nodes=nodes, comm_range=comm_range, area=area)

"""Core engines for fastersim.

- geometry: d^4 path loss and the relay power-saving condition.
- coalition: coalition values and exact Shapley payoffs over a route's relays.
- topology: random node placement, the connectivity graph and route selection.
- ledger: per-node currency counters and the packet-purse protocol.
- simulator: the tick loop tying the above together.
- experiment: run directories, mode comparisons and node-count sweeps.
"""

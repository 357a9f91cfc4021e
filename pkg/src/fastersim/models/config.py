"""Experiment configuration model.

SimConfig holds every parameter of one simulation run. Defaults reproduce the
reference evaluation: 20 nodes in a 500 m × 500 m area, 250 m radio range,
100 J batteries, 1.4 W transmit, 1.0 W receive and 0.83 W idle power.

Design:
- Frozen and ``extra="forbid"`` so unknown keys in config files are rejected
  by validation rather than silently ignored.
- ``baseline_flat_pay`` has no fixed default: when omitted it is derived from
  ``currency_weight`` (half a unit of saved power, rounded).
- ``distance_scaled_tx`` likewise resolves per mode when omitted; read
  ``power_control`` rather than the raw field.
"""

from typing import Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from fastersim.models.core import CoalitionValueVariant, RoutingPolicy, SimMode


class SimConfig(BaseModel):
    """Parameters of one simulation run."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_nodes: int = Field(20, ge=2)
    area_width: float = Field(500.0, gt=0)
    """Simulation area width in meters."""
    area_height: float = Field(500.0, gt=0)
    """Simulation area height in meters."""
    comm_range: float = Field(250.0, gt=0)
    """Radio range in meters."""
    ticks: int = Field(200, ge=0)
    p_send: float = Field(0.1, ge=0, le=1)
    """Per-tick probability that an alive node sends a packet."""
    mode: SimMode = SimMode.FASTER
    variant: CoalitionValueVariant = CoalitionValueVariant.SAVED
    epsilon_min: float = Field(0.0, ge=0)
    """Minimum normalized saving a relayed route must strictly exceed."""
    currency_weight: int = Field(1000, gt=0)
    """Micro-credits paid per unit of normalized saved power."""
    initial_richness: int = Field(10000, ge=0)
    initial_energy: float = Field(100.0, gt=0)
    """Battery capacity in joules."""
    p_tx: float = Field(1.4, gt=0)
    p_rx: float = Field(1.0, gt=0)
    p_idle: float = Field(0.83, gt=0)
    tick_seconds: float = Field(1.0, gt=0)
    baseline_flat_pay: Optional[int] = Field(None, ge=0)
    baseline_refusal_threshold: float = Field(0.2, gt=0, lt=1)
    """Battery fraction at or below which baseline relays refuse to forward."""
    routing_policy: RoutingPolicy = RoutingPolicy.MIN_ENERGY
    distance_scaled_tx: Optional[bool] = None
    """Scale transmit energy by ``(d_hop / comm_range) ** 4``.

    Unset means per mode: FASTER nodes transmit with power control, baseline
    nodes always transmit at full ``p_tx``.
    """
    seed: int = 1
    max_exact_n: int = Field(12, ge=1, le=20)
    """Largest relay count for which exact Shapley values are computed."""
    packet_log: bool = False
    """Write ``packets.csv`` alongside the other run outputs."""

    @model_validator(mode="after")
    def _derive_flat_pay(self) -> "SimConfig":
        if self.baseline_flat_pay is None:
            # Frozen model: bypass __setattr__ for the derived default.
            object.__setattr__(
                self, "baseline_flat_pay", int(self.currency_weight * 0.5 + 0.5)
            )
        return self

    @property
    def area(self) -> Tuple[float, float]:
        return (self.area_width, self.area_height)

    @property
    def power_control(self) -> bool:
        """Resolved ``distance_scaled_tx`` for this run's mode."""
        if self.distance_scaled_tx is None:
            return self.mode is SimMode.FASTER
        return self.distance_scaled_tx

    @property
    def flat_pay(self) -> int:
        """Resolved baseline flat pay per relay."""
        assert self.baseline_flat_pay is not None
        return self.baseline_flat_pay

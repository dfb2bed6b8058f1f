"""Beacons and the receiver-side neighbor table."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from ..geokin import Kinematics, Point2
from ..radio import RssiSample

DEFAULT_WINDOW = 5


@dataclass(frozen=True)
class Beacon:
    """Periodic one-hop advertisement of a vehicle's motion and target."""

    sender_id: int
    timestamp: float
    kinematics: Kinematics
    target: Point2


@dataclass
class NeighborEntry:
    neighbor_id: int
    last_beacon: Beacon
    rssi_window: deque[RssiSample]
    last_heard: float


# A neighbor table is keyed by neighbor id.
NeighborTable = dict[int, NeighborEntry]


@dataclass(frozen=True)
class ProtocolConfig:
    """Routing-layer knobs shared by all protocol variants.

    The RSSI admission gate compares each neighbor's window mean against
    coeff * reference, in linear milliwatts. `rssi_gate_mode` picks the
    reference: "global_max" uses the strongest single sample currently
    recorded across the whole table, "neighbor_max" uses each neighbor's own
    window maximum (a link-stability test), "off" disables the gate.
    """

    beacon_interval_s: float = 1.0
    rssi_window: int = DEFAULT_WINDOW
    neighbor_ttl_s: float = 3.0
    prediction_horizon_s: float = 1.0
    rssi_gate_coeff: float = 0.6
    rssi_gate_mode: str = "global_max"
    hop_limit: int | None = 64
    range_limit_m: float = 300.0

    def __post_init__(self):
        if self.rssi_gate_mode not in ("global_max", "neighbor_max", "off"):
            raise ValueError(
                f"unknown rssi_gate_mode {self.rssi_gate_mode!r}"
            )
        if self.rssi_window < 1:
            raise ValueError("rssi_window must be >= 1")
        if self.beacon_interval_s <= 0 or self.neighbor_ttl_s <= 0:
            raise ValueError("intervals must be > 0")
        if self.hop_limit is not None and self.hop_limit < 1:
            raise ValueError("hop_limit must be >= 1 or None")


def on_beacon(
    table: NeighborTable,
    beacon: Beacon,
    rssi: float,
    now: float,
    window: int = DEFAULT_WINDOW,
) -> NeighborTable:
    """Upsert the sender's entry and append the RSSI observation.

    The window keeps the newest `window` samples; rssi must be positive
    (linear milliwatts). Mutates and returns the table.
    """
    if rssi <= 0.0:
        raise ValueError(f"rssi must be > 0 mW, got {rssi}")
    entry = table.get(beacon.sender_id)
    sample = RssiSample(beacon.sender_id, beacon.timestamp, rssi)
    if entry is None:
        table[beacon.sender_id] = NeighborEntry(
            neighbor_id=beacon.sender_id,
            last_beacon=beacon,
            rssi_window=deque([sample], maxlen=window),
            last_heard=now,
        )
    else:
        entry.last_beacon = beacon
        entry.rssi_window.append(sample)
        entry.last_heard = now
    return table


def purge_stale(
    table: NeighborTable, now: float, ttl: float
) -> NeighborTable:
    """Drop entries not heard from for strictly more than ttl seconds."""
    if ttl <= 0.0:
        raise ValueError(f"ttl must be > 0, got {ttl}")
    for nid in [n for n, e in table.items() if now - e.last_heard > ttl]:
        del table[nid]
    return table

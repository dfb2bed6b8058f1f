"""Frozen network views and a static forwarding loop over them.

Snapshots serve the delivery-guarantee checks: on an immutable, truthful
view of positions and connectivity, greedy + perimeter forwarding must
deliver exactly to the nodes a breadth-first search can reach.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .._kernels import pair_reception
from ..geokin import Kinematics, Point2, WeightFactors, THIRDS, distance
from ..protocols import (
    Beacon,
    DataPacket,
    NeighborEntry,
    NeighborTable,
    ProtocolConfig,
)
from ..radio import RadioConfig, RssiSample
from .forwarding import Action, decide_next_hop


@dataclass(frozen=True)
class Snapshot:
    """Immutable positions + ground-truth connectivity at one instant."""

    time: float
    kinematics: dict[int, Kinematics]
    targets: dict[int, Point2]
    adjacency: dict[int, tuple[int, ...]]
    radio: RadioConfig

    @classmethod
    def from_kinematics(
        cls,
        kinematics: dict[int, Kinematics],
        targets: dict[int, Point2],
        radio: RadioConfig,
        time: float = 0.0,
    ) -> "Snapshot":
        ids = sorted(kinematics)
        n = len(ids)
        x = np.array([kinematics[i].position.x for i in ids], dtype=np.float64)
        y = np.array([kinematics[i].position.y for i in ids], dtype=np.float64)
        alive = np.ones(n, dtype=np.uint8)
        power = np.zeros((n, n), dtype=np.float64)
        mask = np.zeros((n, n), dtype=np.uint8)
        cross = radio.crossover_m
        pair_reception(
            x,
            y,
            alive,
            radio.friis_coeff,
            radio.tworay_coeff,
            cross * cross,
            radio.range_limit_m * radio.range_limit_m,
            radio.sensitivity_mw,
            power,
            mask,
        )
        adjacency = {
            ids[i]: tuple(ids[j] for j in np.nonzero(mask[i])[0])
            for i in range(n)
        }
        return cls(
            time=time,
            kinematics=dict(kinematics),
            targets=dict(targets),
            adjacency=adjacency,
            radio=radio,
        )

    @classmethod
    def from_points(
        cls,
        points: dict[int, Point2],
        radio: RadioConfig,
        time: float = 0.0,
    ) -> "Snapshot":
        """Stationary snapshot: zero speeds, targets at the own positions."""
        kin = {
            nid: Kinematics(position=pos, speed=0.0, acceleration=0.0, heading=0.0)
            for nid, pos in points.items()
        }
        return cls.from_kinematics(kin, dict(points), radio, time)

    def truth_table(self, node_id: int) -> NeighborTable:
        """The node's neighbor table as perfect knowledge of its vicinity."""
        table: NeighborTable = {}
        pos = self.kinematics[node_id].position
        for nid in self.adjacency[node_id]:
            npos = self.kinematics[nid].position
            d = distance(pos, npos)
            power = (
                self.radio.friis_coeff
                if d == 0
                else _power_at(self.radio, d)
            )
            table[nid] = NeighborEntry(
                neighbor_id=nid,
                last_beacon=Beacon(
                    sender_id=nid,
                    timestamp=self.time,
                    kinematics=self.kinematics[nid],
                    target=self.targets[nid],
                ),
                rssi_window=deque([RssiSample(nid, self.time, power)], maxlen=5),
                last_heard=self.time,
            )
        return table

    def reachable(self, source: int) -> set[int]:
        seen = {source}
        frontier = [source]
        while frontier:
            nxt = []
            for u in frontier:
                for v in self.adjacency[u]:
                    if v not in seen:
                        seen.add(v)
                        nxt.append(v)
            frontier = nxt
        return seen


def _power_at(radio: RadioConfig, d: float) -> float:
    from ..radio import received_power

    return received_power(radio, d)


@dataclass
class StaticRouteResult:
    delivered: bool
    path: list[int] = field(default_factory=list)
    drop_reason: str | None = None


def route_on_snapshot(
    snap: Snapshot,
    source: int,
    destination: int,
    protocol: str = "gpsr",
    factors: WeightFactors = THIRDS,
    cfg: ProtocolConfig | None = None,
    hop_limit: int | None = None,
) -> StaticRouteResult:
    """Run greedy+perimeter forwarding on the frozen graph.

    hop_limit None applies only a generous loop-protection cap; a correct
    traversal always terminates on its own via the face-tour drop rule.
    """
    if cfg is None:
        cfg = ProtocolConfig(range_limit_m=snap.radio.range_limit_m)
    n = len(snap.kinematics)
    budget = hop_limit if hop_limit is not None else 20 * n + 100
    packet = DataPacket(
        packet_id=0,
        source_id=source,
        destination_id=destination,
        destination_pos=snap.kinematics[destination].position,
        destination_target=snap.targets[destination],
        created_at=snap.time,
        arrived_from=None,
    )
    node = source
    path = [source]
    while True:
        if node == destination:
            return StaticRouteResult(delivered=True, path=path)
        if packet.hop_count >= budget:
            return StaticRouteResult(
                delivered=False, path=path, drop_reason="hop_limit"
            )
        decision = decide_next_hop(
            packet,
            node,
            snap.kinematics[node],
            snap.truth_table(node),
            protocol,
            factors,
            cfg,
            snap.time,
        )
        if decision.action is not Action.FORWARD:
            return StaticRouteResult(
                delivered=False, path=path, drop_reason=decision.action.value
            )
        packet.hop_count += 1
        packet.arrived_from = node
        node = decision.next_hop
        path.append(node)

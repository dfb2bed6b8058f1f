"""Protocol-agnostic forwarding decision shared by the live engine and the
static snapshot router."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..geokin import Kinematics, Point2, WeightFactors, predict_position
from ..protocols import (
    Mode,
    NeighborTable,
    PerimeterAction,
    ProtocolConfig,
    build_pfg,
    DataPacket,
    ablation_select,
    gpsr_select,
    perimeter_next_hop,
    planarize_rng,
    tdmp_select,
)

PROTOCOL_NAMES = ("tdmp", "gpsr", "ablation")


class Action(enum.Enum):
    FORWARD = "forward"
    DROP_LOCALMAX = "drop_localmax"
    DROP_PERIMETER = "drop_perimeter"


@dataclass(frozen=True)
class Decision:
    action: Action
    next_hop: int | None = None


def _planar_view(
    protocol: str,
    table: NeighborTable,
    self_id: int,
    self_kin: Kinematics,
    cfg: ProtocolConfig,
    now: float,
):
    """Planarize the forwarder's neighborhood.

    Predictive protocols planarize predicted positions; the greedy baseline
    uses the positions as beaconed. All known neighbors participate (the
    RSSI gate does not apply to recovery).
    """
    if protocol == "gpsr":
        self_pos = self_kin.position
        pts = [
            (nid, e.last_beacon.kinematics.position)
            for nid, e in table.items()
        ]
    else:
        horizon = cfg.prediction_horizon_s
        self_pos = predict_position(self_kin, horizon)
        pts = []
        for nid, e in table.items():
            beacon = e.last_beacon
            ahead = max(0.0, now + horizon - beacon.timestamp)
            pts.append((nid, predict_position(beacon.kinematics, ahead)))
    pts = [(nid, pos) for nid, pos in pts if pos != self_pos]
    return (
        planarize_rng(pts, (self_id, self_pos), radius=cfg.range_limit_m),
        self_pos,
    )


def _greedy_choice(
    protocol: str,
    table: NeighborTable,
    self_kin: Kinematics,
    packet: DataPacket,
    factors: WeightFactors,
    cfg: ProtocolConfig,
    now: float,
) -> int | None:
    if protocol == "gpsr":
        return gpsr_select(
            table, self_kin.position, packet.destination_pos
        )
    pfg = build_pfg(table, self_kin, packet.destination_pos, cfg, now)
    select = tdmp_select if protocol == "tdmp" else ablation_select
    return select(
        pfg,
        self_kin,
        packet.destination_pos,
        packet.destination_target,
        factors,
        horizon=cfg.prediction_horizon_s,
    )


def decide_next_hop(
    packet: DataPacket,
    self_id: int,
    self_kin: Kinematics,
    table: NeighborTable,
    protocol: str,
    factors: WeightFactors,
    cfg: ProtocolConfig,
    now: float,
) -> Decision:
    """Choose the next hop at self_id, running the packet's mode machine.

    Mutates the packet's mode/face bookkeeping (perimeter entry, face
    point, first edge) exactly as the chosen strategy dictates. Delivery
    and the hop budget are the caller's concern.
    """
    if protocol not in PROTOCOL_NAMES:
        raise ValueError(f"unknown protocol {protocol!r}")
    # a freshly heard destination always takes the packet directly
    if packet.destination_id in table:
        return Decision(Action.FORWARD, packet.destination_id)
    if packet.mode is Mode.PERIMETER:
        graph, _ = _planar_view(protocol, table, self_id, self_kin, cfg, now)
        act, nxt = perimeter_next_hop(packet, graph, self_id)
        if act is PerimeterAction.FORWARD:
            return Decision(Action.FORWARD, nxt)
        if act is PerimeterAction.DROP:
            return Decision(Action.DROP_PERIMETER)
        packet.exit_perimeter()
    chosen = _greedy_choice(
        protocol, table, self_kin, packet, factors, cfg, now
    )
    if chosen is not None:
        return Decision(Action.FORWARD, chosen)
    if not table:
        return Decision(Action.DROP_LOCALMAX)
    graph, self_pos = _planar_view(
        protocol, table, self_id, self_kin, cfg, now
    )
    packet.enter_perimeter(self_pos)
    act, nxt = perimeter_next_hop(packet, graph, self_id)
    if act is PerimeterAction.FORWARD:
        return Decision(Action.FORWARD, nxt)
    if act is PerimeterAction.REVERT:
        # entering at the entry point itself can never revert
        raise AssertionError("revert immediately after perimeter entry")
    return Decision(Action.DROP_PERIMETER)

"""Potential Forwarders Group: the gated candidate set for greedy mode."""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from ..geokin import Kinematics, Point2, distance, predict_position
from .neighbors import NeighborTable, ProtocolConfig


@dataclass(frozen=True)
class PfgMember:
    neighbor_id: int
    predicted: Kinematics  # beacon kinematics at the predicted position
    avg_rssi: float  # window mean, linear milliwatts
    target: Point2  # the neighbor's advertised travel target


def build_pfg(
    table: NeighborTable,
    self_kin: Kinematics,
    dest: Point2,
    cfg: ProtocolConfig,
    now: float,
) -> list[PfgMember]:
    """Candidates admitted by the three greedy-mode conditions.

    A neighbor joins iff (a) its RSSI window mean clears the configured
    gate, (b) its predicted position stays within radio range of the
    forwarder's own predicted position, and (c) its predicted position is
    strictly closer to the destination than the forwarder's. Predictions
    are taken at the common instant now + prediction horizon. Members come
    back ordered by neighbor id.
    """
    if not table:
        return []
    gate = None
    if cfg.rssi_gate_mode == "global_max":
        strongest = max(
            s.power_mw for e in table.values() for s in e.rssi_window
        )
        gate = cfg.rssi_gate_coeff * strongest
    horizon = cfg.prediction_horizon_s
    self_pred = predict_position(self_kin, horizon)
    self_dist = distance(self_pred, dest)
    members: list[PfgMember] = []
    for nid in sorted(table):
        entry = table[nid]
        mean = sum(s.power_mw for s in entry.rssi_window) / len(
            entry.rssi_window
        )
        if cfg.rssi_gate_mode == "neighbor_max":
            gate = cfg.rssi_gate_coeff * max(
                s.power_mw for s in entry.rssi_window
            )
        if gate is not None and mean < gate:
            continue
        beacon = entry.last_beacon
        ahead = max(0.0, now + horizon - beacon.timestamp)
        pred_pos = predict_position(beacon.kinematics, ahead)
        if distance(pred_pos, self_pred) > cfg.range_limit_m:
            continue
        if distance(pred_pos, dest) >= self_dist:
            continue
        members.append(
            PfgMember(
                neighbor_id=nid,
                predicted=dataclasses.replace(
                    beacon.kinematics, position=pred_pos
                ),
                avg_rssi=mean,
                target=beacon.target,
            )
        )
    return members

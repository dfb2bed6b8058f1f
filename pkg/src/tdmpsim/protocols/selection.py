"""Next-hop choice: weighted predictive selection and the greedy baseline."""

from __future__ import annotations

import math

from ..geokin import (
    Kinematics,
    Point2,
    WeightFactors,
    distance,
    neighbor_weight,
    predict_position,
)
from .neighbors import NeighborTable
from .pfg import PfgMember


def _cos_from(px: float, py: float, qx: float, qy: float) -> float:
    """Cosine between two nonzero vectors, clamped into [-1, 1]."""
    val = (px * qx + py * qy) / (
        math.sqrt(px * px + py * py) * math.sqrt(qx * qx + qy * qy)
    )
    return min(1.0, max(-1.0, val))


def _velocity_cos(member: PfgMember, dest: Point2) -> float:
    """cos(velocity of the candidate, ray toward the destination).

    Zero when the candidate is stationary or already sits on the
    destination point: no directional evidence either way.
    """
    k = member.predicted
    if k.speed <= 0.0:
        return 0.0
    dx = dest.x - k.position.x
    dy = dest.y - k.position.y
    if dx == 0.0 and dy == 0.0:
        return 0.0
    return _cos_from(math.cos(k.heading), math.sin(k.heading), dx, dy)


def _target_cos(member: PfgMember, dest_target: Point2) -> float:
    """cos of the angle between the candidate's target and the
    destination's target, seen from the candidate's predicted position;
    zero if either ray degenerates."""
    pos = member.predicted.position
    ax = member.target.x - pos.x
    ay = member.target.y - pos.y
    bx = dest_target.x - pos.x
    by = dest_target.y - pos.y
    if (ax == 0.0 and ay == 0.0) or (bx == 0.0 and by == 0.0):
        return 0.0
    if ax == bx and ay == by:
        return 1.0
    return _cos_from(ax, ay, bx, by)


def tdmp_select(
    pfg: list[PfgMember],
    self_kin: Kinematics,
    dest: Point2,
    dest_target: Point2,
    factors: WeightFactors,
    horizon: float = 1.0,
) -> int | None:
    """Highest-weight candidate, or None at a local maximum (empty group).

    Weight per candidate: p * predicted forward progress ratio + q1 *
    velocity alignment + q2 * target alignment. Ties break toward the
    smaller neighbor id.
    """
    if not pfg:
        return None
    self_dist = distance(predict_position(self_kin, horizon), dest)
    if self_dist <= 0.0:
        return None  # already at the destination point; deliver locally
    best_id: int | None = None
    best_weight = -math.inf
    for member in sorted(pfg, key=lambda m: m.neighbor_id):
        w = neighbor_weight(
            factors,
            self_dist,
            distance(member.predicted.position, dest),
            _velocity_cos(member, dest),
            _target_cos(member, dest_target),
        )
        if w > best_weight:
            best_weight = w
            best_id = member.neighbor_id
    return best_id


def ablation_select(
    pfg: list[PfgMember],
    self_kin: Kinematics,
    dest: Point2,
    dest_target: Point2,
    factors: WeightFactors,
    horizon: float = 1.0,
) -> int | None:
    """Prediction-only variant: drop the target term, renormalize p and q1.

    Stands in for published predictive protocols that use position and
    direction but not the driver's target.
    """
    rest = factors.p + factors.q1
    if rest > 0.0:
        factors = WeightFactors(factors.p / rest, factors.q1 / rest, 0.0)
    else:
        factors = WeightFactors(0.5, 0.5, 0.0)
    return tdmp_select(pfg, self_kin, dest, dest_target, factors, horizon)


def gpsr_select(
    table: NeighborTable, self_pos: Point2, dest: Point2
) -> int | None:
    """Classic greedy choice on current positions, no gating or prediction.

    Returns the neighbor with the smallest current distance to the
    destination among those strictly closer than the forwarder, ties toward
    the smaller id; None signals a local maximum.
    """
    self_dist = distance(self_pos, dest)
    best_id: int | None = None
    best_dist = self_dist
    for nid in sorted(table):
        pos = table[nid].last_beacon.kinematics.position
        d = distance(pos, dest)
        if d < best_dist:
            best_dist = d
            best_id = nid
    return best_id

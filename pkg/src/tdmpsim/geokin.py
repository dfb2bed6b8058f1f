"""Planar geometry and short-horizon kinematics for next-hop scoring.

Everything in here is a pure function over plain value types: positions in
meters, speeds in m/s, headings in radians measured counterclockwise from the
+x axis. The scoring weight combines three terms (predicted forward progress,
velocity alignment with the destination, and alignment of the candidate's
travel target with the destination's travel target) under a normalized
weighting triple.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

TWO_PI = 2.0 * math.pi


class ZeroVelocityError(ValueError):
    """Direction is undefined for a stationary vehicle."""


class CoincidentPointsError(ValueError):
    """A direction toward a coincident point is undefined."""


class DegenerateGeometryError(ValueError):
    """An angle ray has zero length."""


class ZeroSourceDistanceError(ValueError):
    """The forwarder is already at the destination; nothing to score."""


class Point2(NamedTuple):
    """A position in the plane, meters."""

    x: float
    y: float


@dataclass(frozen=True)
class Kinematics:
    """One vehicle's motion state at an instant.

    heading is normalized into [0, 2*pi) on construction; speed must be
    non-negative.
    """

    position: Point2
    speed: float
    acceleration: float
    heading: float

    def __post_init__(self):
        if self.speed < 0.0:
            raise ValueError(f"speed must be >= 0, got {self.speed}")
        h = math.fmod(self.heading, TWO_PI)
        if h < 0.0:
            h += TWO_PI
        object.__setattr__(self, "heading", h)


@dataclass(frozen=True)
class WeightFactors:
    """Weighting triple (p, q1, q2) for distance and the two angle terms.

    The three factors must be non-negative and sum to 1 within 1e-9.
    """

    p: float
    q1: float
    q2: float

    def __post_init__(self):
        for name, value in (("p", self.p), ("q1", self.q1), ("q2", self.q2)):
            if value < 0.0:
                raise ValueError(f"{name} must be >= 0, got {value}")
        total = self.p + self.q1 + self.q2
        if abs(total - 1.0) > 1e-9:
            raise ValueError(
                f"factors must sum to 1.0 within 1e-9, got {total!r}"
            )


THIRDS = WeightFactors(1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0)


def distance(a: Point2, b: Point2) -> float:
    """Euclidean distance between two points, meters."""
    dx = a.x - b.x
    dy = a.y - b.y
    return math.sqrt(dx * dx + dy * dy)


def _clamped_acos(value: float) -> float:
    # survive rounding just outside [-1, 1] at the domain boundary
    if value > 1.0:
        value = 1.0
    elif value < -1.0:
        value = -1.0
    return math.acos(value)


def direction_angle(
    heading: float, speed: float, frm: Point2, to: Point2
) -> float:
    """Angle in [0, pi] between a velocity vector and the segment frm->to.

    The velocity vector is (cos heading, sin heading) scaled by speed.

    Raises:
        ZeroVelocityError: speed is zero (no direction).
        CoincidentPointsError: frm == to (no segment direction).
    """
    if speed <= 0.0:
        raise ZeroVelocityError("direction angle undefined at zero speed")
    dx = to.x - frm.x
    dy = to.y - frm.y
    norm = math.sqrt(dx * dx + dy * dy)
    if norm == 0.0:
        raise CoincidentPointsError("segment endpoints coincide")
    dot = (math.cos(heading) * dx + math.sin(heading) * dy) / norm
    return _clamped_acos(dot)


def predict_position(k: Kinematics, t: float) -> Point2:
    """Position after t seconds of motion along the current heading.

    Displacement is speed*t + accel*t^2/2, clamped below at zero: a
    decelerating vehicle stops, it does not reverse.
    """
    if t < 0.0:
        raise ValueError(f"prediction horizon must be >= 0, got {t}")
    disp = k.speed * t + 0.5 * k.acceleration * t * t
    if disp <= 0.0:
        return k.position
    return Point2(
        k.position.x + disp * math.cos(k.heading),
        k.position.y + disp * math.sin(k.heading),
    )


def predicted_distance(k1: Kinematics, k2: Kinematics, t: float) -> float:
    """Distance between the two predicted positions after t seconds.

    Exactly the composition of distance() and predict_position().
    """
    return distance(predict_position(k1, t), predict_position(k2, t))


def target_angle(
    predicted_neighbor: Point2,
    neighbor_target: Point2,
    destination_target: Point2,
) -> float:
    """Angle in [0, pi] at the predicted neighbor between the two targets.

    Measured between the rays from predicted_neighbor toward the neighbor's
    own travel target and toward the destination vehicle's travel target.

    Raises:
        DegenerateGeometryError: either ray has zero length.
    """
    ax = neighbor_target.x - predicted_neighbor.x
    ay = neighbor_target.y - predicted_neighbor.y
    bx = destination_target.x - predicted_neighbor.x
    by = destination_target.y - predicted_neighbor.y
    na = math.sqrt(ax * ax + ay * ay)
    nb = math.sqrt(bx * bx + by * by)
    if na == 0.0 or nb == 0.0:
        raise DegenerateGeometryError("target ray has zero length")
    if ax == bx and ay == by:
        return 0.0  # identical targets: exactly coincident rays
    return _clamped_acos((ax * bx + ay * by) / (na * nb))


def neighbor_weight(
    factors: WeightFactors,
    pred_dist_source_dest: float,
    pred_dist_neighbor_dest: float,
    neighbor_velocity_cos: float,
    target_cos: float,
) -> float:
    """Forwarding score of one candidate neighbor.

    p * (d*_sd - d*_id) / d*_sd  +  q1 * cos(velocity, toward-destination)
    + q2 * cos(target angle). Cosines must already be in [-1, 1].

    Raises:
        ZeroSourceDistanceError: the forwarder's own predicted distance to
            the destination is zero (the packet should be delivered locally,
            never scored).
    """
    if pred_dist_source_dest <= 0.0:
        raise ZeroSourceDistanceError(
            "forwarder predicted distance to destination is zero"
        )
    progress = (
        pred_dist_source_dest - pred_dist_neighbor_dest
    ) / pred_dist_source_dest
    return (
        factors.p * progress
        + factors.q1 * neighbor_velocity_cos
        + factors.q2 * target_cos
    )

"""Krauss safe-speed car following."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class MobilityConfig:
    """Vehicle dynamics parameters.

    Defaults follow the usual urban microsimulation values: 4.5 m/s^2
    acceleration, 2.6 m/s^2 braking, 1 s driver reaction, 5 m vehicles and a
    31.1 m/s absolute cap. decel_max is also the braking capability `a` used
    inside the safe-speed formula.
    """

    accel_max: float = 4.5
    decel_max: float = 2.6
    reaction_s: float = 1.0
    vehicle_length_m: float = 5.0
    speed_cap_mps: float = 31.1
    lookahead_m: float = 250.0
    insert_clearance_m: float = 1.0

    def __post_init__(self):
        if self.accel_max <= 0 or self.decel_max <= 0:
            raise ValueError("acceleration bounds must be > 0")
        if self.reaction_s <= 0:
            raise ValueError("reaction time must be > 0")
        if self.vehicle_length_m <= 0:
            raise ValueError("vehicle length must be > 0")


def krauss_safe_speed(
    v_lead: float,
    v_follow: float,
    gap: float,
    reaction: float,
    a_max: float,
) -> float:
    """Collision-free follower speed behind a leader.

    v_s = v_l + (d - v_l*t_r) / ((v_l + v_f)/(2a) + t_r), clamped below at
    zero. `gap` is the bumper-to-bumper headway in meters, `a_max` the
    braking capability in m/s^2.
    """
    if gap < 0:
        raise ValueError(f"gap must be >= 0, got {gap}")
    if reaction <= 0:
        raise ValueError(f"reaction must be > 0, got {reaction}")
    if a_max <= 0:
        raise ValueError(f"a_max must be > 0, got {a_max}")
    v_s = v_lead + (gap - v_lead * reaction) / (
        (v_lead + v_follow) / (2.0 * a_max) + reaction
    )
    return v_s if v_s > 0.0 else 0.0

"""Per-step traffic state: insertion, car following, edge transitions.

Collision freedom is structural, not statistical: followers clamp against
the already-moved position of their leader, and a vehicle enters a new edge
only behind that edge's rear-most occupant. Junction merges are not
arbitrated (no right-of-way model); the entry clamp resolves simultaneous
entries deterministically in processing order.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field

from ..geokin import Kinematics, Point2
from .carfollow import MobilityConfig, krauss_safe_speed
from .demand import Trip
from .network import RoadNetwork


@dataclass
class Vehicle:
    vid: int
    route: tuple[int, ...]
    target: Point2
    route_idx: int = 0
    offset: float = 0.0
    speed: float = 0.0
    accel: float = 0.0  # recorded (v_new - v_old)/dt, clamped to the bounds
    progress: float = 0.0  # cumulative meters travelled along the route

    @property
    def edge_id(self) -> int:
        return self.route[self.route_idx]


@dataclass
class MobilityState:
    net: RoadNetwork
    cfg: MobilityConfig
    time: float = 0.0
    vehicles: dict[int, Vehicle] = field(default_factory=dict)
    pending: list[Trip] = field(default_factory=list)
    # edge id -> vids ordered rear to front (ascending offset)
    occupancy: dict[int, list[int]] = field(default_factory=dict)
    arrival_log: list[tuple[float, int]] = field(default_factory=list)
    inserted_count: int = 0

    @classmethod
    def from_trips(
        cls, net: RoadNetwork, trips: list[Trip], cfg: MobilityConfig
    ) -> "MobilityState":
        state = cls(net=net, cfg=cfg)
        state.pending = sorted(
            trips, key=lambda t: (t.departure_time, t.vehicle_id)
        )
        state.occupancy = {eid: [] for eid in net.edges}
        state._insert_due()
        return state

    # -- occupancy helpers ------------------------------------------------

    def _offsets(self, eid: int) -> list[float]:
        return [self.vehicles[v].offset for v in self.occupancy[eid]]

    def _enter_edge(self, vid: int, eid: int, offset: float) -> None:
        occ = self.occupancy[eid]
        keys = self._offsets(eid)
        occ.insert(bisect.bisect_left(keys, offset), vid)

    def _leave_edge(self, vid: int, eid: int) -> None:
        self.occupancy[eid].remove(vid)

    def kinematics(self, vid: int) -> Kinematics:
        v = self.vehicles[vid]
        return Kinematics(
            position=self.net.position_on_edge(v.edge_id, v.offset),
            speed=v.speed,
            acceleration=v.accel,
            heading=self.net.edge_heading(v.edge_id),
        )

    # -- leader search ----------------------------------------------------

    def _leader_gap(self, veh: Vehicle) -> tuple[float, float] | None:
        """(bumper gap m, leader speed) of the next vehicle along the route.

        Searches the current edge first, then route edges ahead up to the
        configured lookahead. Returns None in free flow.
        """
        occ = self.occupancy[veh.edge_id]
        idx = occ.index(veh.vid)
        if idx + 1 < len(occ):
            leader = self.vehicles[occ[idx + 1]]
            gap = leader.offset - veh.offset - self.cfg.vehicle_length_m
            return max(0.0, gap), leader.speed
        ahead = self.net.edges[veh.edge_id].length - veh.offset
        for nxt in veh.route[veh.route_idx + 1 :]:
            if ahead > self.cfg.lookahead_m:
                return None
            occ = self.occupancy[nxt]
            if occ:
                leader = self.vehicles[occ[0]]  # rear-most on that edge
                gap = ahead + leader.offset - self.cfg.vehicle_length_m
                return max(0.0, gap), leader.speed
            ahead += self.net.edges[nxt].length
        return None

    def _desired_speed(self, veh: Vehicle, dt: float) -> float:
        cfg = self.cfg
        edge = self.net.edges[veh.edge_id]
        limit = min(edge.speed_limit, cfg.speed_cap_mps)
        # slower edge ahead binds early if this step may cross into it
        if veh.offset + (veh.speed + cfg.accel_max * dt) * dt > edge.length:
            if veh.route_idx + 1 < len(veh.route):
                nxt = self.net.edges[veh.route[veh.route_idx + 1]]
                limit = min(limit, nxt.speed_limit)
        v_des = min(limit, veh.speed + cfg.accel_max * dt)
        found = self._leader_gap(veh)
        if found is not None:
            gap, v_lead = found
            v_des = min(
                v_des,
                krauss_safe_speed(
                    v_lead, veh.speed, gap, cfg.reaction_s, cfg.decel_max
                ),
            )
        # braking capability bounds the slowdown
        return max(0.0, max(v_des, veh.speed - cfg.decel_max * dt))

    # -- the step ----------------------------------------------------------

    def _insert_due(self) -> None:
        still_pending: list[Trip] = []
        for trip in self.pending:
            if trip.departure_time > self.time:
                still_pending.append(trip)
                continue
            eid = trip.route[0]
            occ = self.occupancy[eid]
            clearance = (
                self.cfg.vehicle_length_m + self.cfg.insert_clearance_m
            )
            if occ and self.vehicles[occ[0]].offset < clearance:
                still_pending.append(trip)  # entry blocked, retry next step
                continue
            veh = Vehicle(
                vid=trip.vehicle_id, route=trip.route, target=trip.target
            )
            self.vehicles[veh.vid] = veh
            self._enter_edge(veh.vid, eid, 0.0)
            self.inserted_count += 1
        self.pending = still_pending

    def step(self, dt: float) -> "MobilityState":
        """Advance every vehicle by dt seconds (first-order Euler).

        Desired speed is min(speed limit, v + a*dt, Krauss safe speed);
        position moves by v_new*dt along the route; vehicles reaching their
        route end are removed and logged; due departures are inserted at the
        end of the step. Mutates and returns self.
        """
        if dt <= 0:
            raise ValueError(f"dt must be > 0, got {dt}")
        cfg = self.cfg
        net = self.net
        desired = {
            vid: self._desired_speed(veh, dt)
            for vid, veh in sorted(self.vehicles.items())
        }
        # move in (edge id, front-first) order over a frozen plan
        plan = [
            (eid, list(reversed(self.occupancy[eid])))
            for eid in sorted(self.occupancy)
            if self.occupancy[eid]
        ]
        arrived: list[int] = []
        for eid, vids in plan:
            for vid in vids:
                veh = self.vehicles[vid]
                old_speed = veh.speed
                des = desired[vid]
                remaining = des * dt
                done = False
                while remaining > 0.0 and not done:
                    edge = net.edges[veh.edge_id]
                    occ = self.occupancy[veh.edge_id]
                    idx = occ.index(vid)
                    ceiling = edge.length
                    if idx + 1 < len(occ):
                        ceiling = min(
                            ceiling,
                            self.vehicles[occ[idx + 1]].offset
                            - cfg.vehicle_length_m,
                        )
                    move = min(remaining, ceiling - veh.offset)
                    if move > 0.0:
                        veh.offset += move
                        veh.progress += move
                        remaining -= move
                    if (
                        remaining <= 0.0
                        or ceiling < edge.length
                        or veh.offset < edge.length
                    ):
                        break  # finished, or blocked behind the leader
                    # at the end of the edge: arrive or cross
                    if veh.route_idx + 1 >= len(veh.route):
                        self._leave_edge(vid, veh.edge_id)
                        arrived.append(vid)
                        done = True
                        break
                    nxt = veh.route[veh.route_idx + 1]
                    nxt_occ = self.occupancy[nxt]
                    if nxt_occ and (
                        self.vehicles[nxt_occ[0]].offset
                        - cfg.vehicle_length_m
                        <= 0.0
                    ):
                        break  # next edge has no room: wait at the junction
                    self._leave_edge(vid, veh.edge_id)
                    veh.route_idx += 1
                    veh.offset = 0.0
                    self._enter_edge(vid, nxt, 0.0)
                if vid not in arrived:
                    if remaining <= 0.0:
                        new_speed = des  # unobstructed: exact planned speed
                    else:
                        new_speed = min(des, (des * dt - remaining) / dt)
                    veh.speed = new_speed
                    veh.accel = min(
                        cfg.accel_max,
                        max(-cfg.decel_max, (new_speed - old_speed) / dt),
                    )
        self.time += dt
        for vid in arrived:
            self.arrival_log.append((self.time, vid))
            del self.vehicles[vid]
        self._insert_due()
        return self

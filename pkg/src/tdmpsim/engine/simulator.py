"""Deterministic discrete-event loop: mobility, beacons, packet forwarding.

Event order is a pure function of (scenario, protocol, seed): events are
processed in (time, priority, sequence) order with mobility steps before
beacon rounds before packet sends at equal times. The radio never lies;
data transmissions are checked against the true geometry at send time, and
a failed send costs one hop of airtime, evicts the neighbor (link-layer
feedback) and triggers reselection.
"""

from __future__ import annotations

import dataclasses
import heapq
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..geokin import Kinematics, Point2, THIRDS, WeightFactors
from ..metrics import MetricsRecord
from ..mobility import (
    MobilityConfig,
    MobilityState,
    ODMatrix,
    RoadNetwork,
    generate_trips,
)
from ..protocols import DataPacket, Mode, ProtocolConfig
from ..radio import RadioConfig, received_power_from_d2
from .forwarding import Action, decide_next_hop
from .neighbor_state import NeighborState
from .snapshot import Snapshot

PRIORITY_STEP = 0
PRIORITY_BEACON = 1
PRIORITY_SEND = 2
PRIORITY_HOP = 3


@dataclass(frozen=True)
class TrafficPattern:
    """Data-packet injection: `rate_pps` sends per second at seeded random
    sub-second phases, between random live vehicles (or one fixed pair)."""

    rate_pps: float = 1.0
    start_s: float = 0.0
    end_s: float | None = None
    payload_bytes: int | None = None
    mode: str = "random_pair"
    fixed_source: int | None = None
    fixed_destination: int | None = None

    def __post_init__(self):
        if self.rate_pps < 0:
            raise ValueError("rate_pps must be >= 0")
        if self.mode not in ("random_pair", "fixed_pair"):
            raise ValueError(f"unknown traffic mode {self.mode!r}")
        if self.mode == "fixed_pair" and (
            self.fixed_source is None or self.fixed_destination is None
        ):
            raise ValueError("fixed_pair traffic needs source and destination")


@dataclass(frozen=True)
class Scenario:
    """Everything a run needs except the protocol and the seed."""

    name: str
    net: RoadNetwork
    od: ODMatrix
    sim_time_s: float = 100.0
    dt_s: float = 1.0
    radio: RadioConfig = RadioConfig()
    protocol_cfg: ProtocolConfig = ProtocolConfig()
    mobility_cfg: MobilityConfig = MobilityConfig()
    traffic: TrafficPattern = TrafficPattern()
    factors: WeightFactors = THIRDS

    def __post_init__(self):
        if self.sim_time_s <= 0 or self.dt_s <= 0:
            raise ValueError("sim_time_s and dt_s must be > 0")
        if self.protocol_cfg.range_limit_m != self.radio.range_limit_m:
            # keep the routing layer's idea of range in sync with the radio
            object.__setattr__(
                self,
                "protocol_cfg",
                dataclasses.replace(
                    self.protocol_cfg, range_limit_m=self.radio.range_limit_m
                ),
            )


@dataclass
class RunResult:
    metrics: MetricsRecord
    snapshots: list[Snapshot] = field(default_factory=list)


EventSink = Callable[[str], None]


class Simulator:
    def __init__(
        self,
        scenario: Scenario,
        protocol: str,
        seed: int,
        event_sink: EventSink | None = None,
        snapshot_times: tuple[float, ...] = (),
    ):
        self.scenario = scenario
        self.protocol = protocol
        self.seed = seed
        self.sink = event_sink
        self.snapshot_times = tuple(sorted(snapshot_times))
        self.trips = generate_trips(scenario.net, scenario.od, seed)
        self.mobility = MobilityState.from_trips(
            scenario.net, self.trips, scenario.mobility_cfg
        )
        n = len(self.trips)
        self.n_total = n
        self.neighbors = NeighborState(n, scenario.protocol_cfg.rssi_window)
        self.alive = np.zeros(n, dtype=np.uint8)
        self.x = np.zeros(n, dtype=np.float64)
        self.y = np.zeros(n, dtype=np.float64)
        self.v = np.zeros(n, dtype=np.float64)
        self.a = np.zeros(n, dtype=np.float64)
        self.heading = np.zeros(n, dtype=np.float64)
        self.tgx = np.zeros(n, dtype=np.float64)
        self.tgy = np.zeros(n, dtype=np.float64)
        self._refresh_arrays()
        self.rng_traffic = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([seed, 1]))
        )
        self.rng_radio = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence([seed, 2]))
        )
        self.metrics = MetricsRecord(
            scenario=scenario.name,
            protocol=protocol,
            seed=seed,
            n_vehicles=scenario.od.total,
        )
        self.snapshots: list[Snapshot] = []
        self._packet_ids = itertools.count()
        self._seq = itertools.count()
        self._heap: list = []
        payload = scenario.traffic.payload_bytes
        radio = scenario.radio
        if payload is not None:
            radio = dataclasses.replace(radio, packet_size_bytes=payload)
        self.hop_delay = (
            radio.packet_size_bytes * 8.0 / radio.channel_capacity_bps
            + radio.processing_delay_s
        )

    # -- plumbing -----------------------------------------------------------

    def _log(self, time: float, kind: str, *fields) -> None:
        if self.sink is not None:
            parts = [f"{time:.6f}", kind]
            parts.extend(str(f) for f in fields)
            self.sink("\t".join(parts))

    def _push(self, time: float, priority: int, kind: str, data) -> None:
        heapq.heappush(
            self._heap, (time, priority, next(self._seq), kind, data)
        )

    def _refresh_arrays(self) -> None:
        self.alive[:] = 0
        for vid, veh in self.mobility.vehicles.items():
            k = self.mobility.kinematics(vid)
            self.alive[vid] = 1
            self.x[vid] = k.position.x
            self.y[vid] = k.position.y
            self.v[vid] = k.speed
            self.a[vid] = k.acceleration
            self.heading[vid] = k.heading
            self.tgx[vid] = veh.target.x
            self.tgy[vid] = veh.target.y

    def _kinematics(self, vid: int) -> Kinematics:
        return Kinematics(
            position=Point2(float(self.x[vid]), float(self.y[vid])),
            speed=float(self.v[vid]),
            acceleration=float(self.a[vid]),
            heading=float(self.heading[vid]),
        )

    def _receivable(self, frm: int, to: int) -> bool:
        if not self.alive[to]:
            return False
        radio = self.scenario.radio
        dx = float(self.x[frm]) - float(self.x[to])
        dy = float(self.y[frm]) - float(self.y[to])
        d2 = dx * dx + dy * dy
        if d2 > radio.range_limit_m * radio.range_limit_m:
            return False
        if d2 == 0.0:
            return True
        if received_power_from_d2(radio, d2) < radio.sensitivity_mw:
            return False
        if radio.drop_probability > 0.0:
            return self.rng_radio.random() >= radio.drop_probability
        return True

    # -- event handlers ------------------------------------------------------

    def _handle_step(self, t: float) -> None:
        self.mobility.step(self.scenario.dt_s)
        self._refresh_arrays()
        self._log(t, "step", len(self.mobility.vehicles))

    def _handle_beacon(self, t: float) -> None:
        self.neighbors.beacon_round(
            t,
            self.scenario.radio,
            self.alive,
            self.x,
            self.y,
            self.v,
            self.a,
            self.heading,
            self.tgx,
            self.tgy,
        )
        self._log(t, "beacon", int(self.alive.sum()))

    def _handle_send(self, t: float) -> None:
        traffic = self.scenario.traffic
        live = [int(v) for v in np.nonzero(self.alive)[0]]
        if traffic.mode == "fixed_pair":
            src = traffic.fixed_source
            dst = traffic.fixed_destination
            if src not in live or dst not in live or src == dst:
                return
        else:
            if len(live) < 2:
                return
            src = live[int(self.rng_traffic.integers(len(live)))]
            rest = [v for v in live if v != src]
            dst = rest[int(self.rng_traffic.integers(len(rest)))]
        packet = DataPacket(
            packet_id=next(self._packet_ids),
            source_id=src,
            destination_id=dst,
            destination_pos=Point2(float(self.x[dst]), float(self.y[dst])),
            destination_target=Point2(
                float(self.tgx[dst]), float(self.tgy[dst])
            ),
            created_at=t,
        )
        self.metrics.n_generated += 1
        self._log(
            t, "send", packet.packet_id, src, dst,
            f"{self.x[src]:.3f}", f"{self.y[src]:.3f}",
        )
        self._process_hop(packet, src, t)

    def _drop(self, packet: DataPacket, t: float, reason: str, node) -> None:
        if reason == "drop_localmax":
            self.metrics.drop_localmax += 1
        elif reason == "drop_hoplimit":
            self.metrics.drop_hoplimit += 1
        elif reason == "drop_perimeter":
            self.metrics.drop_perimeter += 1
        else:
            raise ValueError(reason)
        self._log(t, reason, packet.packet_id, node)

    def _process_hop(self, packet: DataPacket, node: int, t: float) -> None:
        if not self.alive[node]:
            # the carrier finished its trip with the packet on board
            self._drop(packet, t, "drop_localmax", node)
            return
        if node == packet.destination_id:
            self.metrics.record_delivery(
                t - packet.created_at, packet.hop_count
            )
            self._log(t, "deliver", packet.packet_id, node, packet.hop_count)
            return
        cfg = self.scenario.protocol_cfg
        self_kin = self._kinematics(node)
        t_cursor = t
        while True:
            table = self.neighbors.table_view(node, t, cfg.neighbor_ttl_s)
            face_state = (packet.mode, packet.entry_pos, packet.face_point,
                          packet.first_edge)
            decision = decide_next_hop(
                packet,
                node,
                self_kin,
                table,
                self.protocol,
                self.scenario.factors,
                cfg,
                t,
            )
            if decision.action is Action.DROP_LOCALMAX:
                self._drop(packet, t_cursor, "drop_localmax", node)
                return
            if decision.action is Action.DROP_PERIMETER:
                self._drop(packet, t_cursor, "drop_perimeter", node)
                return
            nxt = decision.next_hop
            if cfg.hop_limit is not None and packet.hop_count >= cfg.hop_limit:
                self._drop(packet, t_cursor, "drop_hoplimit", node)
                return
            packet.hop_count += 1
            if self._receivable(node, nxt):
                packet.arrived_from = node
                self._log(
                    t_cursor, "hop", packet.packet_id, node, nxt,
                    packet.mode.value, packet.hop_count,
                )
                self._push(
                    t_cursor + self.hop_delay, PRIORITY_HOP, "hop",
                    (packet, nxt),
                )
                return
            # link-layer failure: pay the airtime, forget the neighbor,
            # restore the face bookkeeping the failed choice touched
            self._log(t_cursor, "macfail", packet.packet_id, node, nxt)
            self.neighbors.evict(node, nxt)
            (packet.mode, packet.entry_pos, packet.face_point,
             packet.first_edge) = face_state
            t_cursor += self.hop_delay

    # -- main loop -----------------------------------------------------------

    def run(self) -> RunResult:
        sc = self.scenario
        end = sc.sim_time_s
        eps = 1e-9
        t = sc.dt_s
        while t <= end + eps:
            self._push(round(t, 9), PRIORITY_STEP, "step", None)
            t += sc.dt_s
        t = 0.0
        while t <= end + eps:
            self._push(round(t, 9), PRIORITY_BEACON, "beacon", None)
            t += sc.protocol_cfg.beacon_interval_s
        self._schedule_sends(end)
        for st in self.snapshot_times:
            if 0.0 <= st <= end:
                self._push(st, PRIORITY_SEND, "snapshot", None)
        while self._heap:
            when, _, _, kind, data = heapq.heappop(self._heap)
            if when > end + eps:
                if kind == "hop":
                    pass  # counted as in flight by close()
                continue
            if kind == "step":
                self._handle_step(when)
            elif kind == "beacon":
                self._handle_beacon(when)
            elif kind == "send":
                self._handle_send(when)
            elif kind == "snapshot":
                self.snapshots.append(self.freeze_snapshot(when))
            else:
                packet, node = data
                self._process_hop(packet, node, when)
        self.metrics.close()
        return RunResult(metrics=self.metrics, snapshots=self.snapshots)

    def _schedule_sends(self, end: float) -> None:
        traffic = self.scenario.traffic
        stop = min(end, traffic.end_s) if traffic.end_s is not None else end
        sec = traffic.start_s
        while sec < stop:
            count = int(traffic.rate_pps)
            frac = traffic.rate_pps - count
            if frac > 0.0 and self.rng_traffic.random() < frac:
                count += 1
            for _ in range(count):
                phase = float(self.rng_traffic.random())
                self._push(sec + phase, PRIORITY_SEND, "send", None)
            sec += 1.0

    def freeze_snapshot(self, t: float) -> Snapshot:
        """Immutable copy of current positions and ground-truth links."""
        kin = {
            vid: self._kinematics(vid)
            for vid in sorted(self.mobility.vehicles)
        }
        targets = {
            vid: self.mobility.vehicles[vid].target
            for vid in sorted(self.mobility.vehicles)
        }
        return Snapshot.from_kinematics(kin, targets, self.scenario.radio, t)


def run_scenario(
    scenario: Scenario,
    protocol: str,
    seed: int,
    event_sink: EventSink | None = None,
    snapshot_times: tuple[float, ...] = (),
) -> RunResult:
    """One deterministic run; identical inputs give identical outputs."""
    return Simulator(
        scenario, protocol, seed, event_sink, snapshot_times
    ).run()

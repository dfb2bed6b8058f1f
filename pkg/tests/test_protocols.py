import math
from collections import deque

import pytest

from tdmpsim.geokin import Kinematics, Point2, THIRDS, WeightFactors
from tdmpsim.protocols import (
    Beacon,
    DataPacket,
    Mode,
    NeighborEntry,
    ProtocolConfig,
    ablation_select,
    build_pfg,
    gpsr_select,
    on_beacon,
    purge_stale,
    tdmp_select,
)
from tdmpsim.radio import RssiSample


def kin(x, y, speed=0.0, accel=0.0, heading=0.0):
    return Kinematics(Point2(x, y), speed, accel, heading)


def beacon(nid, t, x, y, speed=0.0, accel=0.0, heading=0.0, target=None):
    return Beacon(
        sender_id=nid,
        timestamp=t,
        kinematics=kin(x, y, speed, accel, heading),
        target=target if target is not None else Point2(x, y),
    )


class TestNeighborTable:
    def test_first_beacon_creates_entry(self):
        table = {}
        on_beacon(table, beacon(7, 0.0, 10, 0), rssi=1e-6, now=0.0)
        assert set(table) == {7}
        assert len(table[7].rssi_window) == 1

    def test_window_eviction(self):
        table = {}
        for k in range(8):
            on_beacon(table, beacon(3, float(k), 10, 0), rssi=1e-6 * (k + 1),
                      now=float(k), window=5)
        window = table[3].rssi_window
        assert len(window) == 5
        assert [s.timestamp for s in window] == [3.0, 4.0, 5.0, 6.0, 7.0]

    def test_zero_rssi_rejected(self):
        with pytest.raises(ValueError):
            on_beacon({}, beacon(1, 0.0, 0, 0), rssi=0.0, now=0.0)

    def test_purge_keeps_fresh_and_boundary(self):
        table = {}
        on_beacon(table, beacon(1, 0.0, 0, 0), 1e-6, now=0.0)
        on_beacon(table, beacon(2, 5.0, 0, 0), 1e-6, now=5.0)
        purge_stale(table, now=5.0, ttl=3.0)
        assert set(table) == {2}
        # aged exactly ttl: retained (strict inequality)
        purge_stale(table, now=8.0, ttl=3.0)
        assert set(table) == {2}
        purge_stale(table, now=8.0 + 1e-9, ttl=3.0)
        assert set(table) == set()


class TestBuildPfg:
    CFG = ProtocolConfig(range_limit_m=300.0)

    def test_empty_table(self):
        assert build_pfg({}, kin(0, 0), Point2(100, 0), self.CFG, 0.0) == []

    def test_single_neighbor_at_global_max(self):
        table = {}
        on_beacon(table, beacon(4, 0.0, 50, 0), rssi=2e-6, now=0.0)
        members = build_pfg(table, kin(0, 0), Point2(100, 0), self.CFG, 0.0)
        assert [m.neighbor_id for m in members] == [4]
        assert members[0].avg_rssi == pytest.approx(2e-6)

    def test_spec_gate_example(self):
        # window means (m, 0.5m, 0.7m): the 0.6 * global-max gate keeps the
        # first and third neighbors only
        m = 1e-5
        table = {}
        on_beacon(table, beacon(1, 0.0, 50, 10), rssi=m, now=0.0)
        on_beacon(table, beacon(2, 0.0, 50, 0), rssi=0.5 * m, now=0.0)
        on_beacon(table, beacon(3, 0.0, 50, -10), rssi=0.7 * m, now=0.0)
        members = build_pfg(table, kin(0, 0), Point2(100, 0), self.CFG, 0.0)
        assert [m_.neighbor_id for m_ in members] == [1, 3]

    def test_gate_monotone_in_coefficient(self):
        m = 1e-5
        table = {}
        for nid, frac in ((1, 1.0), (2, 0.5), (3, 0.7), (4, 0.65)):
            on_beacon(table, beacon(nid, 0.0, 50, nid), rssi=frac * m, now=0.0)
        sizes = []
        for coeff in (0.0, 0.3, 0.6, 0.8, 1.0):
            cfg = ProtocolConfig(rssi_gate_coeff=coeff, range_limit_m=300.0)
            sizes.append(
                len(build_pfg(table, kin(0, 0), Point2(100, 0), cfg, 0.0))
            )
        assert sizes == sorted(sizes, reverse=True)

    def test_predicted_range_condition(self):
        table = {}
        # neighbor currently at 250 m moving away at 60 m/s: predicted out
        on_beacon(
            table, beacon(1, 0.0, 250, 0, speed=60.0, heading=0.0), 1e-6, 0.0
        )
        # neighbor at 250 m moving toward us: predicted in range
        on_beacon(
            table,
            beacon(2, 0.0, 250, 1, speed=60.0, heading=math.pi),
            1e-6,
            0.0,
        )
        members = build_pfg(table, kin(0, 0), Point2(500, 0), self.CFG, 0.0)
        assert [m.neighbor_id for m in members] == [2]

    def test_progress_condition_strict(self):
        table = {}
        on_beacon(table, beacon(1, 0.0, 0, 50), 1e-6, 0.0)  # same distance
        on_beacon(table, beacon(2, 0.0, 30, 0), 1e-6, 0.0)  # closer
        members = build_pfg(table, kin(0, 0), Point2(100, 0), self.CFG, 0.0)
        assert [m.neighbor_id for m in members] == [2]

    def test_neighbor_max_mode_gates_fast_changing_links(self):
        cfg = ProtocolConfig(rssi_gate_mode="neighbor_max", range_limit_m=300.0)
        table = {}
        # stable link: flat window
        for k in range(5):
            on_beacon(table, beacon(1, float(k), 50, 5), rssi=1e-6, now=float(k))
        # collapsing link: power fell by 4x across the window
        for k, frac in enumerate((4.0, 2.0, 1.4, 1.1, 1.0)):
            on_beacon(
                table, beacon(2, float(k), 50, -5), rssi=frac * 1e-6, now=float(k)
            )
        members = build_pfg(table, kin(0, 0), Point2(100, 0), cfg, 4.0)
        assert [m.neighbor_id for m in members] == [1]


def fig7_pfg():
    """Two candidates at equal predicted distance and direction, targets
    opposite: one shares the destination vehicle's target, one points away."""
    dest = Point2(100.0, 0.0)
    dest_target = Point2(200.0, 0.0)
    table = {}
    on_beacon(
        table,
        beacon(1, 0.0, 50, 30, target=Point2(-100.0, 60.0)),
        1e-6,
        0.0,
    )
    on_beacon(
        table, beacon(2, 0.0, 50, -30, target=Point2(200.0, 0.0)), 1e-6, 0.0
    )
    cfg = ProtocolConfig(range_limit_m=300.0)
    pfg = build_pfg(table, kin(0, 0), dest, cfg, 0.0)
    assert [m.neighbor_id for m in pfg] == [1, 2]
    return pfg, dest, dest_target


class TestSelect:
    def test_empty_pfg_is_local_maximum(self):
        assert tdmp_select([], kin(0, 0), Point2(1, 0), Point2(1, 0), THIRDS) is None

    def test_single_member(self):
        table = {}
        on_beacon(table, beacon(9, 0.0, 50, 0), 1e-6, 0.0)
        pfg = build_pfg(
            table, kin(0, 0), Point2(100, 0), ProtocolConfig(), 0.0
        )
        assert tdmp_select(
            pfg, kin(0, 0), Point2(100, 0), Point2(100, 0), THIRDS
        ) == 9

    def test_target_term_breaks_symmetry(self):
        pfg, dest, dest_target = fig7_pfg()
        chosen = tdmp_select(pfg, kin(0, 0), dest, dest_target, THIRDS)
        assert chosen == 2  # the candidate sharing the destination's target
        # the winning margin is exactly 2*q2 (cos 0 vs cos pi)
        from tdmpsim.geokin import neighbor_weight, distance

        d_sd = distance(Point2(0, 0), dest)
        d_id = distance(Point2(50, 30), dest)
        w_b = neighbor_weight(THIRDS, d_sd, d_id, 0.0, -1.0)
        w_c = neighbor_weight(THIRDS, d_sd, d_id, 0.0, 1.0)
        assert w_c - w_b == pytest.approx(2 * THIRDS.q2, abs=1e-12)

    def test_ablation_ignores_targets_and_tie_breaks_by_id(self):
        pfg, dest, dest_target = fig7_pfg()
        chosen = ablation_select(
            pfg, kin(0, 0), dest, dest_target, WeightFactors(0.5, 0.5, 0.0)
        )
        assert chosen == 1

    def test_ablation_equals_tdmp_when_target_term_moot(self):
        # all candidates share the destination target: q2 contributes
        # equally, so the two selectors agree
        dest = Point2(100, 0)
        dest_target = Point2(150, 0)
        table = {}
        for nid, ypos in ((1, 20), (2, -10), (3, 5)):
            on_beacon(
                table,
                beacon(nid, 0.0, 60, ypos, target=dest_target),
                1e-6,
                0.0,
            )
        pfg = build_pfg(table, kin(0, 0), dest, ProtocolConfig(), 0.0)
        assert tdmp_select(
            pfg, kin(0, 0), dest, dest_target, THIRDS
        ) == ablation_select(pfg, kin(0, 0), dest, dest_target, THIRDS)

    def test_gpsr_picks_closest(self):
        table = {}
        on_beacon(table, beacon(1, 0.0, 40, 0), 1e-6, 0.0)
        on_beacon(table, beacon(2, 0.0, 70, 5), 1e-6, 0.0)
        assert gpsr_select(table, Point2(0, 0), Point2(100, 0)) == 2

    def test_gpsr_local_maximum(self):
        assert gpsr_select({}, Point2(0, 0), Point2(100, 0)) is None
        table = {}
        on_beacon(table, beacon(1, 0.0, -50, 0), 1e-6, 0.0)
        assert gpsr_select(table, Point2(0, 0), Point2(100, 0)) is None

    def test_selection_stays_in_pfg(self):
        pfg, dest, dest_target = fig7_pfg()
        chosen = tdmp_select(pfg, kin(0, 0), dest, dest_target, THIRDS)
        assert chosen in {m.neighbor_id for m in pfg}


class TestPacketModes:
    def test_mode_discipline(self):
        p = DataPacket(0, 1, 2, Point2(0, 0), Point2(0, 0), 0.0)
        assert p.mode is Mode.GREEDY
        p.enter_perimeter(Point2(5, 5))
        assert p.mode is Mode.PERIMETER
        with pytest.raises(ValueError):
            p.enter_perimeter(Point2(1, 1))
        p.exit_perimeter()
        assert p.mode is Mode.GREEDY
        with pytest.raises(ValueError):
            p.exit_perimeter()

"""Right-hand-rule face traversal over the planarized neighbor graph.

Recovery walks the boundary of the face of the planar graph that lies
toward the destination. At each node the packet leaves along the first edge
counterclockwise from its arrival edge (or, on entry, from the ray toward
the destination). When the chosen edge crosses the segment from the
recovery entry point to the destination at a point strictly closer to the
destination than any crossing seen so far, the packet steps onto the
adjacent face (the crossing is recorded and the sweep continues). A packet
that would retraverse the first edge of its current face is undeliverable
and is dropped. Arrival at any node strictly closer to the destination than
the entry point reverts the packet to greedy mode.
"""

from __future__ import annotations

import enum
import math

from ..geokin import Point2, distance
from .packets import DataPacket, Mode
from .planar import PlanarGraph


class PerimeterAction(enum.Enum):
    FORWARD = "forward"
    REVERT = "revert"
    DROP = "drop"


def _orient(a: Point2, b: Point2, c: Point2) -> float:
    return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)


def _proper_crossing(
    p1: Point2, p2: Point2, q1: Point2, q2: Point2
) -> Point2 | None:
    """Interior intersection point of segments p1p2 and q1q2, else None."""
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != d2:
        t = d1 / (d1 - d2)
        return Point2(p1.x + t * (p2.x - p1.x), p1.y + t * (p2.y - p1.y))
    return None


def _ccw_candidates(
    graph: PlanarGraph, self_id: int, ref_angle: float, last_id: int | None
) -> list[int]:
    """Neighbors of self ordered counterclockwise starting just past the
    reference direction; the node we arrived from sorts last."""
    pos = graph.positions[self_id]
    keyed = []
    for nid in graph.neighbors(self_id):
        npos = graph.positions[nid]
        ang = math.atan2(npos.y - pos.y, npos.x - pos.x)
        delta = math.fmod(ang - ref_angle, 2.0 * math.pi)
        if delta < 0.0:
            delta += 2.0 * math.pi
        if nid == last_id and delta == 0.0:
            delta = 2.0 * math.pi
        keyed.append((delta, distance(pos, npos), nid))
    keyed.sort()
    return [nid for _, _, nid in keyed]


def perimeter_next_hop(
    packet: DataPacket, graph: PlanarGraph, self_id: int
) -> tuple[PerimeterAction, int | None]:
    """One recovery step at self_id over the planarized local graph.

    Returns (REVERT, None) when the packet should resume greedy forwarding,
    (FORWARD, neighbor) for the right-hand-rule next hop, or (DROP, None)
    when the face tour proves the destination unreachable. Mutates the
    packet's face bookkeeping (face_point, first_edge).
    """
    if packet.mode is not Mode.PERIMETER:
        raise ValueError("packet is not in perimeter mode")
    if packet.entry_pos is None or packet.face_point is None:
        raise ValueError("perimeter entry state missing")
    pos = graph.positions[self_id]
    dest = packet.destination_pos
    if distance(pos, dest) < distance(packet.entry_pos, dest):
        return (PerimeterAction.REVERT, None)
    if not graph.neighbors(self_id):
        return (PerimeterAction.DROP, None)
    prev = packet.arrived_from
    if prev is not None and prev in graph.positions:
        ppos = graph.positions[prev]
        ref = math.atan2(ppos.y - pos.y, ppos.x - pos.x)
        candidates = _ccw_candidates(graph, self_id, ref, prev)
    else:
        ref = math.atan2(dest.y - pos.y, dest.x - pos.x)
        candidates = _ccw_candidates(graph, self_id, ref, None)
    new_face = False
    idx = 0
    chosen = candidates[0]
    # slide counterclockwise across every edge that crosses the line to the
    # destination closer than the best crossing so far: each such crossing
    # moves the packet onto the next face
    while True:
        crossing = _proper_crossing(
            pos, graph.positions[chosen], packet.entry_pos, dest
        )
        if crossing is None or not (
            distance(crossing, dest) < distance(packet.face_point, dest)
        ):
            break
        packet.face_point = crossing
        new_face = True
        idx += 1
        if idx >= len(candidates):
            return (PerimeterAction.DROP, None)
        chosen = candidates[idx]
    if (
        not new_face
        and packet.first_edge is not None
        and packet.first_edge == (self_id, chosen)
    ):
        return (PerimeterAction.DROP, None)  # full face tour completed
    if new_face or packet.first_edge is None:
        packet.first_edge = (self_id, chosen)
    return (PerimeterAction.FORWARD, chosen)

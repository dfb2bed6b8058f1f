"""Routed payload state carried hop to hop."""

from __future__ import annotations

import enum
from dataclasses import dataclass

from ..geokin import Point2


class Mode(enum.Enum):
    GREEDY = "greedy"
    PERIMETER = "perimeter"


@dataclass
class DataPacket:
    """One routed packet; mutated in place as it travels.

    destination_pos / destination_target are the send-time snapshot (the
    packet is not refreshed in flight). Perimeter bookkeeping: entry_pos is
    where the packet entered recovery, face_point the best crossing toward
    the destination on the current face, first_edge the first directed edge
    traversed on the current face, arrived_from the previous hop.
    """

    packet_id: int
    source_id: int
    destination_id: int
    destination_pos: Point2
    destination_target: Point2
    created_at: float
    hop_count: int = 0
    mode: Mode = Mode.GREEDY
    entry_pos: Point2 | None = None
    face_point: Point2 | None = None
    first_edge: tuple[int, int] | None = None
    arrived_from: int | None = None

    def enter_perimeter(self, at: Point2) -> None:
        if self.mode is not Mode.GREEDY:
            raise ValueError("can only enter perimeter mode from greedy")
        self.mode = Mode.PERIMETER
        self.entry_pos = at
        self.face_point = at
        self.first_edge = None
        self.arrived_from = None

    def exit_perimeter(self) -> None:
        if self.mode is not Mode.PERIMETER:
            raise ValueError("not in perimeter mode")
        self.mode = Mode.GREEDY
        self.entry_pos = None
        self.face_point = None
        self.first_edge = None

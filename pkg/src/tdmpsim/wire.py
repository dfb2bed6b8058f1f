"""Canonical byte encodings for size accounting and golden-file checks.

The simulator never ships real bytes between vehicles; these layouts exist
so sizes are well-defined and deterministic. All fields are little-endian,
in declaration order:

Beacon (68 bytes):
    sender_id u32, timestamp f64, x f64, y f64, speed f64, accel f64,
    heading f64, target_x f64, target_y f64

DataPacket header (57 bytes):
    packet_id u32, source_id u32, destination_id u32, dest_x f64,
    dest_y f64, dest_target_x f64, dest_target_y f64, created_at f64,
    hop_count u32, mode u8 (0 greedy / 1 perimeter)

Perimeter bookkeeping (entry point, face point, first edge, previous hop)
is transient per-hop state and is not part of the header.
"""

from __future__ import annotations

import struct

from .geokin import Kinematics, Point2
from .protocols import Beacon, DataPacket, Mode

_BEACON = struct.Struct("<I8d")
_PACKET = struct.Struct("<III5dIB")

BEACON_WIRE_SIZE = _BEACON.size
PACKET_HEADER_WIRE_SIZE = _PACKET.size


def encode_beacon(b: Beacon) -> bytes:
    k = b.kinematics
    return _BEACON.pack(
        b.sender_id,
        b.timestamp,
        k.position.x,
        k.position.y,
        k.speed,
        k.acceleration,
        k.heading,
        b.target.x,
        b.target.y,
    )


def decode_beacon(data: bytes) -> Beacon:
    (sid, ts, x, y, v, a, heading, tx, ty) = _BEACON.unpack(data)
    return Beacon(
        sender_id=sid,
        timestamp=ts,
        kinematics=Kinematics(
            position=Point2(x, y), speed=v, acceleration=a, heading=heading
        ),
        target=Point2(tx, ty),
    )


def encode_packet_header(p: DataPacket) -> bytes:
    return _PACKET.pack(
        p.packet_id,
        p.source_id,
        p.destination_id,
        p.destination_pos.x,
        p.destination_pos.y,
        p.destination_target.x,
        p.destination_target.y,
        p.created_at,
        p.hop_count,
        0 if p.mode is Mode.GREEDY else 1,
    )


def decode_packet_header(data: bytes) -> DataPacket:
    (pid, src, dst, dx, dy, tx, ty, created, hops, mode) = _PACKET.unpack(data)
    return DataPacket(
        packet_id=pid,
        source_id=src,
        destination_id=dst,
        destination_pos=Point2(dx, dy),
        destination_target=Point2(tx, ty),
        created_at=created,
        hop_count=hops,
        mode=Mode.GREEDY if mode == 0 else Mode.PERIMETER,
    )

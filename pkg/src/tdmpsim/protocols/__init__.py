"""Routing protocols: neighbor state, candidate gating, next-hop selection,
planarization and perimeter recovery."""

from .neighbors import (
    DEFAULT_WINDOW,
    Beacon,
    NeighborEntry,
    NeighborTable,
    ProtocolConfig,
    on_beacon,
    purge_stale,
)
from .packets import DataPacket, Mode
from .perimeter import PerimeterAction, perimeter_next_hop
from .pfg import PfgMember, build_pfg
from .planar import PlanarGraph, planarize_rng
from .selection import ablation_select, gpsr_select, tdmp_select

__all__ = [
    "Beacon",
    "DEFAULT_WINDOW",
    "DataPacket",
    "Mode",
    "NeighborEntry",
    "NeighborTable",
    "PerimeterAction",
    "PfgMember",
    "PlanarGraph",
    "ProtocolConfig",
    "ablation_select",
    "build_pfg",
    "gpsr_select",
    "on_beacon",
    "perimeter_next_hop",
    "planarize_rng",
    "purge_stale",
    "tdmp_select",
]

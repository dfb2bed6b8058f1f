"""Traffic generation and movement: road graphs, demand, car following."""

from .carfollow import MobilityConfig, krauss_safe_speed
from .demand import (
    ODFormatError,
    ODMatrix,
    Trip,
    UnreachablePairError,
    generate_trips,
    load_od,
    uniform_od,
)
from .network import (
    Edge,
    InvalidDimensionError,
    NetworkFormatError,
    RoadNetwork,
    UnreachableError,
    build_grid,
    load_network,
    route_length,
    shortest_route,
)
from .state import MobilityState, Vehicle

__all__ = [
    "Edge",
    "InvalidDimensionError",
    "MobilityConfig",
    "MobilityState",
    "NetworkFormatError",
    "ODFormatError",
    "ODMatrix",
    "RoadNetwork",
    "Trip",
    "UnreachableError",
    "UnreachablePairError",
    "Vehicle",
    "build_grid",
    "generate_trips",
    "krauss_safe_speed",
    "load_network",
    "load_od",
    "route_length",
    "shortest_route",
    "uniform_od",
]

"""Discrete-event simulation core."""

from .forwarding import Action, Decision, PROTOCOL_NAMES, decide_next_hop
from .neighbor_state import NeighborState
from .simulator import (
    RunResult,
    Scenario,
    Simulator,
    TrafficPattern,
    run_scenario,
)
from .snapshot import Snapshot, StaticRouteResult, route_on_snapshot

__all__ = [
    "Action",
    "Decision",
    "NeighborState",
    "PROTOCOL_NAMES",
    "RunResult",
    "Scenario",
    "Simulator",
    "Snapshot",
    "StaticRouteResult",
    "TrafficPattern",
    "decide_next_hop",
    "route_on_snapshot",
    "run_scenario",
]

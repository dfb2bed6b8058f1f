"""Origin/destination demand and trip generation."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..geokin import Point2
from .network import RoadNetwork, UnreachableError, shortest_route


class ODFormatError(ValueError):
    pass


class UnreachablePairError(UnreachableError):
    pass


@dataclass
class ODMatrix:
    """Demand counts per (origin node, destination node) over one period."""

    entries: dict[tuple[int, int], int]
    period: float

    def __post_init__(self):
        if self.period <= 0:
            raise ODFormatError("demand period must be > 0")
        for (o, d), count in self.entries.items():
            if o == d:
                raise ODFormatError(f"self-loop demand {o}->{d}")
            if count < 0:
                raise ODFormatError(f"negative demand for {o}->{d}")

    @property
    def total(self) -> int:
        return sum(self.entries.values())

    def scaled(self, total: int) -> "ODMatrix":
        """Uniformly rescale demand to the given vehicle total.

        Largest-remainder apportionment over entries in sorted key order, so
        the result is deterministic and sums exactly to `total`.
        """
        if total < 0:
            raise ValueError("total must be >= 0")
        base = self.total
        if base == 0:
            raise ODFormatError("cannot scale an all-zero demand matrix")
        keys = sorted(self.entries)
        quotas = [(self.entries[k] * total) / base for k in keys]
        counts = [int(q) for q in quotas]
        short = total - sum(counts)
        remainders = sorted(
            range(len(keys)), key=lambda i: (-(quotas[i] - counts[i]), keys[i])
        )
        for i in remainders[:short]:
            counts[i] += 1
        return ODMatrix(
            entries={k: c for k, c in zip(keys, counts) if c > 0},
            period=self.period,
        )


@dataclass(frozen=True)
class Trip:
    """One vehicle's planned journey."""

    vehicle_id: int
    departure_time: float
    origin: int
    destination: int
    route: tuple[int, ...]
    target: Point2  # coordinates of the destination node


def uniform_od(net: RoadNetwork, total: int, period: float) -> ODMatrix:
    """Spread `total` vehicles evenly over all ordered node pairs.

    Pairs are taken in sorted order with an even stride so the selected
    origins/destinations cover the network rather than clustering; fully
    deterministic for a given (network, total).
    """
    pairs = [
        (o, d)
        for o in sorted(net.nodes)
        for d in sorted(net.nodes)
        if o != d
    ]
    if not pairs:
        raise ODFormatError("network has fewer than 2 nodes")
    n = len(pairs)
    base, extra = divmod(total, n)
    entries: dict[tuple[int, int], int] = (
        {p: base for p in pairs} if base else {}
    )
    for k in range(extra):
        pair = pairs[(k * n) // extra]
        entries[pair] = entries.get(pair, 0) + 1
    return ODMatrix(entries=entries, period=period)


def generate_trips(net: RoadNetwork, od: ODMatrix, seed: int) -> list[Trip]:
    """Materialize the demand into routed trips with random departures.

    Departure times are drawn independently and uniformly over [0, period)
    from a generator seeded by `seed`; routes are shortest paths; vehicle
    ids are assigned in sorted (origin, destination) order. The result is a
    pure function of (net, od, seed).
    """
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed)))
    trips: list[Trip] = []
    vid = 0
    route_cache: dict[tuple[int, int], tuple[int, ...]] = {}
    for (origin, destination) in sorted(od.entries):
        count = od.entries[(origin, destination)]
        if count == 0:
            continue
        key = (origin, destination)
        if key not in route_cache:
            try:
                route_cache[key] = tuple(
                    shortest_route(net, origin, destination)
                )
            except UnreachableError as exc:
                raise UnreachablePairError(origin, destination) from exc
        route = route_cache[key]
        target = net.node_pos(destination)
        for dep in rng.uniform(0.0, od.period, size=count):
            trips.append(
                Trip(
                    vehicle_id=vid,
                    departure_time=float(dep),
                    origin=origin,
                    destination=destination,
                    route=route,
                    target=target,
                )
            )
            vid += 1
    return trips


def load_od(path: str) -> ODMatrix:
    """Parse a whitespace-delimited demand file.

    One record per line, `#` starts a comment:
        period <seconds>
        od <origin> <destination> <count>
    """
    period: float | None = None
    entries: dict[tuple[int, int], int] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "period" and len(parts) == 2:
                    period = float(parts[1])
                elif parts[0] == "od" and len(parts) == 4:
                    key = (int(parts[1]), int(parts[2]))
                    entries[key] = entries.get(key, 0) + int(parts[3])
                else:
                    raise ValueError(f"unrecognized record {parts[0]!r}")
            except (ValueError, IndexError) as exc:
                raise ODFormatError(f"{path}:{lineno}: {exc}") from exc
    if period is None:
        raise ODFormatError(f"{path}: missing `period` header")
    return ODMatrix(entries=entries, period=period)

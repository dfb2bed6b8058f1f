"""Directed road graphs: grid construction, file loading, shortest routes."""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

from ..geokin import Point2

# Straight edges must match the Euclidean node distance to this tolerance.
LENGTH_TOLERANCE = 1e-6


class InvalidDimensionError(ValueError):
    pass


class UnreachableError(ValueError):
    def __init__(self, origin: int, destination: int):
        super().__init__(f"no route from node {origin} to node {destination}")
        self.origin = origin
        self.destination = destination


class NetworkFormatError(ValueError):
    pass


@dataclass(frozen=True)
class Edge:
    edge_id: int
    frm: int
    to: int
    length: float
    speed_limit: float
    lanes: int = 1


@dataclass
class RoadNetwork:
    """Node coordinates plus directed edges, with derived adjacency."""

    nodes: dict[int, Point2]
    edges: dict[int, Edge]
    out_edges: dict[int, tuple[int, ...]] = field(init=False, repr=False)

    def __post_init__(self):
        for e in self.edges.values():
            if e.frm not in self.nodes or e.to not in self.nodes:
                raise NetworkFormatError(
                    f"edge {e.edge_id} references unknown node"
                )
            if e.lanes < 1:
                raise NetworkFormatError(f"edge {e.edge_id}: lanes must be >= 1")
            if e.speed_limit <= 0:
                raise NetworkFormatError(
                    f"edge {e.edge_id}: speed limit must be > 0"
                )
            a, b = self.nodes[e.frm], self.nodes[e.to]
            euclid = math.hypot(a.x - b.x, a.y - b.y)
            if e.length <= 0 or abs(e.length - euclid) > LENGTH_TOLERANCE:
                raise NetworkFormatError(
                    f"edge {e.edge_id}: length {e.length} does not match node "
                    f"distance {euclid}"
                )
        adj: dict[int, list[int]] = {nid: [] for nid in self.nodes}
        for eid in sorted(self.edges):
            adj[self.edges[eid].frm].append(eid)
        # deterministic relaxation order: by (next node, edge id)
        self.out_edges = {
            nid: tuple(
                sorted(eids, key=lambda i: (self.edges[i].to, i))
            )
            for nid, eids in adj.items()
        }

    def node_pos(self, node_id: int) -> Point2:
        return self.nodes[node_id]

    def edge_heading(self, edge_id: int) -> float:
        e = self.edges[edge_id]
        a, b = self.nodes[e.frm], self.nodes[e.to]
        h = math.atan2(b.y - a.y, b.x - a.x)
        return h if h >= 0.0 else h + 2.0 * math.pi

    def position_on_edge(self, edge_id: int, offset: float) -> Point2:
        e = self.edges[edge_id]
        a, b = self.nodes[e.frm], self.nodes[e.to]
        f = offset / e.length
        return Point2(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f)


def build_grid(
    blocks_x: int,
    blocks_y: int,
    block_len: float,
    speed_limit: float,
    lanes: int = 1,
) -> RoadNetwork:
    """Bidirectional Manhattan grid of blocks_x x blocks_y square blocks.

    Junctions sit every block_len meters; node ids are row-major from the
    south-west corner; every road segment gets one directed edge per
    direction. Total extent is blocks_x*block_len x blocks_y*block_len.
    """
    if blocks_x < 1 or blocks_y < 1:
        raise InvalidDimensionError("grid needs at least 1x1 blocks")
    if block_len <= 0:
        raise InvalidDimensionError("block_len must be > 0")
    nx, ny = blocks_x + 1, blocks_y + 1
    nodes = {
        iy * nx + ix: Point2(ix * block_len, iy * block_len)
        for iy in range(ny)
        for ix in range(nx)
    }
    edges: dict[int, Edge] = {}

    def add_pair(u: int, v: int):
        for frm, to in ((u, v), (v, u)):
            eid = len(edges)
            edges[eid] = Edge(eid, frm, to, block_len, speed_limit, lanes)

    for iy in range(ny):
        for ix in range(nx):
            nid = iy * nx + ix
            if ix + 1 < nx:
                add_pair(nid, nid + 1)
            if iy + 1 < ny:
                add_pair(nid, nid + nx)
    return RoadNetwork(nodes=nodes, edges=edges)


def shortest_route(
    net: RoadNetwork,
    origin: int,
    destination: int,
    weights: dict[int, float] | None = None,
) -> list[int]:
    """Minimum-cost edge list from origin to destination (Dijkstra).

    Cost is edge length unless an explicit per-edge weight map is given.
    Ties between equal-cost paths break toward the smaller predecessor node
    id, so the result is deterministic.
    """
    if origin not in net.nodes or destination not in net.nodes:
        raise KeyError("origin/destination must be network nodes")
    if origin == destination:
        return []

    def cost(eid: int) -> float:
        return weights[eid] if weights is not None else net.edges[eid].length

    dist: dict[int, float] = {origin: 0.0}
    parent: dict[int, tuple[int, int]] = {}  # node -> (prev node, edge id)
    done: set[int] = set()
    heap: list[tuple[float, int]] = [(0.0, origin)]
    while heap:
        d, u = heapq.heappop(heap)
        if u in done:
            continue
        done.add(u)
        if u == destination:
            break
        for eid in net.out_edges[u]:
            v = net.edges[eid].to
            nd = d + cost(eid)
            old = dist.get(v)
            if old is None or nd < old:
                dist[v] = nd
                parent[v] = (u, eid)
                heapq.heappush(heap, (nd, v))
            elif nd == old and v not in done and (u, eid) < parent[v]:
                parent[v] = (u, eid)
    if destination not in done:
        raise UnreachableError(origin, destination)
    route: list[int] = []
    node = destination
    while node != origin:
        prev, eid = parent[node]
        route.append(eid)
        node = prev
    route.reverse()
    return route


def route_length(net: RoadNetwork, route: list[int]) -> float:
    return sum(net.edges[eid].length for eid in route)


def load_network(path: str) -> RoadNetwork:
    """Parse a whitespace-delimited road network file.

    One record per line, `#` starts a comment:
        node <id> <x> <y>
        edge <id> <from> <to> <speed_limit> <lanes>
    Edge lengths are the Euclidean node distances (edges are straight).
    """
    nodes: dict[int, Point2] = {}
    raw_edges: list[tuple[int, int, int, int, float, int]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            parts = line.split()
            try:
                if parts[0] == "node" and len(parts) == 4:
                    nid = int(parts[1])
                    if nid in nodes:
                        raise ValueError(f"duplicate node id {nid}")
                    nodes[nid] = Point2(float(parts[2]), float(parts[3]))
                elif parts[0] == "edge" and len(parts) == 6:
                    raw_edges.append(
                        (
                            lineno,
                            int(parts[1]),
                            int(parts[2]),
                            int(parts[3]),
                            float(parts[4]),
                            int(parts[5]),
                        )
                    )
                else:
                    raise ValueError(f"unrecognized record {parts[0]!r}")
            except (ValueError, IndexError) as exc:
                raise NetworkFormatError(f"{path}:{lineno}: {exc}") from exc
    edges: dict[int, Edge] = {}
    for lineno, eid, frm, to, limit, lanes in raw_edges:
        if eid in edges:
            raise NetworkFormatError(f"{path}:{lineno}: duplicate edge id {eid}")
        if frm not in nodes or to not in nodes:
            raise NetworkFormatError(
                f"{path}:{lineno}: edge {eid} references unknown node"
            )
        a, b = nodes[frm], nodes[to]
        length = math.hypot(a.x - b.x, a.y - b.y)
        if length <= 0:
            raise NetworkFormatError(
                f"{path}:{lineno}: edge {eid} has zero length"
            )
        edges[eid] = Edge(eid, frm, to, length, limit, lanes)
    if not nodes:
        raise NetworkFormatError(f"{path}: no nodes defined")
    return RoadNetwork(nodes=nodes, edges=edges)

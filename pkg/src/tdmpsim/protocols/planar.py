"""Local planarization via the relative neighborhood graph."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .._kernels import rng_edges
from ..geokin import Point2


@dataclass(frozen=True)
class PlanarGraph:
    """Planarized local view: node positions plus symmetric adjacency."""

    positions: dict[int, Point2]
    adjacency: dict[int, tuple[int, ...]]

    def neighbors(self, node_id: int) -> tuple[int, ...]:
        return self.adjacency.get(node_id, ())

    def edges(self) -> set[tuple[int, int]]:
        return {
            (u, v)
            for u, nbrs in self.adjacency.items()
            for v in nbrs
            if u < v
        }


def planarize_rng(
    neighbors: Iterable[tuple[int, Point2]],
    self_node: tuple[int, Point2] | None = None,
    radius: float | None = None,
) -> PlanarGraph:
    """Relative neighborhood graph over the given points.

    Edge (u, v) survives iff no witness w in the set has both
    d(u, w) < d(u, v) and d(w, v) < d(u, v) (strict: ties keep the edge,
    so e.g. an equilateral triangle keeps all three edges). A radius caps
    candidate edges (unit-disk restriction); None means no cap.
    """
    points: list[tuple[int, Point2]] = list(neighbors)
    if self_node is not None:
        points.append(self_node)
    points.sort(key=lambda item: item[0])
    ids = [nid for nid, _ in points]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate node ids in planarization input")
    n = len(points)
    positions = {nid: pos for nid, pos in points}
    if n < 2:
        return PlanarGraph(positions=positions, adjacency={i: () for i in ids})
    x = np.array([p.x for _, p in points], dtype=np.float64)
    y = np.array([p.y for _, p in points], dtype=np.float64)
    adj = np.zeros((n, n), dtype=np.uint8)
    radius2 = float(radius) * float(radius) if radius is not None else 0.0
    rng_edges(x, y, radius2, adj)
    adjacency = {
        ids[i]: tuple(ids[j] for j in np.nonzero(adj[i])[0])
        for i in range(n)
    }
    return PlanarGraph(positions=positions, adjacency=adjacency)

"""Matrix-backed neighbor bookkeeping for a whole run.

Beacon rounds touch O(n^2) directed pairs every simulated second, so the
per-pair records (RSSI ring, last beacon, last-heard time) live in dense
arrays updated by the compiled/numpy kernels. Routing decisions pull a
receiver's row out into the object-level NeighborTable, which keeps the
protocol semantics in exactly one place.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .._kernels import beacon_scatter, pair_reception
from ..geokin import Kinematics, Point2
from ..protocols import Beacon, NeighborEntry, NeighborTable
from ..radio import RadioConfig, RssiSample


class NeighborState:
    def __init__(self, n: int, window: int):
        self.n = n
        self.window = window
        shape = (n, n)
        self.ring_p = np.zeros((n, n, window), dtype=np.float64)
        self.ring_t = np.zeros((n, n, window), dtype=np.float64)
        self.ring_len = np.zeros(shape, dtype=np.uint8)
        self.ring_head = np.zeros(shape, dtype=np.uint8)
        self.last_heard = np.full(shape, -math.inf, dtype=np.float64)
        self.bx = np.zeros(shape, dtype=np.float64)
        self.by = np.zeros(shape, dtype=np.float64)
        self.bv = np.zeros(shape, dtype=np.float64)
        self.ba = np.zeros(shape, dtype=np.float64)
        self.bth = np.zeros(shape, dtype=np.float64)
        self.btx = np.zeros(shape, dtype=np.float64)
        self.bty = np.zeros(shape, dtype=np.float64)
        self.btime = np.zeros(shape, dtype=np.float64)
        # scratch for the reception kernel
        self._power = np.zeros(shape, dtype=np.float64)
        self._mask = np.zeros(shape, dtype=np.uint8)

    def beacon_round(
        self,
        t: float,
        radio: RadioConfig,
        alive: np.ndarray,
        x: np.ndarray,
        y: np.ndarray,
        v: np.ndarray,
        a: np.ndarray,
        heading: np.ndarray,
        tgx: np.ndarray,
        tgy: np.ndarray,
    ) -> None:
        """Deliver every live vehicle's beacon to every receiver in range."""
        cross = radio.crossover_m
        pair_reception(
            x,
            y,
            alive,
            radio.friis_coeff,
            radio.tworay_coeff,
            cross * cross,
            radio.range_limit_m * radio.range_limit_m,
            radio.sensitivity_mw,
            self._power,
            self._mask,
        )
        beacon_scatter(
            self._mask,
            self._power,
            x,
            y,
            v,
            a,
            heading,
            tgx,
            tgy,
            t,
            self.ring_p,
            self.ring_t,
            self.ring_len,
            self.ring_head,
            self.last_heard,
            self.bx,
            self.by,
            self.bv,
            self.ba,
            self.bth,
            self.btx,
            self.bty,
            self.btime,
        )

    def evict(self, receiver: int, neighbor: int) -> None:
        """Forget a neighbor after link-layer feedback of a failed send."""
        self.last_heard[receiver, neighbor] = -math.inf
        self.ring_len[receiver, neighbor] = 0
        self.ring_head[receiver, neighbor] = 0

    def table_view(self, receiver: int, now: float, ttl: float) -> NeighborTable:
        """The receiver's neighbor table with stale entries purged.

        An entry survives iff now - last_heard <= ttl (same boundary rule
        as purge_stale).
        """
        row = self.last_heard[receiver]
        keep = np.nonzero(row >= now - ttl)[0]
        table: NeighborTable = {}
        for j in keep:
            j = int(j)
            length = int(self.ring_len[receiver, j])
            head = int(self.ring_head[receiver, j])
            window: deque[RssiSample] = deque(maxlen=self.window)
            for k in range(length):
                slot = (head - length + k) % self.window
                window.append(
                    RssiSample(
                        j,
                        float(self.ring_t[receiver, j, slot]),
                        float(self.ring_p[receiver, j, slot]),
                    )
                )
            beacon = Beacon(
                sender_id=j,
                timestamp=float(self.btime[receiver, j]),
                kinematics=Kinematics(
                    position=Point2(
                        float(self.bx[receiver, j]),
                        float(self.by[receiver, j]),
                    ),
                    speed=float(self.bv[receiver, j]),
                    acceleration=float(self.ba[receiver, j]),
                    heading=float(self.bth[receiver, j]),
                ),
                target=Point2(
                    float(self.btx[receiver, j]), float(self.bty[receiver, j])
                ),
            )
            table[j] = NeighborEntry(
                neighbor_id=j,
                last_beacon=beacon,
                rssi_window=window,
                last_heard=float(row[j]),
            )
        return table

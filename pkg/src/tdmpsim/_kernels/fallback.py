"""Pure-python (numpy) reference implementation of the hot kernels.

This module defines the semantics; the compiled core in _core.pyx mirrors it
operation-for-operation so both backends return bit-identical arrays.
"""

from __future__ import annotations

import numpy as np

# Co-located antennas (exactly zero distance) receive at the 1 m near-field
# power instead of dividing by zero.
NEAR_FIELD_D2 = 1.0


def pair_reception(
    x: np.ndarray,
    y: np.ndarray,
    alive: np.ndarray,
    friis_coeff: float,
    tworay_coeff: float,
    cross2: float,
    range2: float,
    sens_mw: float,
    power_out: np.ndarray,
    mask_out: np.ndarray,
) -> None:
    """Pairwise reception over current positions.

    For every ordered pair (receiver i, sender j), i != j, both alive:
    mask_out[i, j] = 1 iff the squared distance is within range2 and the
    received power clears sens_mw; power_out[i, j] holds that power (0 where
    reception fails). Power follows the two-branch model on squared
    distances: two-ray for d2 >= cross2, Friis below.
    """
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    d2 = dx * dx + dy * dy
    d2s = np.where(d2 == 0.0, NEAR_FIELD_D2, d2)
    power = np.where(
        d2s >= cross2, tworay_coeff / (d2s * d2s), friis_coeff / d2s
    )
    pair_alive = (alive[:, None] != 0) & (alive[None, :] != 0)
    np.fill_diagonal(pair_alive, False)
    ok = pair_alive & (d2 <= range2) & (power >= sens_mw)
    mask_out[...] = ok
    power_out[...] = np.where(ok, power, 0.0)


def beacon_scatter(
    mask: np.ndarray,
    power: np.ndarray,
    x: np.ndarray,
    y: np.ndarray,
    v: np.ndarray,
    a: np.ndarray,
    heading: np.ndarray,
    tgx: np.ndarray,
    tgy: np.ndarray,
    t: float,
    ring_p: np.ndarray,
    ring_t: np.ndarray,
    ring_len: np.ndarray,
    ring_head: np.ndarray,
    last_heard: np.ndarray,
    bx: np.ndarray,
    by: np.ndarray,
    bv: np.ndarray,
    ba: np.ndarray,
    bth: np.ndarray,
    btx: np.ndarray,
    bty: np.ndarray,
    btime: np.ndarray,
) -> None:
    """Record sender j's beacon in receiver i's per-pair state where mask=1.

    The RSSI ring (ring_p/ring_t, head/len) holds the last W samples per
    directed pair; beacon kinematics and target are copied from the sender
    columns; last_heard/btime are set to the round time t.
    """
    w = ring_p.shape[2]
    ii, jj = np.nonzero(mask)
    heads = ring_head[ii, jj].astype(np.intp)
    ring_p[ii, jj, heads] = power[ii, jj]
    ring_t[ii, jj, heads] = t
    ring_head[ii, jj] = ((heads + 1) % w).astype(ring_head.dtype)
    ring_len[ii, jj] = np.minimum(ring_len[ii, jj] + 1, w).astype(
        ring_len.dtype
    )
    last_heard[ii, jj] = t
    bx[ii, jj] = x[jj]
    by[ii, jj] = y[jj]
    bv[ii, jj] = v[jj]
    ba[ii, jj] = a[jj]
    bth[ii, jj] = heading[jj]
    btx[ii, jj] = tgx[jj]
    bty[ii, jj] = tgy[jj]
    btime[ii, jj] = t


def rng_edges(
    x: np.ndarray, y: np.ndarray, radius2: float, adj_out: np.ndarray
) -> None:
    """Relative-neighborhood-graph adjacency over the points.

    Edge (u, v) is kept iff no witness w has max(d(u,w), d(w,v)) < d(u,v)
    (strict, so e.g. equilateral triangles keep all edges). radius2 > 0
    restricts candidate edges to squared length <= radius2; radius2 <= 0
    means the complete graph is the candidate set. adj_out is a symmetric
    0/1 matrix with a zero diagonal.
    """
    n = x.shape[0]
    dx = x[:, None] - x[None, :]
    dy = y[:, None] - y[None, :]
    d2 = dx * dx + dy * dy
    if radius2 > 0.0:
        adj = d2 <= radius2
    else:
        adj = np.ones((n, n), dtype=bool)
    np.fill_diagonal(adj, False)
    for w in range(n):
        bad = (d2[:, w][:, None] < d2) & (d2[w, :][None, :] < d2)
        adj &= ~bad
    adj_out[...] = adj

# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels; semantics defined by and kept bit-identical to fallback.py."""

import numpy as np

cimport numpy as cnp

cnp.import_array()

DEF NEAR_FIELD_D2 = 1.0


def pair_reception(
    double[::1] x,
    double[::1] y,
    unsigned char[::1] alive,
    double friis_coeff,
    double tworay_coeff,
    double cross2,
    double range2,
    double sens_mw,
    double[:, ::1] power_out,
    unsigned char[:, ::1] mask_out,
):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t i, j
    cdef double dx, dy, d2, d2s, p
    for i in range(n):
        if not alive[i]:
            for j in range(n):
                power_out[i, j] = 0.0
                mask_out[i, j] = 0
            continue
        for j in range(n):
            power_out[i, j] = 0.0
            mask_out[i, j] = 0
            if j == i or not alive[j]:
                continue
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            d2 = dx * dx + dy * dy
            d2s = NEAR_FIELD_D2 if d2 == 0.0 else d2
            if d2s >= cross2:
                p = tworay_coeff / (d2s * d2s)
            else:
                p = friis_coeff / d2s
            if d2 <= range2 and p >= sens_mw:
                power_out[i, j] = p
                mask_out[i, j] = 1


def beacon_scatter(
    unsigned char[:, ::1] mask,
    double[:, ::1] power,
    double[::1] x,
    double[::1] y,
    double[::1] v,
    double[::1] a,
    double[::1] heading,
    double[::1] tgx,
    double[::1] tgy,
    double t,
    double[:, :, ::1] ring_p,
    double[:, :, ::1] ring_t,
    unsigned char[:, ::1] ring_len,
    unsigned char[:, ::1] ring_head,
    double[:, ::1] last_heard,
    double[:, ::1] bx,
    double[:, ::1] by,
    double[:, ::1] bv,
    double[:, ::1] ba,
    double[:, ::1] bth,
    double[:, ::1] btx,
    double[:, ::1] bty,
    double[:, ::1] btime,
):
    cdef Py_ssize_t n = mask.shape[0]
    cdef int w = <int> ring_p.shape[2]
    cdef Py_ssize_t i, j
    cdef int head
    for i in range(n):
        for j in range(n):
            if not mask[i, j]:
                continue
            head = ring_head[i, j]
            ring_p[i, j, head] = power[i, j]
            ring_t[i, j, head] = t
            ring_head[i, j] = <unsigned char> ((head + 1) % w)
            if ring_len[i, j] < w:
                ring_len[i, j] = ring_len[i, j] + 1
            last_heard[i, j] = t
            bx[i, j] = x[j]
            by[i, j] = y[j]
            bv[i, j] = v[j]
            ba[i, j] = a[j]
            bth[i, j] = heading[j]
            btx[i, j] = tgx[j]
            bty[i, j] = tgy[j]
            btime[i, j] = t


def rng_edges(
    double[::1] x, double[::1] y, double radius2, unsigned char[:, ::1] adj_out
):
    cdef Py_ssize_t n = x.shape[0]
    cdef Py_ssize_t u, v, w
    cdef double dx, dy, duv, duw, dwv
    cdef bint keep
    # squared pairwise distances
    d2_arr = np.empty((n, n), dtype=np.float64)
    cdef double[:, ::1] d2 = d2_arr
    for u in range(n):
        d2[u, u] = 0.0
        for v in range(u + 1, n):
            dx = x[u] - x[v]
            dy = y[u] - y[v]
            duv = dx * dx + dy * dy
            d2[u, v] = duv
            d2[v, u] = duv
    for u in range(n):
        adj_out[u, u] = 0
        for v in range(u + 1, n):
            duv = d2[u, v]
            if radius2 > 0.0 and duv > radius2:
                adj_out[u, v] = 0
                adj_out[v, u] = 0
                continue
            keep = True
            for w in range(n):
                if d2[u, w] < duv and d2[w, v] < duv:
                    keep = False
                    break
            adj_out[u, v] = keep
            adj_out[v, u] = keep

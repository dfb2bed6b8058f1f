"""Received power, reception gating, and per-hop airtime.

Propagation follows the classic piecewise line-of-sight model: free-space
(Friis) attenuation below the crossover distance 4*pi*h_t*h_r/lambda and the
flat-earth two-ray d^-4 law beyond it; the two branches agree at the
crossover. Reception is deterministic: a frame is received iff the receiver
is inside the configured range AND the received power clears the sensitivity
floor (an optional seeded drop probability hook exists for experiments,
default off). Power is handled in linear milliwatts everywhere inside the
simulator; dBm only appears at configuration boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

SPEED_OF_LIGHT = 299_792_458.0
FOUR_PI = 4.0 * math.pi


class NonPositiveDistanceError(ValueError):
    """Received power is undefined at zero distance."""


def dbm_to_mw(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0)


def mw_to_dbm(mw: float) -> float:
    if mw <= 0.0:
        raise ValueError(f"power must be positive, got {mw}")
    return 10.0 * math.log10(mw)


class RssiSample(NamedTuple):
    """One received-signal-strength observation, linear milliwatts."""

    neighbor_id: int
    timestamp: float
    power_mw: float


@dataclass(frozen=True)
class RadioConfig:
    """Physical-layer configuration (defaults: 5.89 GHz DSRC-style link).

    tx_power_mw 15, range 300 m, sensitivity -89 dBm, 18 Mbit/s channel and
    1 KiB packets; antenna heights 1.5 m with unit gains. processing_delay_s
    is the fixed per-hop handling cost added on top of airtime.
    """

    tx_power_mw: float = 15.0
    frequency_hz: float = 5.89e9
    range_limit_m: float = 300.0
    sensitivity_dbm: float = -89.0
    antenna_height_tx_m: float = 1.5
    antenna_height_rx_m: float = 1.5
    antenna_gain_tx: float = 1.0
    antenna_gain_rx: float = 1.0
    channel_capacity_bps: float = 18e6
    packet_size_bytes: int = 1024
    processing_delay_s: float = 1e-3
    drop_probability: float = 0.0

    def __post_init__(self):
        if self.tx_power_mw <= 0.0:
            raise ValueError("tx_power_mw must be > 0")
        if self.sensitivity_dbm >= 0.0:
            raise ValueError("sensitivity_dbm must be < 0 dBm")
        if self.range_limit_m <= 0.0:
            raise ValueError("range_limit_m must be > 0")
        if self.channel_capacity_bps <= 0.0:
            raise ValueError("channel_capacity_bps must be > 0")
        if not 0.0 <= self.drop_probability < 1.0:
            raise ValueError("drop_probability must be in [0, 1)")

    @property
    def wavelength_m(self) -> float:
        return SPEED_OF_LIGHT / self.frequency_hz

    @property
    def crossover_m(self) -> float:
        """Distance where the Friis and two-ray branches meet."""
        return (
            FOUR_PI
            * self.antenna_height_tx_m
            * self.antenna_height_rx_m
            / self.wavelength_m
        )

    @property
    def sensitivity_mw(self) -> float:
        return dbm_to_mw(self.sensitivity_dbm)

    # Branch numerators, precomputed so the compiled kernels and this module
    # evaluate the exact same expression tree (bit-identical doubles).
    @property
    def friis_coeff(self) -> float:
        lam = self.wavelength_m
        return (
            self.tx_power_mw
            * self.antenna_gain_tx
            * self.antenna_gain_rx
            * lam
            * lam
            / (FOUR_PI * FOUR_PI)
        )

    @property
    def tworay_coeff(self) -> float:
        ht = self.antenna_height_tx_m
        hr = self.antenna_height_rx_m
        return (
            self.tx_power_mw
            * self.antenna_gain_tx
            * self.antenna_gain_rx
            * (ht * ht)
            * (hr * hr)
        )


def received_power_from_d2(cfg: RadioConfig, d2: float) -> float:
    """received_power with the squared distance already in hand."""
    if d2 <= 0.0:
        raise NonPositiveDistanceError("distance must be > 0")
    cross = cfg.crossover_m
    if d2 >= cross * cross:
        return cfg.tworay_coeff / (d2 * d2)
    return cfg.friis_coeff / d2


def received_power(cfg: RadioConfig, d: float) -> float:
    """Received power in milliwatts at ground distance d meters.

    Friis below the crossover distance, two-ray d^-4 at and beyond it;
    strictly decreasing in d and continuous at the crossover.
    """
    if d <= 0.0:
        raise NonPositiveDistanceError("distance must be > 0")
    return received_power_from_d2(cfg, d * d)


def can_receive(cfg: RadioConfig, d: float) -> bool:
    """True iff a frame sent over distance d is received.

    Both gates apply: d <= range_limit and received power >= sensitivity.
    d == 0 (co-located antennas) always receives.
    """
    if d < 0.0:
        raise ValueError(f"distance must be >= 0, got {d}")
    if d == 0.0:
        return True
    if d > cfg.range_limit_m:
        return False
    return received_power(cfg, d) >= cfg.sensitivity_mw


def hop_transmission_delay(cfg: RadioConfig) -> float:
    """Seconds to push one configured packet over one hop.

    Airtime (packet_size * 8 / channel capacity) plus the fixed per-hop
    processing delay.
    """
    airtime = cfg.packet_size_bytes * 8.0 / cfg.channel_capacity_bps
    return airtime + cfg.processing_delay_s

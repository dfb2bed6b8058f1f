"""Per-run accumulators, the three headline metrics, and results CSV."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, TextIO


class NoDeliveriesError(ValueError):
    """Mean delay/hops are undefined with zero delivered packets."""


class InsufficientSamplesError(ValueError):
    """Cross-seed aggregation needs at least two runs."""


CSV_HEADER = (
    "scenario,protocol,seed,n_vehicles,n_generated,n_received,pdr,e2ed_s,"
    "ahc,drop_localmax,drop_hoplimit,drop_perimeter,inflight"
)


@dataclass
class MetricsRecord:
    """Counters and samples for one (scenario, protocol, seed) run."""

    scenario: str
    protocol: str
    seed: int
    n_vehicles: int
    n_generated: int = 0
    n_received: int = 0
    delay_samples: list[float] = field(default_factory=list)
    hop_samples: list[int] = field(default_factory=list)
    drop_localmax: int = 0
    drop_hoplimit: int = 0
    drop_perimeter: int = 0
    inflight: int = 0

    def record_delivery(self, delay: float, hops: int) -> None:
        if delay <= 0.0 or hops < 1:
            raise ValueError(f"bad delivery sample: delay={delay} hops={hops}")
        self.n_received += 1
        self.delay_samples.append(delay)
        self.hop_samples.append(hops)

    def close(self) -> None:
        """Book everything still unaccounted for as in flight."""
        self.inflight = self.n_generated - (
            self.n_received
            + self.drop_localmax
            + self.drop_hoplimit
            + self.drop_perimeter
        )
        if self.inflight < 0:
            raise ValueError("metric counters exceed generated packets")


def pdr(m: MetricsRecord) -> float | None:
    """Delivered fraction; None when nothing was generated."""
    if m.n_generated == 0:
        return None
    return m.n_received / m.n_generated


def e2ed(m: MetricsRecord) -> float:
    """Mean end-to-end delay over delivered packets, seconds."""
    if m.n_received == 0:
        raise NoDeliveriesError("no delivered packets")
    return sum(m.delay_samples) / m.n_received


def ahc(m: MetricsRecord) -> float:
    """Mean hop count over delivered packets."""
    if m.n_received == 0:
        raise NoDeliveriesError("no delivered packets")
    return sum(m.hop_samples) / m.n_received


@dataclass(frozen=True)
class AggregateStats:
    mean: float
    stddev: float
    ci95: tuple[float, float]
    n: int


def _aggregate_values(values: Sequence[float]) -> AggregateStats:
    n = len(values)
    mean = sum(values) / n
    if n > 1:
        var = sum((v - mean) ** 2 for v in values) / (n - 1)
        sd = math.sqrt(var)
    else:
        sd = 0.0
    half = 1.96 * sd / math.sqrt(n)
    return AggregateStats(mean, sd, (mean - half, mean + half), n)


def aggregate(records: Sequence[MetricsRecord]) -> dict[str, AggregateStats]:
    """Cross-seed mean/stddev/95% CI for pdr, e2ed and ahc.

    Runs where a metric is undefined (nothing generated / delivered) do not
    contribute to that metric.
    """
    if len(records) < 2:
        raise InsufficientSamplesError("need at least 2 records")
    out: dict[str, AggregateStats] = {}
    pdrs = [p for p in (pdr(r) for r in records) if p is not None]
    if pdrs:
        out["pdr"] = _aggregate_values(pdrs)
    delays = [e2ed(r) for r in records if r.n_received > 0]
    if delays:
        out["e2ed_s"] = _aggregate_values(delays)
    hops = [ahc(r) for r in records if r.n_received > 0]
    if hops:
        out["ahc"] = _aggregate_values(hops)
    return out


def fmt(value: float | int | None) -> str:
    """CSV field formatting: 6 significant digits, empty for undefined."""
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return f"{value:.6g}"


def _record_row(m: MetricsRecord) -> str:
    p = pdr(m)
    delay = e2ed(m) if m.n_received else None
    hops = ahc(m) if m.n_received else None
    return ",".join(
        [
            m.scenario,
            m.protocol,
            str(m.seed),
            str(m.n_vehicles),
            str(m.n_generated),
            str(m.n_received),
            fmt(p),
            fmt(delay),
            fmt(hops),
            str(m.drop_localmax),
            str(m.drop_hoplimit),
            str(m.drop_perimeter),
            str(m.inflight),
        ]
    )


def _mean(values: Iterable[float]) -> float | None:
    values = list(values)
    return sum(values) / len(values) if values else None


def _aggregate_row(group: Sequence[MetricsRecord]) -> str:
    first = group[0]
    return ",".join(
        [
            first.scenario,
            first.protocol,
            "mean",
            str(first.n_vehicles),
            fmt(_mean(float(r.n_generated) for r in group)),
            fmt(_mean(float(r.n_received) for r in group)),
            fmt(_mean(p for p in (pdr(r) for r in group) if p is not None)),
            fmt(_mean(e2ed(r) for r in group if r.n_received)),
            fmt(_mean(ahc(r) for r in group if r.n_received)),
            fmt(_mean(float(r.drop_localmax) for r in group)),
            fmt(_mean(float(r.drop_hoplimit) for r in group)),
            fmt(_mean(float(r.drop_perimeter) for r in group)),
            fmt(_mean(float(r.inflight) for r in group)),
        ]
    )


def write_csv(records: Sequence[MetricsRecord], out: TextIO) -> None:
    """Emit the results table: sorted data rows, then per-group means.

    Rows sort by (scenario, n_vehicles, protocol, seed); a `mean` row is
    appended per (scenario, n_vehicles, protocol) group that holds at least
    two seeds. Ordering and formatting are independent of how the records
    were produced, so identical record sets serialize byte-identically.
    """
    ordered = sorted(
        records,
        key=lambda m: (m.scenario, m.n_vehicles, m.protocol, m.seed),
    )
    out.write(CSV_HEADER + "\n")
    for m in ordered:
        out.write(_record_row(m) + "\n")
    groups: dict[tuple[str, int, str], list[MetricsRecord]] = {}
    for m in ordered:
        groups.setdefault((m.scenario, m.n_vehicles, m.protocol), []).append(m)
    for key in sorted(groups):
        if len(groups[key]) >= 2:
            out.write(_aggregate_row(groups[key]) + "\n")

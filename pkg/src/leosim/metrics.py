"""Per-sender statistics in the transmitted/received/range/mean/loss/modal format."""
from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass, field
from typing import Sequence

from .traffic import PingOutcome, PingStatus

DEFAULT_BIN_MS = 0.1
# rtt / bin is nudged by this before flooring: 8.9 / 0.1 is 88.99999999999999
_BIN_EPS = 1e-9


@dataclass(frozen=True)
class MetricsSummary:
    pings_transmitted: int = 0
    pings_received: int = 0
    rtt_min_ms: float = 0.0
    rtt_max_ms: float = 0.0
    rtt_mean_ms: float = 0.0
    ping_loss_pct: float = 0.0
    modal_bin: tuple[float, int] = (0.0, 0)
    drop_counts: dict = field(default_factory=dict)
    # False when nothing was transmitted and ping_loss_pct is a placeholder 0
    loss_defined: bool = False

    @property
    def rtt_range_ms(self) -> float:
        return self.rtt_max_ms - self.rtt_min_ms

    def to_dict(self) -> dict:
        d = asdict(self)
        d["modal_bin"] = list(self.modal_bin)
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsSummary":
        d = dict(d)
        d["modal_bin"] = tuple(d.get("modal_bin", (0.0, 0)))
        return cls(**d)


def _bin_index(rtt_ms: float, bin_ms: float) -> int:
    return math.floor(rtt_ms / bin_ms + _BIN_EPS)


def rtt_histogram(outcomes: Sequence[PingOutcome], bin_ms: float = DEFAULT_BIN_MS):
    """Half-open bins [k*bin, (k+1)*bin) over delivered RTTs.

    Returns ``(bins, modal)`` where ``bins`` is a sorted list of
    (bin_start_ms, count) and ``modal`` is the fullest bin, lowest on ties.
    """
    if not bin_ms > 0:
        raise ValueError(f"bin width must be > 0 ms, got {bin_ms}")
    counts: dict[int, int] = {}
    for o in outcomes:
        if o.status is PingStatus.DELIVERED:
            k = _bin_index(o.rtt_ms, bin_ms)
            counts[k] = counts.get(k, 0) + 1
    bins = [(round(k * bin_ms, 10), counts[k]) for k in sorted(counts)]
    modal = (0.0, 0)
    for start, count in bins:
        if count > modal[1]:
            modal = (start, count)
    return bins, modal


def summarize(outcomes: Sequence[PingOutcome], bin_ms: float = DEFAULT_BIN_MS) -> MetricsSummary:
    tx = len(outcomes)
    rtts = sorted(o.rtt_ms for o in outcomes if o.status is PingStatus.DELIVERED)
    drops = {
        PingStatus.DROPPED_UNREACHABLE.value: 0,
        PingStatus.DROPPED_COLLISION.value: 0,
    }
    for o in outcomes:
        if o.status is not PingStatus.DELIVERED:
            drops[o.status.value] += 1
    rx = len(rtts)
    loss = (tx - rx) / tx * 100.0 if tx else 0.0
    if not rx:
        return MetricsSummary(tx, 0, ping_loss_pct=loss, drop_counts=drops, loss_defined=tx > 0)
    _, modal = rtt_histogram(outcomes, bin_ms)
    # fsum over the sorted values keeps the mean independent of outcome order
    return MetricsSummary(
        pings_transmitted=tx,
        pings_received=rx,
        rtt_min_ms=rtts[0],
        rtt_max_ms=rtts[-1],
        rtt_mean_ms=math.fsum(rtts) / rx,
        ping_loss_pct=loss,
        modal_bin=modal,
        drop_counts=drops,
        loss_defined=True,
    )


def rtt_vector(outcomes: Sequence[PingOutcome]) -> list[tuple[float, float]]:
    return sorted((o.send_time_s, o.rtt_ms) for o in outcomes if o.status is PingStatus.DELIVERED)


def delivered_segments(outcomes: Sequence[PingOutcome]) -> list[list[tuple[float, float]]]:
    """Runs of consecutive delivered pings (in send order), as (time, rtt) lists."""
    segments, current = [], []
    for o in sorted(outcomes, key=lambda o: (o.send_time_s, o.seq)):
        if o.status is PingStatus.DELIVERED:
            current.append((o.send_time_s, o.rtt_ms))
        elif current:
            segments.append(current)
            current = []
    if current:
        segments.append(current)
    return segments


def pairs_to_csv(rows, header: Sequence[str]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for a, b in rows:
        writer.writerow([repr(float(a)), b if isinstance(b, int) else repr(float(b))])
    return buf.getvalue()

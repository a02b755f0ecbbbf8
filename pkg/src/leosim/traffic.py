"""Ping applications: send schedules, bufferless forwarding and per-ping outcomes.

Satellites and relays hold no queue. A forwarding node is busy for
``tx_duration_s`` after each packet it receives; a second packet arriving
while it is busy is dropped. Routes are pinned at send time.
"""
from __future__ import annotations

import bisect
import enum
from dataclasses import dataclass
from typing import Sequence

from .topology import NodeRef, TopologySnapshot

# send times are compared after rounding to this many decimals, so that
# start + k * interval landing on the limit is not sent because of float noise
_TIME_DECIMALS = 9


class PingStatus(str, enum.Enum):
    DELIVERED = "delivered"
    DROPPED_UNREACHABLE = "dropped_unreachable"
    DROPPED_COLLISION = "dropped_collision"


@dataclass(frozen=True)
class PingAppConfig:
    source: NodeRef
    destination: NodeRef
    start_time_s: float = 0.0
    send_interval_s: float | None = None
    schedule: tuple[float, ...] | None = None
    count: int | None = None

    def __post_init__(self):
        if self.start_time_s < 0:
            raise ValueError(f"start_time_s must be >= 0, got {self.start_time_s}")
        if (self.send_interval_s is None) == (self.schedule is None):
            raise ValueError("give exactly one of send_interval_s or schedule")
        if self.send_interval_s is not None and not self.send_interval_s > 0:
            raise ValueError(f"send_interval_s must be > 0, got {self.send_interval_s}")
        if self.count is not None and self.count < 0:
            raise ValueError("count must be >= 0")
        if not (self.source.is_ground and self.destination.is_ground):
            raise ValueError("ping apps run between ground nodes")


@dataclass(frozen=True)
class Ping:
    source: int
    destination: int
    seq: int
    send_time_s: float


@dataclass(frozen=True)
class PingOutcome:
    source: int
    seq: int
    send_time_s: float
    status: PingStatus
    rtt_ms: float | None = None
    path: tuple[int, ...] | None = None
    drop_node: int | None = None
    drop_time_s: float | None = None

    @property
    def delivered(self) -> bool:
        return self.status is PingStatus.DELIVERED


def schedule_sends(cfg: PingAppConfig, sim_limit_s: float) -> list[tuple[float, int]]:
    """(send_time, seq) pairs in the half-open window [0, sim_limit_s)."""
    times: list[float] = []
    if cfg.schedule is not None:
        times = sorted(t for t in cfg.schedule if round(t, _TIME_DECIMALS) < sim_limit_s)
    else:
        k = 0
        while True:
            t = cfg.start_time_s + k * cfg.send_interval_s
            if round(t, _TIME_DECIMALS) >= sim_limit_s:
                break
            if cfg.count is not None and k >= cfg.count:
                break
            times.append(t)
            k += 1
    if cfg.count is not None:
        times = times[: cfg.count]
    return [(t, seq) for seq, t in enumerate(times)]


class NodeChannel:
    """Busy intervals per node. Intervals on one node never overlap."""

    def __init__(self):
        self._busy: dict[int, list[tuple[float, float, tuple]]] = {}

    def is_busy(self, node: int, start: float, end: float, owner: tuple) -> bool:
        for s, e, who in self._busy.get(node, ()):
            if who != owner and s < end and start < e:
                return True
        return False

    def reserve(self, node: int, start: float, end: float, owner: tuple) -> None:
        bisect.insort(self._busy.setdefault(node, []), (start, end, owner))

    def intervals(self, node: int) -> list[tuple[float, float]]:
        return [(s, e) for s, e, _ in self._busy.get(node, ())]

    def prune(self, before_s: float) -> None:
        """Forget intervals that ended before ``before_s``."""
        for node in list(self._busy):
            kept = [iv for iv in self._busy[node] if iv[1] >= before_s]
            if kept:
                self._busy[node] = kept
            else:
                del self._busy[node]


def _walk(path, t0, snapshot, channels, owner, tx_duration_s, processing_delay_s):
    """Move a packet along ``path`` starting at t0 (s).

    Returns (elapsed_ms, drop) where drop is (node, time_s) or None.
    """
    elapsed_ms = 0.0
    last = len(path) - 1
    for i in range(1, len(path)):
        elapsed_ms += snapshot.edge_delay_ms(path[i - 1], path[i])
        if i == last:
            break
        t = t0 + elapsed_ms / 1000.0
        if tx_duration_s > 0:
            if channels.is_busy(path[i], t, t + tx_duration_s, owner):
                return elapsed_ms, (path[i], t)
            channels.reserve(path[i], t, t + tx_duration_s, owner)
        elapsed_ms += processing_delay_s * 1000.0
    return elapsed_ms, None


def transmit(
    ping: Ping,
    snapshot: TopologySnapshot,
    channels: NodeChannel,
    tx_duration_s: float = 0.001,
    processing_delay_s: float = 0.0,
) -> PingOutcome:
    path = snapshot.route(ping.source, ping.destination)
    if path is None:
        return PingOutcome(ping.source, ping.seq, ping.send_time_s, PingStatus.DROPPED_UNREACHABLE)

    owner = (ping.source, ping.seq)
    forward_ms, drop = _walk(path, ping.send_time_s, snapshot, channels, owner, tx_duration_s, processing_delay_s)
    turnaround_ms = forward_ms
    reverse_ms = 0.0
    if drop is None:
        # reply generation at the destination
        turnaround_ms = forward_ms + processing_delay_s * 1000.0
        reverse_ms, drop = _walk(
            path[::-1], ping.send_time_s + turnaround_ms / 1000.0, snapshot, channels, owner,
            tx_duration_s, processing_delay_s,
        )
        reverse_ms += processing_delay_s * 1000.0
    if drop is not None:
        return PingOutcome(
            ping.source, ping.seq, ping.send_time_s, PingStatus.DROPPED_COLLISION,
            drop_node=drop[0], drop_time_s=drop[1],
        )
    return PingOutcome(
        ping.source, ping.seq, ping.send_time_s, PingStatus.DELIVERED,
        rtt_ms=turnaround_ms + reverse_ms, path=tuple(path),
    )


def count_by_status(outcomes: Sequence[PingOutcome]) -> dict[str, int]:
    counts = {s.value: 0 for s in PingStatus}
    for o in outcomes:
        counts[o.status.value] += 1
    return counts

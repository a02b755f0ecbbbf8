"""Deterministic event loop: topology refreshes, ping sends and run assembly."""
from __future__ import annotations

import csv
import hashlib
import heapq
import io
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .config import ScenarioConfig
from .metrics import MetricsSummary, summarize
from .orbits import Fleet
from .topology import TopologySnapshot, build_snapshot
from .traffic import NodeChannel, Ping, PingOutcome, schedule_sends, transmit

log = logging.getLogger(__name__)

TOPOLOGY_UPDATE = 0
PING_SEND = 1

OUTCOME_LOG_HEADER = ("sender_id", "seq", "send_time_s", "status", "rtt_ms", "drop_node", "path_len")


@dataclass
class RunResult:
    scenario: str
    outcomes: dict[str, list[PingOutcome]]
    summaries: dict[str, MetricsSummary]
    snapshot_count: int
    config: dict
    outcome_log: str
    fingerprint: str
    event_times: list[float] = field(default_factory=list, repr=False)

    @property
    def senders(self) -> list[str]:
        return list(self.summaries)


def _outcome_log(rows: Sequence[PingOutcome]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(OUTCOME_LOG_HEADER)
    for o in rows:
        w.writerow([
            o.source, o.seq, f"{o.send_time_s:.9f}", o.status.value,
            "" if o.rtt_ms is None else f"{o.rtt_ms:.9f}",
            "" if o.drop_node is None else o.drop_node,
            0 if o.path is None else len(o.path),
        ])
    return buf.getvalue()


def run_scenario(
    cfg: ScenarioConfig,
    on_event: Callable[[float, int], None] | None = None,
    on_snapshot: Callable[[TopologySnapshot], None] | None = None,
) -> RunResult:
    """Run one scenario to completion.

    ``on_event(time_s, kind)`` sees every processed event in order;
    ``on_snapshot`` receives each topology as it is built (edge dumps).
    """
    fleet = Fleet(list(cfg.satellites))
    ground = [g.location for g in cfg.ground_stations]
    names = cfg.ground_names
    theta0 = math.radians(cfg.earth_phase_theta0_deg)
    n_snap = cfg.snapshot_count

    # (time, kind priority, source id, seq, payload)
    queue: list[tuple] = [(k * cfg.update_interval_s, TOPOLOGY_UPDATE, -1, k, None) for k in range(n_snap)]
    for app in cfg.ping_apps:
        for t, seq in schedule_sends(app, cfg.sim_time_limit_s):
            queue.append((t, PING_SEND, app.source.id, seq, app.destination.id))
    heapq.heapify(queue)

    snapshot: TopologySnapshot | None = None
    channels = NodeChannel()
    processed: list[PingOutcome] = []
    event_times: list[float] = []
    while queue:
        t, kind, src, seq, payload = heapq.heappop(queue)
        event_times.append(t)
        if on_event is not None:
            on_event(t, kind)
        if kind == TOPOLOGY_UPDATE:
            snapshot = build_snapshot(t, fleet, ground, cfg.link_rules, names, theta0)
            # anything older than one tx window can no longer overlap a new arrival
            channels.prune(t - max(cfg.tx_duration_s, 0.0))
            if on_snapshot is not None:
                on_snapshot(snapshot)
            continue
        processed.append(
            transmit(Ping(src, payload, seq, t), snapshot, channels, cfg.tx_duration_s, cfg.processing_delay_s)
        )

    outcomes: dict[str, list[PingOutcome]] = {}
    summaries: dict[str, MetricsSummary] = {}
    for app in cfg.ping_apps:
        mine = [o for o in processed if o.source == app.source.id]
        outcomes[app.source.name] = mine
        summaries[app.source.name] = summarize(mine, cfg.histogram_bin_ms)

    text = _outcome_log(processed)
    return RunResult(
        scenario=cfg.name,
        outcomes=outcomes,
        summaries=summaries,
        snapshot_count=n_snap,
        config=cfg.raw,
        outcome_log=text,
        fingerprint=hashlib.sha256(text.encode()).hexdigest(),
        event_times=event_times,
    )


COMPARE_FIELDS = ("pings_transmitted", "pings_received", "rtt_range_ms", "rtt_mean_ms", "ping_loss_pct", "modal_bin")


def _field(s: MetricsSummary | None, name: str):
    if s is None:
        return None
    return s.rtt_range_ms if name == "rtt_range_ms" else getattr(s, name)


def _fmt(value) -> str:
    if value is None:
        return "-"
    if isinstance(value, tuple):
        return f"{value[0]:.1f}/{value[1]}"
    if isinstance(value, int):
        return str(value)
    return f"{value:.3f}"


def _delta(value, base):
    if value is None or base is None or isinstance(value, tuple):
        return None
    return value - base


def compare_summaries(runs: Sequence[tuple[str, dict[str, MetricsSummary]]]):
    """Side-by-side comparison of per-sender summaries.

    ``runs`` is a list of (label, {sender: summary}). Deltas are taken
    against the first run. Returns (csv_text, aligned_text).
    """
    if len(runs) < 2:
        raise ValueError("compare needs at least two runs")
    sender_sets = [set(s) for _, s in runs]
    senders: list[str] = []
    for _, summ in runs:
        for name in summ:
            if name not in senders:
                senders.append(name)
    if any(ss != sender_sets[0] for ss in sender_sets):
        log.warning("runs have different sender sets; missing rows are marked '-'")

    header = ["sender", "field"] + [label for label, _ in runs] + [f"delta:{label}" for label, _ in runs[1:]]
    rows = []
    for sender in senders:
        for name in COMPARE_FIELDS:
            values = [_field(summ.get(sender), name) for _, summ in runs]
            deltas = [_delta(v, values[0]) for v in values[1:]]
            rows.append([sender, name] + [_fmt(v) for v in values] + [_fmt(d) for d in deltas])

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)

    widths = [max(len(str(r[i])) for r in [header] + rows) for i in range(len(header))]
    lines = ["  ".join(str(c).rjust(wd) if i > 1 else str(c).ljust(wd) for i, (c, wd) in enumerate(zip(r, widths)))
             for r in [header] + rows]
    return buf.getvalue(), "\n".join(line.rstrip() for line in lines) + "\n"


def compare_runs(results: Sequence[RunResult]):
    return compare_summaries([(r.scenario, r.summaries) for r in results])

"""Sensor trace ingestion: explicit send schedules, GCD update interval, interval series.

Input CSV columns: sensor_id, urn, latitude, longitude, timestamp, type, value.
Timestamps are ISO-8601 (naive means UTC) or epoch seconds.
"""
from __future__ import annotations

import csv
import io
import logging
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from functools import reduce

from .geodesy import GeoPoint

log = logging.getLogger(__name__)

REQUIRED_COLUMNS = ("sensor_id", "urn", "latitude", "longitude", "timestamp", "type", "value")

PARKING = "stable-parking"
MEASURE = "stable-measure"
MOBILE = "mobile"
_KIND_TOKENS = (("np", PARKING), ("ar", MOBILE), ("t", MEASURE))


class TraceFormatError(ValueError):
    def __init__(self, line: int, message: str):
        self.line = line
        super().__init__(f"line {line}: {message}")


class DegenerateTraceError(ValueError):
    pass


@dataclass
class SensorTrace:
    sensor_id: str
    urn: str
    location: GeoPoint
    kind: str
    timestamps_s: list[float] = field(default_factory=list)
    values: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class SensorSchedule:
    sensor_id: str
    start_offset_s: float
    times_s: tuple[float, ...]


def kind_from_urn(urn: str) -> str:
    token = urn.rsplit(":", 1)[-1].lower()
    for prefix, kind in _KIND_TOKENS:
        rest = token[len(prefix):]
        if token.startswith(prefix) and (not rest or rest.isdigit()):
            return kind
    log.warning("urn %r has no np/t/ar token; treating as %s", urn, MEASURE)
    return MEASURE


def parse_timestamp(raw: str) -> float:
    raw = raw.strip()
    try:
        return float(raw)
    except ValueError:
        pass
    if raw.endswith(("Z", "z")):
        raw = raw[:-1] + "+00:00"
    dt = datetime.fromisoformat(raw)
    if dt.tzinfo is None:
        dt = dt.replace(tzinfo=timezone.utc)
    return dt.timestamp()


def parse_trace(content: str) -> list[SensorTrace]:
    """Group rows by sensor, in order of first appearance; timestamps sorted."""
    reader = csv.DictReader(io.StringIO(content))
    if reader.fieldnames is None:
        raise TraceFormatError(1, "empty trace file")
    missing = [c for c in REQUIRED_COLUMNS if c not in [f.strip() for f in reader.fieldnames]]
    if missing:
        raise TraceFormatError(1, f"missing columns {missing}")

    traces: dict[str, SensorTrace] = {}
    seen: dict[str, dict[float, str]] = {}
    for row in reader:
        line = reader.line_num
        row = {k.strip(): (v or "").strip() for k, v in row.items() if k is not None}
        sid = row["sensor_id"]
        if not sid:
            raise TraceFormatError(line, "empty sensor_id")
        try:
            lat, lon = float(row["latitude"]), float(row["longitude"])
            ts = parse_timestamp(row["timestamp"])
        except ValueError as exc:
            raise TraceFormatError(line, str(exc)) from None
        if not (math.isfinite(lat) and math.isfinite(lon) and math.isfinite(ts)):
            raise TraceFormatError(line, "non-finite coordinate or timestamp")

        trace = traces.get(sid)
        if trace is None:
            try:
                location = GeoPoint(lat, lon, 0.0)
            except ValueError as exc:
                raise TraceFormatError(line, str(exc)) from None
            trace = traces[sid] = SensorTrace(sid, row["urn"], location, kind_from_urn(row["urn"]))
            seen[sid] = {}
        if ts in seen[sid]:
            log.warning("line %d: duplicate row for sensor %s at %s dropped", line, sid, row["timestamp"])
            continue
        # mobile sensors keep their first-row position; later coordinates are ignored
        seen[sid][ts] = row["value"]

    for sid, trace in traces.items():
        for ts in sorted(seen[sid]):
            trace.timestamps_s.append(ts)
            trace.values.append(seen[sid][ts])
    return list(traces.values())


def derive_schedules(traces: list[SensorTrace]) -> tuple[float, dict[str, SensorSchedule]]:
    """Shift every trace so the earliest timestamp across all sensors is time 0."""
    if not traces:
        raise DegenerateTraceError("no traces to schedule")
    t0 = min(t.timestamps_s[0] for t in traces if t.timestamps_s)
    schedules = {}
    for t in traces:
        rel = tuple(ts - t0 for ts in t.timestamps_s)
        schedules[t.sensor_id] = SensorSchedule(t.sensor_id, rel[0] if rel else 0.0, rel)
    return t0, schedules


def _intervals(trace: SensorTrace) -> list[int]:
    if len(trace.timestamps_s) < 2:
        raise DegenerateTraceError(f"sensor {trace.sensor_id} has fewer than 2 timestamps")
    stamps = [round(ts) for ts in trace.timestamps_s]
    return [b - a for a, b in zip(stamps, stamps[1:])]


def interval_gcd_s(traces: list[SensorTrace]) -> int:
    """GCD of all successive send intervals, rounded to whole seconds."""
    if not traces:
        raise DegenerateTraceError("no traces")
    intervals = [d for t in traces for d in _intervals(t)]
    return reduce(math.gcd, intervals, 0)


def interval_histogram(trace: SensorTrace) -> list[tuple[float, float]]:
    """(time_s, delta_to_next_s) for every send except the last."""
    if len(trace.timestamps_s) < 2:
        raise DegenerateTraceError(f"sensor {trace.sensor_id} has fewer than 2 timestamps")
    ts = trace.timestamps_s
    return [(a, b - a) for a, b in zip(ts, ts[1:])]


def schedules_to_csv(schedules: dict[str, SensorSchedule]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sensor_id", "relative_time_s"])
    for sid, sched in schedules.items():
        for t in sched.times_s:
            writer.writerow([sid, repr(float(t))])
    return buf.getvalue()


def read_schedule_csv(content: str) -> dict[str, tuple[float, ...]]:
    out: dict[str, list[float]] = {}
    reader = csv.DictReader(io.StringIO(content))
    if reader.fieldnames is None or {"sensor_id", "relative_time_s"} - set(reader.fieldnames):
        raise TraceFormatError(1, "schedule CSV needs columns sensor_id, relative_time_s")
    for row in reader:
        try:
            out.setdefault(row["sensor_id"].strip(), []).append(float(row["relative_time_s"]))
        except (ValueError, AttributeError):
            raise TraceFormatError(reader.line_num, f"bad schedule row {row}") from None
    return {k: tuple(sorted(v)) for k, v in out.items()}


def histogram_to_csv(traces: list[SensorTrace], t0: float = 0.0) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["sensor_id", "time_s", "delta_to_next_s"])
    for trace in traces:
        if len(trace.timestamps_s) < 2:
            continue
        for t, dt in interval_histogram(trace):
            writer.writerow([trace.sensor_id, repr(float(t - t0)), repr(float(dt))])
    return buf.getvalue()

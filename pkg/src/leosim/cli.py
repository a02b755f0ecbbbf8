"""Command-line front end: ``leosim {coverage,run,ingest,compare}``."""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .config import ConfigError, load_scenario
from .engine import compare_summaries, run_scenario
from .geodesy import coverage_table
from .ingest import (
    DegenerateTraceError, TraceFormatError, derive_schedules, histogram_to_csv,
    interval_gcd_s, parse_trace, schedules_to_csv,
)
from .metrics import MetricsSummary, pairs_to_csv, rtt_histogram, rtt_vector

DEFAULT_ALTITUDES = (160, 500, 600, 700, 800, 900, 1000, 1500)
DEFAULT_ELEVATIONS = (0, 2, 4, 6, 8, 10, 25, 40)
OUT_DIR_ENV = "LEOSIM_OUT_DIR"


class CliError(Exception):
    pass


def _number_list(text: str) -> list[float]:
    items = [t for t in re.split(r"[,\s]+", text.strip()) if t]
    if not items:
        raise argparse.ArgumentTypeError("expected a non-empty comma-separated list of numbers")
    try:
        return [float(t) for t in items]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number list: {text!r}") from None


def _fmt_num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else repr(float(x))


def _safe(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "sender"


def cmd_coverage(args) -> int:
    table = coverage_table(args.altitudes, args.elevations)
    header = ["altitude_km"] + [f"elev_{_fmt_num(e)}" for e in args.elevations]
    rows = [[_fmt_num(h)] + [f"{v:.2f}" for v in row] for h, row in zip(args.altitudes, table)]
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        with open(args.out, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
    width = max(len(c) for c in header) + 1
    print("".join(c.rjust(width) for c in header))
    for r in rows:
        print("".join(c.rjust(width) for c in r))
    return 0


def _write_run(result, out: Path) -> None:
    out.mkdir(parents=True, exist_ok=True)
    (out / "outcomes.csv").write_text(result.outcome_log)
    (out / "fingerprint.txt").write_text(result.fingerprint + "\n")
    summary = {
        "scenario": result.scenario,
        "snapshot_count": result.snapshot_count,
        "fingerprint": result.fingerprint,
        "senders": {name: s.to_dict() for name, s in result.summaries.items()},
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    (out / "config.json").write_text(json.dumps(result.config, indent=2, sort_keys=True, default=str) + "\n")
    bin_ms = result.config.get("histogram_bin_ms", 0.1)
    for name, outcomes in result.outcomes.items():
        stem = _safe(name)
        (out / f"{stem}_rtt_vector.csv").write_text(pairs_to_csv(rtt_vector(outcomes), ["send_time_s", "rtt_ms"]))
        bins, _ = rtt_histogram(outcomes, bin_ms)
        (out / f"{stem}_histogram.csv").write_text(pairs_to_csv(bins, ["bin_start_ms", "count"]))


def _run_one(scenario: str, out_root: str, dump_edges: bool) -> tuple[str, str, str]:
    cfg = load_scenario(scenario)
    out = Path(out_root) / cfg.name
    out.mkdir(parents=True, exist_ok=True)
    if dump_edges:
        with open(out / "edges.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["time_s", "node_a", "node_b", "delay_ms"])
            result = run_scenario(cfg, on_snapshot=lambda snap: snap.write_edges_csv(w))
    else:
        result = run_scenario(cfg)
    _write_run(result, out)
    lines = [f"{cfg.name}: {result.snapshot_count} snapshots, fingerprint {result.fingerprint}"]
    for name, s in result.summaries.items():
        lines.append(
            f"  {name}: tx {s.pings_transmitted} rx {s.pings_received} "
            f"rtt {s.rtt_min_ms:.2f}-{s.rtt_max_ms:.2f} ms mean {s.rtt_mean_ms:.2f} ms loss {s.ping_loss_pct:.2f}%"
        )
    return cfg.name, str(out), "\n".join(lines)


def cmd_run(args) -> int:
    # validate everything before running anything
    for scenario in args.scenario:
        load_scenario(scenario)
    out_root = args.out_dir or os.environ.get(OUT_DIR_ENV) or "runs"
    if args.jobs > 1 and len(args.scenario) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_run_one, args.scenario, [out_root] * len(args.scenario),
                                    [args.dump_edges] * len(args.scenario)))
    else:
        results = [_run_one(s, out_root, args.dump_edges) for s in args.scenario]
    for _, out, text in results:
        print(text)
        print(f"  artifacts: {out}")
    return 0


def cmd_ingest(args) -> int:
    path = Path(args.trace)
    if not path.is_file():
        raise CliError(f"trace file {path} not found")
    traces = parse_trace(path.read_text())
    t0, schedules = derive_schedules(traces)
    gcd = interval_gcd_s(traces)
    out = Path(args.out or os.environ.get(OUT_DIR_ENV) or "ingest")
    out.mkdir(parents=True, exist_ok=True)
    (out / "schedules.csv").write_text(schedules_to_csv(schedules))
    (out / "intervals.csv").write_text(histogram_to_csv(traces, t0))
    with open(out / "offsets.csv", "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sensor_id", "kind", "sends", "start_offset_s", "start_offset_min"])
        for t in traces:
            s = schedules[t.sensor_id]
            w.writerow([t.sensor_id, t.kind, len(s.times_s), repr(s.start_offset_s), f"{s.start_offset_s / 60:.2f}"])
    print(f"{len(traces)} sensors, t0 = {t0:.0f} s (epoch)")
    for t in traces:
        print(f"  {t.sensor_id:>6} {t.kind:15} {len(t.timestamps_s):5d} sends, offset {schedules[t.sensor_id].start_offset_s / 60:g} min")
    print(f"recommended update_interval_s: {gcd}")
    print(f"outputs: {out}")
    return 0


def _load_summary(run_dir: Path) -> tuple[str, dict[str, MetricsSummary]]:
    path = run_dir / "summary.json"
    if not path.is_file():
        raise CliError(f"{run_dir}: no summary.json (not a run directory?)")
    try:
        data = json.loads(path.read_text())
        senders = {k: MetricsSummary.from_dict(v) for k, v in data["senders"].items()}
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise CliError(f"{path}: malformed summary ({exc})") from None
    return data.get("scenario", run_dir.name), senders


def cmd_compare(args) -> int:
    if len(args.runs) < 2:
        raise CliError("compare needs at least two run directories")
    runs = [_load_summary(Path(d)) for d in args.runs]
    csv_text, table = compare_summaries(runs)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(csv_text)
        Path(args.out).with_suffix(".txt").write_text(table)
    print(table, end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="leosim", description="LEO constellation network simulator")
    p.add_argument("-v", "--verbose", action="store_true", help="log warnings and progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    c = sub.add_parser("coverage", help="coverage percentage per altitude and elevation")
    c.add_argument("--altitudes", type=_number_list, default=list(DEFAULT_ALTITUDES),
                   help="comma-separated altitudes in km (default: 160..1500 grid)")
    c.add_argument("--elevations", type=_number_list, default=list(DEFAULT_ELEVATIONS),
                   help="comma-separated minimum elevations in degrees (default: 0..40 grid)")
    c.add_argument("--out", help="CSV file to write")
    c.set_defaults(func=cmd_coverage)

    r = sub.add_parser("run", help="run one or more scenarios")
    r.add_argument("--scenario", action="append", required=True,
                   help="scenario YAML path or bundled scenario name (repeatable)")
    r.add_argument("--out-dir", help=f"artifact root (default: ${OUT_DIR_ENV} or ./runs)")
    r.add_argument("--jobs", type=int, default=1, help="run scenarios in parallel processes")
    r.add_argument("--dump-edges", action="store_true", help="also write every snapshot's edge list")
    r.set_defaults(func=cmd_run)

    i = sub.add_parser("ingest", help="turn a sensor trace into send schedules")
    i.add_argument("--trace", required=True, help="trace CSV")
    i.add_argument("--out", help=f"output directory (default: ${OUT_DIR_ENV} or ./ingest)")
    i.set_defaults(func=cmd_ingest)

    m = sub.add_parser("compare", help="compare run directories side by side")
    m.add_argument("runs", nargs="+", help="two or more run directories")
    m.add_argument("--out", help="CSV file to write (an aligned .txt is written next to it)")
    m.set_defaults(func=cmd_compare)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if getattr(args, "jobs", 1) < 1:
        parser.error("--jobs must be >= 1")
    try:
        return args.func(args)
    except (CliError, ConfigError, TraceFormatError, DegenerateTraceError, ValueError, OSError) as exc:
        print(f"leosim {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

"""Regenerate the bundled scenario YAML files and the case-study schedule CSV.

    python3 scripts/make_scenarios.py

Relay and ship positions are evenly spaced great-circle points between the
endpoints they serve; everything else comes from the scenario tables.
"""
from __future__ import annotations

from pathlib import Path

import numpy as np

from leosim.ingest import derive_schedules, parse_trace, schedules_to_csv

ROOT = Path(__file__).resolve().parents[1] / "src" / "leosim"
OUT = ROOT / "scenarios"

LONDON = (51.5074, -0.1278)
SW_IRELAND = (51.8000, -9.6598)
NEW_YORK = (40.7128, -74.0060)
SANTANDER = (43.462776, -3.805000)
USA_MCC = (50.334241, -74.0060)
DUBLIN = (53.342686, -6.267118)
ATHENS = (37.970833, 23.725110)

# test-bed receivers, keyed by their MCC index in the case study
TESTBEDS = {
    5: ("USA", USA_MCC),
    8: ("Athens", ATHENS),
    9: ("Xanthi", (41.130036, 24.886490)),
    13: ("Barcelona", (41.346176, 2.168365)),
    14: ("Malaga", (36.719444, -4.420000)),
    15: ("Antwerp", (51.260197, 4.402771)),
    16: ("SmartSantander", SANTANDER),
    17: ("Dublin", DUBLIN),
    18: ("Amsterdam", (52.377956, 4.897070)),
    19: ("Volos", (39.366669, 22.933332)),
    20: ("Geneva", (46.204391, 6.143158)),
    21: ("Ljubljana", (46.056947, 14.505751)),
    22: ("Warsaw", (52.237049, 21.017532)),
    23: ("Paris", (48.864716, 2.349014)),
    24: ("Monaco", (43.6155, 7.0550)),
}
# Sensor[k] -> (trace sensor id, receiving MCC index)
CASE_SENSORS = [("9", 20), ("24", 9), ("53", 14), ("90", 17), ("110", 13),
                ("213", 5), ("146", 18), ("19", 21), ("1", 22), ("135", 24)]


def gc_points(a, b, n):
    """n points strictly between a and b, evenly spaced along the great circle."""
    def unit(p):
        la, lo = np.radians(p)
        return np.array([np.cos(la) * np.cos(lo), np.cos(la) * np.sin(lo), np.sin(la)])
    p1, p2 = unit(a), unit(b)
    om = np.arccos(np.clip(p1 @ p2, -1, 1))
    out = []
    for k in range(1, n + 1):
        f = k / (n + 1)
        p = (np.sin((1 - f) * om) * p1 + np.sin(f * om) * p2) / np.sin(om)
        out.append((round(float(np.degrees(np.arcsin(p[2]))), 4), round(float(np.degrees(np.arctan2(p[1], p[0]))), 4)))
    return out


def nudge(p, k, step=0.0005):
    """Co-located sensors a few tens of metres apart."""
    return (round(p[0] + step * k, 6), round(p[1] + step * k, 6))


def gs(name, p, role):
    return f"  - {{name: {name!r}, latitude_deg: {p[0]}, longitude_deg: {p[1]}, role: {role}}}\n"


def write(name, comment, body):
    head = "".join(f"# {line}\n" if line else "#\n" for line in comment.strip().splitlines())
    (OUT / f"{name}.yaml").write_text(f"{head}name: {name}\n{body}")


def constellation(planes, per_plane, isl, phase_factor=0):
    return (
        "constellation:\n"
        f"  num_planes: {planes}\n  sats_per_plane: {per_plane}\n  altitude_km: 600\n"
        f"  inclination_deg: 53\n  phase_factor: {phase_factor}\n"
        "links:\n"
        f"  enable_intersatellite_links: {'true' if isl else 'false'}\n  min_elevation_deg: 25\n"
    )


SIMPLE = "sim_time_limit_s: 1200\nupdate_interval_s: 10\n"
PING_LN_NY = "ping_apps:\n  - {source: London, destination: New York, send_interval_s: 0.5}\n"


def simple():
    write(
        "simple_a",
        """
Two stations 658.64 km apart sharing single satellites, no ISLs.
150 satellites as 15 planes x 10; phase factor 1 staggers neighbouring planes.
1200 s at 2 pings/s = 2400 sends.
""",
        SIMPLE + constellation(15, 10, False, phase_factor=1)
        + "ground_stations:\n" + gs("London", LONDON, "sender") + gs("SW Ireland", SW_IRELAND, "receiver")
        + "ping_apps:\n  - {source: London, destination: SW Ireland, send_interval_s: 0.5}\n",
    )
    write(
        "london_ny_noisl",
        """
London to New York with nothing in between and ISLs off.
No satellite sees both ends, so every ping is unreachable.
""",
        SIMPLE + constellation(6, 60, False)
        + "ground_stations:\n" + gs("London", LONDON, "sender") + gs("New York", NEW_YORK, "receiver")
        + PING_LN_NY,
    )
    ships = gc_points(LONDON, NEW_YORK, 3)
    for suffix, isl in (("", True), ("_noisl", False)):
        write(
            f"simple_b{suffix}",
            f"""
London to New York over 360 satellites (6 x 60) with three ships as relays.
ISLs {'on' if isl else 'off'}. Ships let a route change planes.
""",
            SIMPLE + constellation(6, 60, isl)
            + "ground_stations:\n" + gs("London", LONDON, "sender") + gs("New York", NEW_YORK, "receiver")
            + "".join(gs(f"Ship[{i + 1}]", p, "relay") for i, p in enumerate(ships))
            + PING_LN_NY,
        )
    relays = gc_points(LONDON, NEW_YORK, 8)
    for name, isl in (("simple_c1", False), ("simple_c2", True)):
        write(
            name,
            f"""
London to New York with eight relay MCCs about 620 km apart, 360 satellites.
ISLs {'on' if isl else 'off'}; the c1/c2 pair isolates the effect of ISLs.
""",
            SIMPLE + constellation(6, 60, isl)
            + "ground_stations:\n" + gs("London", LONDON, "sender") + gs("New York", NEW_YORK, "receiver")
            + "".join(gs(f"MCC[{i + 2}]", p, "relay") for i, p in enumerate(relays))
            + PING_LN_NY,
        )
    write(
        "simple_d",
        """
London to New York over 600 satellites (10 x 60) with ISLs and no relays.
""",
        SIMPLE + constellation(10, 60, True)
        + "ground_stations:\n" + gs("London", LONDON, "sender") + gs("New York", NEW_YORK, "receiver")
        + PING_LN_NY,
    )


def sophisticated():
    ships3 = gc_points(SANTANDER, USA_MCC, 3)
    eu = [nudge(SANTANDER, k) for k in range(5)]
    us = [nudge(NEW_YORK, k) for k in range(5)]
    stations = (
        "".join(gs(f"Sensor[{k}]", p, "sender") for k, p in enumerate(eu))
        + "".join(gs(f"Sensor[{k + 5}]", p, "sender") for k, p in enumerate(us))
        + gs("MCC[5]", SANTANDER, "receiver") + gs("MCC[6]", USA_MCC, "receiver")
        + "".join(gs(f"Ship[{i + 1}]", p, "relay") for i, p in enumerate(ships3))
    )
    variants = {
        "sophisticated_a": ("""
Five co-located sensors in Santander ping a US MCC and five in New York ping
Santander. Each group starts together (0 s and 20 s), so its pings hit the
same first satellite at the same instant and collide.
""", [0.0] * 5 + [20.0] * 5),
        "sophisticated_a_staggered": ("""
Same layout as sophisticated_a with sends staggered 100 ms apart inside each
group, well beyond the 1 ms transmission window.
""", [round(0.1 * k, 3) for k in range(5)] + [round(20.05 + 0.1 * k, 3) for k in range(5)]),
    }
    for name, (comment, starts) in variants.items():
        apps = "".join(
            f"  - {{source: 'Sensor[{k}]', destination: '{'MCC[6]' if k < 5 else 'MCC[5]'}', "
            f"start_time_s: {starts[k]}, send_interval_s: 0.5}}\n"
            for k in range(10)
        )
        write(name, comment, "sim_time_limit_s: 307\nupdate_interval_s: 10\n" + constellation(6, 60, True)
              + "ground_stations:\n" + stations + "ping_apps:\n" + apps)

    ships5 = gc_points(SANTANDER, USA_MCC, 5)
    stations = (
        "".join(gs(f"Sensor[{k}]", nudge(SANTANDER, k), "sender") for k in range(5))
        + "".join(gs(f"Sensor[{k + 5}]", nudge(NEW_YORK, k), "sender") for k in range(5))
        + "".join(gs(f"Sensor[{k + 10}]", nudge(DUBLIN, k), "sender") for k in range(3))
        + "".join(gs(f"Sensor[{k + 13}]", nudge(ATHENS, k), "sender") for k in range(3))
        + gs("MCC[5]", SANTANDER, "receiver") + gs("MCC[6]", USA_MCC, "receiver")
        + gs("MCC[7]", ATHENS, "receiver") + gs("MCC[8]", DUBLIN, "receiver")
        + "".join(gs(f"Ship[{i + 1}]", p, "relay") for i, p in enumerate(ships5))
    )
    starts = [0, 10, 20, 30, 40, 200, 210, 220, 230, 240, 610, 620, 630, 810, 820, 830]
    dest = ["MCC[6]"] * 5 + ["MCC[5]"] * 5 + ["MCC[7]"] * 3 + ["MCC[8]"] * 3
    apps = "".join(
        f"  - {{source: 'Sensor[{k}]', destination: '{dest[k]}', start_time_s: {starts[k]}, send_interval_s: 300}}\n"
        for k in range(16)
    )
    for name, planes in (("sophisticated_b1", 6), ("sophisticated_b2", 10)):
        write(name, f"""
16 sensors over a full day: Santander to the US, New York to Santander, and
Dublin <-> Athens. Start times 10 s apart so no two sends overlap.
{planes * 60} satellites ({planes} x 60) with ISLs.
""", "sim_time_limit_s: 86400\nupdate_interval_s: 100\n" + constellation(planes, 60, True)
              + "ground_stations:\n" + stations + "ping_apps:\n" + apps)


def rewire():
    trace = (ROOT / "data" / "smartsantander_sample.csv").read_text()
    traces = parse_trace(trace)
    _, schedules = derive_schedules(traces)
    (ROOT / "data" / "rewire_schedules.csv").write_text(schedules_to_csv(schedules))
    located = {t.sensor_id: (t.location.latitude_deg, t.location.longitude_deg) for t in traces}

    ships = gc_points(SANTANDER, USA_MCC, 7)
    stations = (
        "".join(gs(f"Sensor[{k}]", located[sid], "sender") for k, (sid, _) in enumerate(CASE_SENSORS))
        + "".join(
            gs(f"MCC[{idx}]", p, "receiver" if idx in {m for _, m in CASE_SENSORS} else "relay")
            for idx, (_, p) in sorted(TESTBEDS.items())
        )
        + "".join(gs(f"Ship[{i + 1}]", p, "relay") for i, p in enumerate(ships))
    )
    apps = "".join(
        f"  - {{source: 'Sensor[{k}]', destination: 'MCC[{m}]', schedule_file: ../data/rewire_schedules.csv, "
        f"sensor_id: '{sid}'}}\n"
        for k, (sid, m) in enumerate(CASE_SENSORS)
    )
    for sats, planes in ((360, 6), (600, 10), (900, 15)):
        for isl in (True, False):
            name = f"rewire_{sats}_{'isl' if isl else 'noisl'}"
            write(name, f"""
Case study: ten Santander sensors replay one day of trace timestamps to
European test-beds (and one US MCC) over {sats} satellites, ISLs {'on' if isl else 'off'}.
Send times come from rewire_schedules.csv; the update interval is their GCD.
""", "sim_time_limit_s: 86400\nupdate_interval_s: 60\n" + constellation(planes, 60, isl)
                  + "ground_stations:\n" + stations + "ping_apps:\n" + apps)


if __name__ == "__main__":
    OUT.mkdir(exist_ok=True)
    simple()
    sophisticated()
    rewire()
    print("\n".join(sorted(p.name for p in OUT.glob("*.yaml"))))

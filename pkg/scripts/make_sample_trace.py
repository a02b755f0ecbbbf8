"""Regenerate the bundled SmartSantander-style sample trace.

The ten sensors use the published ids, urns and coordinates. First/last
reading times follow the published per-sensor start/end table and the number
of readings matches the published per-sensor send counts. Intervals are
whole minutes; measurement sensors are near-periodic (4-6 min), sensor 90
steps among 10/20/30 min, parking sensors are irregular.

    python scripts/make_sample_trace.py > src/leosim/data/smartsantander_sample.csv
"""
import csv
import random
import sys
from datetime import datetime, timedelta, timezone

DAY = datetime(2022, 12, 3, tzinfo=timezone.utc)

# id, urn token, lon, lat, first (h, m), last (h, m), readings
SENSORS = [
    (9, "t258", -3.80161, 43.46262, (1, 0), (23, 55), 266),
    (24, "t370", -3.81114, 43.46367, (0, 59), (23, 59), 270),
    (53, "t51", -3.80174, 43.47092, (1, 0), (23, 57), 269),
    (90, "t4074", -3.796732, 43.463869, (1, 0), (23, 54), 128),
    (110, "t506", -3.80545, 43.46385, (0, 58), (23, 56), 277),
    (213, "np3856", -3.7985026836395, 43.464431762695, (9, 24), (17, 57), 13),
    (146, "np3864", -3.7979302406311, 43.464511871338, (12, 52), (23, 32), 19),
    (19, "np3790", -3.799674987793, 43.463623046875, (5, 0), (18, 42), 15),
    (1, "np3870", -3.7974231243134, 43.464595794678, (1, 3), (17, 41), 115),
    (135, "np3873", -3.7970464229584, 43.464653015137, (6, 58), (23, 58), 102),
]


def near_periodic(rng, total, n, base=5):
    """n whole-minute gaps summing to total, each base-1, base or base+1."""
    gaps = [base] * n
    extra = total - base * n
    step = 1 if extra > 0 else -1
    for i in rng.sample(range(n), abs(extra)):
        gaps[i] += step
    return gaps


def stepped(rng, total, n):
    """Gaps of 10/20/30 min; one closing gap absorbs the remainder."""
    gaps = [10] * (n - 1)
    remaining = total - 10 * (n - 1)
    idx = list(range(n - 1))
    rng.shuffle(idx)
    for i in idx:
        if remaining - 10 < 10:
            break
        bump = 20 if remaining - 20 >= 10 and rng.random() < 0.3 else 10
        gaps[i] += bump
        remaining -= bump
    return gaps + [remaining]


def irregular(rng, total, n):
    cuts = sorted(rng.sample(range(1, total), n - 1))
    points = [0] + cuts + [total]
    return [b - a for a, b in zip(points, points[1:])]


def main(out=sys.stdout):
    rng = random.Random(20221203)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["sensor_id", "urn", "latitude", "longitude", "timestamp", "type", "value"])
    for sid, token, lon, lat, first, last, count in SENSORS:
        start = first[0] * 60 + first[1]
        total = last[0] * 60 + last[1] - start
        if token.startswith("np"):
            gaps = irregular(rng, total, count - 1)
        elif sid == 90:
            gaps = stepped(rng, total, count - 1)
        else:
            gaps = near_periodic(rng, total, count - 1)
        assert sum(gaps) == total and min(gaps) > 0, sid
        minute = start
        urn = f"urn:x-iot:smartsantander:u7jcfa:{token}"
        for i in range(count):
            ts = DAY + timedelta(minutes=minute)
            if token.startswith("np"):
                value = str(i % 2)
            else:
                value = f"{12.0 + 4.0 * rng.random():.1f}"
            writer.writerow([sid, urn, lat, lon, ts.strftime("%Y-%m-%dT%H:%M:%SZ"), "stable", value])
            if i < count - 1:
                minute += gaps[i]


if __name__ == "__main__":
    main()

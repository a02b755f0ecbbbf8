import pytest
import yaml

from leosim.config import ConfigError, bundled_scenarios, load_scenario, scenario_from_dict, scenario_path

from . import oracles
from .helpers import scenario_dict

BUNDLED = {
    "simple_a", "london_ny_noisl", "simple_b", "simple_b_noisl", "simple_c1", "simple_c2", "simple_d",
    "sophisticated_a", "sophisticated_a_staggered", "sophisticated_b1", "sophisticated_b2",
    "rewire_360_isl", "rewire_360_noisl", "rewire_600_isl", "rewire_600_noisl", "rewire_900_isl", "rewire_900_noisl",
}


def test_minimal_scenario():
    cfg = scenario_from_dict(scenario_dict())
    assert len(cfg.satellites) == 360
    assert cfg.ground_names == ["London", "Paris"]
    assert cfg.snapshot_count == 6
    assert cfg.tx_duration_s == 0.001
    assert cfg.link_rules.enable_intersatellite_links


def test_snapshot_count_rounds_up():
    assert scenario_from_dict(scenario_dict(sim_time_limit_s=307)).snapshot_count == 31
    assert scenario_from_dict(scenario_dict(sim_time_limit_s=86400, update_interval_s=60)).snapshot_count == 1440


@pytest.mark.parametrize("mutate,match", [
    (lambda d: d.update(colour="red"), "unknown key"),
    (lambda d: d["constellation"].update(planes=3), "unknown key"),
    (lambda d: d["links"].update(isl=True), "unknown key"),
    (lambda d: d["ground_stations"][0].update(height=3), "unknown key"),
    (lambda d: d["ping_apps"][0].update(rate=3), "unknown key"),
    (lambda d: d.pop("constellation"), "missing"),
    (lambda d: d.update(update_interval_s=0), "update_interval_s"),
    (lambda d: d.update(sim_time_limit_s="long"), "expected a number"),
    (lambda d: d["ground_stations"].append(dict(d["ground_stations"][0])), "unique"),
    (lambda d: d["ping_apps"].append({"source": "London", "destination": "Paris", "send_interval_s": 1}), "at most one"),
    (lambda d: d["ping_apps"][0].update(destination="Madrid"), "unknown ground station"),
    (lambda d: d["ground_stations"][0].update(role="boss"), "role"),
    (lambda d: d["ground_stations"][0].update(latitude_deg=100), "latitude"),
    (lambda d: d["ping_apps"][0].update(schedule=[1.0]), "not both"),
    (lambda d: d["links"].update(enable_intersatellite_links="yes"), "true/false"),
    (lambda d: d["constellation"].update(min_elevation_deg=10), "disagrees"),
    (lambda d: d["links"].pop("min_elevation_deg"), "min_elevation_deg"),
    (lambda d: d["constellation"].update(tle_file="x.tle"), "tle_file"),
    (lambda d: d["ping_apps"][0].update(schedule_file="s.csv"), "sensor_id"),
])
def test_invalid_scenarios_rejected(mutate, match):
    data = scenario_dict()
    mutate(data)
    with pytest.raises(ConfigError, match=match):
        scenario_from_dict(data)


def test_elevation_may_live_in_constellation():
    data = scenario_dict()
    data["links"].pop("min_elevation_deg")
    data["constellation"]["min_elevation_deg"] = 30
    assert scenario_from_dict(data).link_rules.min_elevation_deg == 30


def test_tle_constellation(tmp_path):
    name, l1, l2 = oracles.NOAA14
    (tmp_path / "sats.tle").write_text(f"{name}\n{l1}\n{l2}\n")
    data = scenario_dict(constellation={"tle_file": "sats.tle", "min_elevation_deg": 25})
    cfg = scenario_from_dict(data, tmp_path)
    assert len(cfg.satellites) == 1
    assert cfg.satellites[0].name == "NOAA 14"


def test_schedule_file_lookup(tmp_path):
    (tmp_path / "s.csv").write_text("sensor_id,relative_time_s\n7,30.0\n7,0.0\n8,5.0\n")
    data = scenario_dict()
    data["ping_apps"][0] = {"source": "London", "destination": "Paris", "schedule_file": "s.csv", "sensor_id": 7}
    cfg = scenario_from_dict(data, tmp_path)
    assert cfg.ping_apps[0].schedule == (0.0, 30.0)
    data["ping_apps"][0]["sensor_id"] = "99"
    with pytest.raises(ConfigError, match="not in"):
        scenario_from_dict(data, tmp_path)


def test_load_from_file_uses_stem_as_default_name(tmp_path):
    data = scenario_dict()
    del data["name"]
    p = tmp_path / "my_run.yaml"
    p.write_text(yaml.safe_dump(data))
    assert load_scenario(p).name == "my_run"
    (tmp_path / "bad.yaml").write_text("a: [1,\n")
    with pytest.raises(ConfigError, match="YAML"):
        load_scenario(tmp_path / "bad.yaml")
    (tmp_path / "empty.yaml").write_text("")
    with pytest.raises(ConfigError, match="empty"):
        load_scenario(tmp_path / "empty.yaml")


def test_missing_scenario():
    with pytest.raises(ConfigError):
        scenario_path("no_such_scenario")


def test_every_bundled_scenario_loads():
    assert set(bundled_scenarios()) == BUNDLED
    for name in BUNDLED:
        cfg = load_scenario(name)
        assert cfg.name == name
        assert cfg.ping_apps
        assert cfg.constellation.altitude_km == 600
        assert cfg.link_rules.min_elevation_deg == 25

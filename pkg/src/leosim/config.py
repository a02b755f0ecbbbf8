"""Scenario files: YAML documents whose keys mirror ScenarioConfig.

Unknown keys are rejected so a typo cannot silently fall back to a default.
Relative file references (TLE files, schedule CSVs) resolve against the
scenario file's directory.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

import yaml

from .geodesy import GeoPoint
from .ingest import read_schedule_csv
from .orbits import ConstellationSpec, OrbitalElements, build_constellation, elements_from_tle, read_tle_file
from .topology import GROUND, LinkRules, NodeRef
from .traffic import PingAppConfig

ROLES = ("sender", "receiver", "relay")

_TOP_KEYS = {
    "name", "description", "sim_time_limit_s", "update_interval_s", "tx_duration_s",
    "processing_delay_s", "histogram_bin_ms", "earth_phase_theta0_deg",
    "constellation", "links", "ground_stations", "ping_apps",
}
_REQUIRED_TOP = {"sim_time_limit_s", "update_interval_s", "constellation", "ground_stations"}
_CONSTELLATION_KEYS = {
    "num_planes", "sats_per_plane", "altitude_km", "inclination_deg", "raan_spread_deg",
    "phase_factor", "min_elevation_deg", "tle_file",
}
_LINK_KEYS = {"enable_intersatellite_links", "min_elevation_deg", "isl_mode", "max_isl_range_km"}
_GS_KEYS = {"name", "latitude_deg", "longitude_deg", "altitude_m", "role"}
_APP_KEYS = {
    "source", "destination", "start_time_s", "send_interval_s", "schedule",
    "schedule_file", "sensor_id", "count",
}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class GroundStation:
    name: str
    location: GeoPoint
    role: str = "relay"


@dataclass(frozen=True)
class ScenarioConfig:
    name: str
    sim_time_limit_s: float
    update_interval_s: float
    satellites: tuple[OrbitalElements, ...]
    link_rules: LinkRules
    ground_stations: tuple[GroundStation, ...]
    ping_apps: tuple[PingAppConfig, ...] = ()
    constellation: ConstellationSpec | None = None
    tle_file: str | None = None
    tx_duration_s: float = 0.001
    processing_delay_s: float = 0.0
    histogram_bin_ms: float = 0.1
    earth_phase_theta0_deg: float = 0.0
    raw: dict = field(default_factory=dict, compare=False, repr=False)

    def __post_init__(self):
        if not self.update_interval_s > 0:
            raise ConfigError("update_interval_s must be > 0")
        if not self.sim_time_limit_s > 0:
            raise ConfigError("sim_time_limit_s must be > 0")
        if self.tx_duration_s < 0 or self.processing_delay_s < 0:
            raise ConfigError("tx_duration_s and processing_delay_s must be >= 0")
        if not self.histogram_bin_ms > 0:
            raise ConfigError("histogram_bin_ms must be > 0")
        names = [g.name for g in self.ground_stations]
        if len(set(names)) != len(names):
            raise ConfigError("ground station names must be unique")
        sources = [app.source.id for app in self.ping_apps]
        if len(set(sources)) != len(sources):
            raise ConfigError("each ground station may source at most one ping app")
        for app in self.ping_apps:
            for ref in (app.source, app.destination):
                if ref.id >= len(self.ground_stations) or self.ground_stations[ref.id].name != ref.name:
                    raise ConfigError(f"ping app references undeclared ground station {ref.name!r}")

    @property
    def snapshot_count(self) -> int:
        return math.ceil(self.sim_time_limit_s / self.update_interval_s - 1e-9)

    @property
    def ground_names(self) -> list[str]:
        return [g.name for g in self.ground_stations]


def _check_keys(section: dict, allowed: set, where: str) -> None:
    if not isinstance(section, dict):
        raise ConfigError(f"{where}: expected a mapping, got {type(section).__name__}")
    unknown = sorted(set(section) - allowed)
    if unknown:
        raise ConfigError(f"{where}: unknown key(s) {', '.join(unknown)}")


def _num(section: dict, key: str, where: str, default=None, kind=float):
    value = section.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where}.{key}: expected a number, got {value!r}")
    if kind is int:
        if int(value) != value:
            raise ConfigError(f"{where}.{key}: expected an integer, got {value!r}")
        return int(value)
    return float(value)


def _satellites(c: dict, base_dir: Path):
    if "tle_file" in c:
        extra = set(c) - {"tle_file", "min_elevation_deg"}
        if extra:
            raise ConfigError(f"constellation: tle_file cannot be combined with {', '.join(sorted(extra))}")
        path = base_dir / c["tle_file"]
        if not path.is_file():
            raise ConfigError(f"constellation.tle_file: {path} not found")
        # no plane metadata in TLE sets: every satellite is its own plane
        sats = [elements_from_tle(rec, plane_index=i) for i, rec in enumerate(read_tle_file(path))]
        return tuple(sats), None, str(c["tle_file"])
    for key in ("num_planes", "sats_per_plane", "altitude_km"):
        if key not in c:
            raise ConfigError(f"constellation.{key} is required")
    try:
        spec = ConstellationSpec(
            num_planes=_num(c, "num_planes", "constellation", kind=int),
            sats_per_plane=_num(c, "sats_per_plane", "constellation", kind=int),
            altitude_km=_num(c, "altitude_km", "constellation"),
            inclination_deg=_num(c, "inclination_deg", "constellation", 53.0),
            raan_spread_deg=_num(c, "raan_spread_deg", "constellation", 360.0),
            phase_factor=_num(c, "phase_factor", "constellation", 0, kind=int),
            min_elevation_deg=_num(c, "min_elevation_deg", "constellation", 25.0),
        )
    except ValueError as exc:
        raise ConfigError(f"constellation: {exc}") from None
    return tuple(build_constellation(spec)), spec, None


def scenario_from_dict(data: dict, base_dir: Path | str = ".") -> ScenarioConfig:
    base_dir = Path(base_dir)
    _check_keys(data, _TOP_KEYS, "scenario")
    missing = sorted(_REQUIRED_TOP - set(data))
    if missing:
        raise ConfigError(f"scenario: missing required key(s) {', '.join(missing)}")

    c = data["constellation"]
    _check_keys(c, _CONSTELLATION_KEYS, "constellation")
    satellites, spec, tle_file = _satellites(c, base_dir)

    links = data.get("links") or {}
    _check_keys(links, _LINK_KEYS, "links")
    min_el = _num(links, "min_elevation_deg", "links")
    c_min_el = _num(c, "min_elevation_deg", "constellation")
    if min_el is not None and c_min_el is not None and min_el != c_min_el:
        raise ConfigError("links.min_elevation_deg disagrees with constellation.min_elevation_deg")
    min_el = min_el if min_el is not None else c_min_el
    if min_el is None:
        raise ConfigError("min_elevation_deg must be set in links or constellation")
    isl = links.get("enable_intersatellite_links", False)
    if not isinstance(isl, bool):
        raise ConfigError(f"links.enable_intersatellite_links: expected true/false, got {isl!r}")
    try:
        rules = LinkRules(
            enable_intersatellite_links=isl,
            min_elevation_deg=min_el,
            isl_mode=links.get("isl_mode", "ring"),
            max_isl_range_km=_num(links, "max_isl_range_km", "links"),
        )
    except ValueError as exc:
        raise ConfigError(f"links: {exc}") from None

    stations = []
    gs_list = data["ground_stations"]
    if not isinstance(gs_list, list):
        raise ConfigError("ground_stations: expected a list")
    for i, gs in enumerate(gs_list):
        where = f"ground_stations[{i}]"
        _check_keys(gs, _GS_KEYS, where)
        for key in ("name", "latitude_deg", "longitude_deg"):
            if key not in gs:
                raise ConfigError(f"{where}.{key} is required")
        role = gs.get("role", "relay")
        if role not in ROLES:
            raise ConfigError(f"{where}.role: {role!r} not one of {ROLES}")
        try:
            loc = GeoPoint(
                _num(gs, "latitude_deg", where), _num(gs, "longitude_deg", where),
                _num(gs, "altitude_m", where, 0.0),
            )
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None
        stations.append(GroundStation(str(gs["name"]), loc, role))
    refs = {g.name: NodeRef(i, GROUND, g.name) for i, g in enumerate(stations)}

    schedule_cache: dict[Path, dict] = {}
    apps = []
    for i, app in enumerate(data.get("ping_apps") or []):
        where = f"ping_apps[{i}]"
        _check_keys(app, _APP_KEYS, where)
        for key in ("source", "destination"):
            if app.get(key) not in refs:
                raise ConfigError(f"{where}.{key}: unknown ground station {app.get(key)!r}")
        schedule = None
        if "schedule_file" in app:
            if "sensor_id" not in app:
                raise ConfigError(f"{where}: schedule_file needs sensor_id")
            path = base_dir / app["schedule_file"]
            if path not in schedule_cache:
                if not path.is_file():
                    raise ConfigError(f"{where}.schedule_file: {path} not found")
                schedule_cache[path] = read_schedule_csv(path.read_text())
            sid = str(app["sensor_id"])
            if sid not in schedule_cache[path]:
                raise ConfigError(f"{where}.sensor_id: {sid!r} not in {path.name}")
            schedule = schedule_cache[path][sid]
        elif "schedule" in app:
            schedule = tuple(float(t) for t in app["schedule"])
        interval = _num(app, "send_interval_s", where)
        if schedule is not None and interval is not None:
            raise ConfigError(f"{where}: give send_interval_s or a schedule, not both")
        try:
            apps.append(
                PingAppConfig(
                    source=refs[app["source"]],
                    destination=refs[app["destination"]],
                    start_time_s=_num(app, "start_time_s", where, 0.0),
                    send_interval_s=interval,
                    schedule=schedule,
                    count=_num(app, "count", where, kind=int),
                )
            )
        except ValueError as exc:
            raise ConfigError(f"{where}: {exc}") from None

    try:
        return ScenarioConfig(
            name=str(data.get("name", "scenario")),
            sim_time_limit_s=_num(data, "sim_time_limit_s", "scenario"),
            update_interval_s=_num(data, "update_interval_s", "scenario"),
            satellites=satellites,
            link_rules=rules,
            ground_stations=tuple(stations),
            ping_apps=tuple(apps),
            constellation=spec,
            tle_file=tle_file,
            tx_duration_s=_num(data, "tx_duration_s", "scenario", 0.001),
            processing_delay_s=_num(data, "processing_delay_s", "scenario", 0.0),
            histogram_bin_ms=_num(data, "histogram_bin_ms", "scenario", 0.1),
            earth_phase_theta0_deg=_num(data, "earth_phase_theta0_deg", "scenario", 0.0),
            raw=data,
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def bundled_scenarios() -> list[str]:
    root = resources.files("leosim") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".yaml"))


def scenario_path(name_or_path: str | Path) -> Path:
    """A path to an existing file, or the name of a bundled scenario."""
    path = Path(name_or_path)
    if path.is_file():
        return path
    bundled = Path(str(resources.files("leosim") / "scenarios" / f"{name_or_path}.yaml"))
    if bundled.is_file():
        return bundled
    raise ConfigError(f"scenario {name_or_path!r}: no such file or bundled scenario")


def load_scenario(name_or_path: str | Path) -> ScenarioConfig:
    path = scenario_path(name_or_path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML ({exc})") from None
    if data is None:
        raise ConfigError(f"{path}: empty scenario file")
    data.setdefault("name", path.stem)
    return scenario_from_dict(data, path.parent)

"""LEO satellite constellation network simulator."""
from .config import ConfigError, GroundStation, ScenarioConfig, load_scenario, scenario_from_dict
from .engine import RunResult, compare_runs, compare_summaries, run_scenario
from .geodesy import GeoPoint, coverage_geometry, coverage_table, great_circle_distance
from .kernels import BACKEND
from .metrics import MetricsSummary, rtt_histogram, rtt_vector, summarize
from .orbits import ConstellationSpec, OrbitalElements, build_constellation, parse_tle, propagate
from .topology import LinkRules, build_snapshot

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ConfigError", "ConstellationSpec", "GeoPoint", "GroundStation", "LinkRules",
    "MetricsSummary", "OrbitalElements", "RunResult", "ScenarioConfig", "build_constellation",
    "build_snapshot", "compare_runs", "compare_summaries", "coverage_geometry", "coverage_table",
    "great_circle_distance", "load_scenario", "parse_tle", "propagate", "rtt_histogram",
    "rtt_vector", "run_scenario", "scenario_from_dict", "summarize",
]

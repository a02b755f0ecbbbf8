"""Spherical-Earth geometry: coordinates, distances, visibility and footprints.

Everything here works on a sphere of radius ``EARTH_RADIUS_KM``. Satellite
coverage follows the classic ground-station / satellite triangle:

    elevation + nadir + central angle = 90 deg
    sin(nadir) = Re / (Re + H) * cos(elevation)
    coverage fraction = (1 - cos(central angle)) / 2
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

EARTH_RADIUS_KM = 6378.0
EARTH_ROTATION_RAD_S = 7.2921159e-5
SPEED_OF_LIGHT_KM_S = 299792.458


class DomainError(ValueError):
    """Input outside the domain an operation is defined on."""


class DegenerateGeometryError(ValueError):
    """Two positions coincide, so a direction cannot be formed."""


@dataclass(frozen=True)
class GeoPoint:
    latitude_deg: float
    longitude_deg: float
    altitude_m: float = 0.0

    def __post_init__(self):
        if not -90.0 <= self.latitude_deg <= 90.0:
            raise DomainError(f"latitude {self.latitude_deg} outside [-90, 90]")
        if not -180.0 <= self.longitude_deg <= 180.0:
            raise DomainError(f"longitude {self.longitude_deg} outside [-180, 180]")
        if not math.isfinite(self.altitude_m) or self.altitude_m < 0:
            raise DomainError(f"altitude {self.altitude_m} m must be finite and >= 0")


@dataclass(frozen=True)
class EciPosition:
    x_km: float
    y_km: float
    z_km: float
    epoch_s: float = 0.0

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x_km, self.y_km, self.z_km])

    @property
    def norm_km(self) -> float:
        return math.sqrt(self.x_km**2 + self.y_km**2 + self.z_km**2)

    @classmethod
    def from_vector(cls, v, epoch_s: float = 0.0) -> "EciPosition":
        return cls(float(v[0]), float(v[1]), float(v[2]), epoch_s)


@dataclass(frozen=True)
class CoverageGeometry:
    altitude_H_km: float
    elevation_eps0_deg: float
    nadir_alpha0_deg: float
    central_beta0_deg: float
    slant_range_d_km: float
    cap_height_h_km: float
    coverage_fraction: float
    footprint_radius_km: float

    @property
    def orbit_radius_km(self) -> float:
        return EARTH_RADIUS_KM + self.altitude_H_km


def coverage_geometry(altitude_H_km: float, elevation_eps0_deg: float) -> CoverageGeometry:
    """Footprint geometry of a satellite at altitude H seen at minimum elevation eps0."""
    if not altitude_H_km > 0:
        raise DomainError(f"altitude must be > 0 km, got {altitude_H_km}")
    if not 0.0 <= elevation_eps0_deg <= 90.0:
        raise DomainError(f"elevation must be in [0, 90] deg, got {elevation_eps0_deg}")

    re = EARTH_RADIUS_KM
    r = re + altitude_H_km
    eps = math.radians(elevation_eps0_deg)
    alpha = math.asin(re / r * math.cos(eps))
    alpha_deg = math.degrees(alpha)
    beta_deg = 90.0 - elevation_eps0_deg - alpha_deg
    # clamp float noise at eps0 = 90 so beta stays >= 0
    beta_deg = max(beta_deg, 0.0)
    beta = math.radians(beta_deg)

    sin_eps = math.sin(eps)
    slant = -re * sin_eps + math.sqrt(re * re * sin_eps * sin_eps + r * r - re * re)
    cap = re * (1.0 - math.cos(beta))

    return CoverageGeometry(
        altitude_H_km=altitude_H_km,
        elevation_eps0_deg=elevation_eps0_deg,
        nadir_alpha0_deg=alpha_deg,
        central_beta0_deg=beta_deg,
        slant_range_d_km=slant,
        cap_height_h_km=cap,
        coverage_fraction=0.5 * (1.0 - math.cos(beta)),
        footprint_radius_km=re * beta,
    )


def coverage_table(altitudes_km, elevations_deg) -> list[list[float]]:
    """Coverage percentages, one row per altitude, rounded to 2 decimals."""
    altitudes_km = list(altitudes_km)
    elevations_deg = list(elevations_deg)
    if not altitudes_km or not elevations_deg:
        raise DomainError("altitudes and elevations must be non-empty")
    return [
        [round(coverage_geometry(h, e).coverage_fraction * 100.0, 2) for e in elevations_deg]
        for h in altitudes_km
    ]


def _unit_vector(p: GeoPoint) -> np.ndarray:
    lat = math.radians(p.latitude_deg)
    lon = math.radians(p.longitude_deg)
    return np.array([math.cos(lat) * math.cos(lon), math.cos(lat) * math.sin(lon), math.sin(lat)])


def great_circle_distance(a: GeoPoint, b: GeoPoint) -> float:
    """Surface arc length in km between two points (altitudes ignored)."""
    ua, ub = _unit_vector(a), _unit_vector(b)
    # atan2 form stays accurate for both tiny and near-antipodal separations
    angle = math.atan2(float(np.linalg.norm(np.cross(ua, ub))), float(np.dot(ua, ub)))
    return EARTH_RADIUS_KM * angle


def geodetic_to_eci(p: GeoPoint, t_s: float, theta0_rad: float = 0.0) -> EciPosition:
    """Inertial position of a ground point, Earth rotating about +z at EARTH_ROTATION_RAD_S."""
    radius = EARTH_RADIUS_KM + p.altitude_m / 1000.0
    lat = math.radians(p.latitude_deg)
    lon = math.radians(p.longitude_deg) + theta0_rad + EARTH_ROTATION_RAD_S * t_s
    return EciPosition(
        radius * math.cos(lat) * math.cos(lon),
        radius * math.cos(lat) * math.sin(lon),
        radius * math.sin(lat),
        t_s,
    )


def ground_positions_eci(points, t_s: float, theta0_rad: float = 0.0) -> np.ndarray:
    """Vectorized geodetic_to_eci, returns an (n, 3) array in km."""
    if not points:
        return np.zeros((0, 3))
    lat = np.radians([p.latitude_deg for p in points])
    lon = np.radians([p.longitude_deg for p in points]) + theta0_rad + EARTH_ROTATION_RAD_S * t_s
    radius = EARTH_RADIUS_KM + np.array([p.altitude_m for p in points]) / 1000.0
    return np.column_stack(
        (radius * np.cos(lat) * np.cos(lon), radius * np.cos(lat) * np.sin(lon), radius * np.sin(lat))
    )


def _as_vec(p) -> np.ndarray:
    if isinstance(p, EciPosition):
        return p.vector
    return np.asarray(p, dtype=float)


def elevation_angle(gs, sat) -> float:
    """Elevation in degrees of ``sat`` above the local horizon of surface point ``gs``.

    Both arguments are EciPosition (or 3-vectors in km).
    """
    g = _as_vec(gs)
    s = _as_vec(sat)
    g_norm = float(np.linalg.norm(g))
    if abs(g_norm - EARTH_RADIUS_KM) > 1.0:
        raise DomainError(f"ground position radius {g_norm:.3f} km is not on the surface")
    rel = s - g
    dist = float(np.linalg.norm(rel))
    if dist < 1e-3:
        raise DegenerateGeometryError("satellite and ground positions coincide")
    sin_el = float(np.dot(g / g_norm, rel)) / dist
    return math.degrees(math.asin(min(1.0, max(-1.0, sin_el))))


def elevation_matrix(ground: np.ndarray, sats: np.ndarray) -> np.ndarray:
    """Elevation angles (deg) for every ground/satellite pair, shape (n_ground, n_sats)."""
    if len(ground) == 0 or len(sats) == 0:
        return np.zeros((len(ground), len(sats)))
    up = ground / np.linalg.norm(ground, axis=1, keepdims=True)
    rel = sats[None, :, :] - ground[:, None, :]
    dist = np.linalg.norm(rel, axis=2)
    sin_el = np.einsum("gk,gsk->gs", up, rel) / dist
    return np.degrees(np.arcsin(np.clip(sin_el, -1.0, 1.0)))


def is_visible(gs, sat, min_elevation_deg: float) -> bool:
    return elevation_angle(gs, sat) >= min_elevation_deg


def propagation_delay_ms(distance_km):
    return distance_km / SPEED_OF_LIGHT_KM_S * 1000.0

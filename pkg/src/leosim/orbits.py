"""Orbital elements, constellation construction, circular propagation and TLE I/O.

Satellites are propagated as two-body circular orbits. TLE sets are parsed
column-exactly (including checksums) so real catalogues can seed a run, but
perturbation terms (BSTAR, mean-motion derivatives) are carried, not used.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .geodesy import EARTH_RADIUS_KM, DomainError, EciPosition

MU_EARTH_KM3_S2 = 398600.4418
SECONDS_PER_DAY = 86400.0
MAX_ECCENTRICITY = 0.01
# SGP/SDP split: anything slower is a deep-space object
MAX_NEAR_EARTH_PERIOD_S = 225.0 * 60.0


class UnsupportedEccentricityError(ValueError):
    pass


class TleChecksumError(ValueError):
    def __init__(self, line_number: int, expected: int, actual: int):
        self.line_number = line_number
        self.expected = expected
        self.actual = actual
        super().__init__(
            f"TLE line {line_number}: checksum mismatch, expected {expected}, line carries {actual}"
        )


class TleFormatError(ValueError):
    def __init__(self, line_number: int, columns: tuple[int, int], message: str):
        self.line_number = line_number
        self.columns = columns
        super().__init__(f"TLE line {line_number}, columns {columns[0]}-{columns[1]}: {message}")


def _normalize_deg(angle: float) -> float:
    a = math.fmod(angle, 360.0)
    if a < 0:
        a += 360.0
    # fmod of e.g. -1e-17 gives 360.0 after the shift
    return 0.0 if a >= 360.0 else a


def period_from_altitude(altitude_km: float) -> float:
    if not altitude_km > 0:
        raise DomainError(f"altitude must be > 0 km, got {altitude_km}")
    a = EARTH_RADIUS_KM + altitude_km
    return 2.0 * math.pi * math.sqrt(a**3 / MU_EARTH_KM3_S2)


def mean_motion_from_semimajor_axis(a_km: float) -> float:
    """Revolutions per day of a circular orbit of radius ``a_km``."""
    period = 2.0 * math.pi * math.sqrt(a_km**3 / MU_EARTH_KM3_S2)
    return SECONDS_PER_DAY / period


def semimajor_axis_from_mean_motion(rev_per_day: float) -> float:
    if not rev_per_day > 0:
        raise DomainError(f"mean motion must be > 0 rev/day, got {rev_per_day}")
    period = SECONDS_PER_DAY / rev_per_day
    return (MU_EARTH_KM3_S2 * (period / (2.0 * math.pi)) ** 2) ** (1.0 / 3.0)


@dataclass(frozen=True)
class OrbitalElements:
    semimajor_axis_km: float
    inclination_deg: float
    raan_deg: float
    eccentricity: float = 0.0
    arg_perigee_deg: float = 0.0
    mean_anomaly_deg: float = 0.0
    mean_motion_rev_per_day: float | None = None
    epoch_s: float = 0.0
    plane_index: int = 0
    slot_index: int = 0
    name: str = ""

    def __post_init__(self):
        if not self.semimajor_axis_km > EARTH_RADIUS_KM:
            raise DomainError(f"semimajor axis {self.semimajor_axis_km} km is inside the Earth")
        if not 0.0 <= self.eccentricity < 1.0:
            raise DomainError(f"eccentricity {self.eccentricity} outside [0, 1)")
        for name in ("inclination_deg", "raan_deg", "arg_perigee_deg", "mean_anomaly_deg"):
            object.__setattr__(self, name, _normalize_deg(getattr(self, name)))
        if self.mean_motion_rev_per_day is None:
            object.__setattr__(
                self, "mean_motion_rev_per_day", mean_motion_from_semimajor_axis(self.semimajor_axis_km)
            )

    @property
    def altitude_km(self) -> float:
        return self.semimajor_axis_km - EARTH_RADIUS_KM

    @property
    def period_s(self) -> float:
        return SECONDS_PER_DAY / self.mean_motion_rev_per_day

    @property
    def mean_motion_rad_s(self) -> float:
        return self.mean_motion_rev_per_day * 2.0 * math.pi / SECONDS_PER_DAY


@dataclass(frozen=True)
class ConstellationSpec:
    num_planes: int
    sats_per_plane: int
    altitude_km: float
    inclination_deg: float = 53.0
    raan_spread_deg: float = 360.0
    phase_factor: int = 0
    min_elevation_deg: float = 25.0

    def __post_init__(self):
        if self.num_planes < 1 or self.sats_per_plane < 1:
            raise DomainError("num_planes and sats_per_plane must be >= 1")
        if not self.altitude_km > 0:
            raise DomainError(f"altitude must be > 0 km, got {self.altitude_km}")
        if not 0.0 <= self.min_elevation_deg <= 90.0:
            raise DomainError(f"min elevation {self.min_elevation_deg} outside [0, 90]")

    @property
    def num_sats(self) -> int:
        return self.num_planes * self.sats_per_plane


def build_constellation(spec: ConstellationSpec) -> list[OrbitalElements]:
    """Walker-style constellation: P equally spaced planes of S equally phased satellites."""
    p, s = spec.num_planes, spec.sats_per_plane
    a = EARTH_RADIUS_KM + spec.altitude_km
    mean_motion = mean_motion_from_semimajor_axis(a)
    elements = []
    for j in range(p):
        raan = j * spec.raan_spread_deg / p
        for k in range(s):
            anomaly = k * 360.0 / s + j * spec.phase_factor * 360.0 / (p * s)
            elements.append(
                OrbitalElements(
                    semimajor_axis_km=a,
                    inclination_deg=spec.inclination_deg,
                    raan_deg=raan,
                    mean_anomaly_deg=anomaly,
                    mean_motion_rev_per_day=mean_motion,
                    plane_index=j,
                    slot_index=k,
                    name=f"sat[{j * s + k}]",
                )
            )
    return elements


def _rotation_columns(inc, raan):
    """In-plane basis vectors (ECI) of orbits with the given inclination/RAAN (radians)."""
    ci, si = np.cos(inc), np.sin(inc)
    co, so = np.cos(raan), np.sin(raan)
    # R3(raan) @ R1(inc) applied to (1,0,0) and (0,1,0)
    p_hat = np.stack([co, so, np.zeros_like(co)], axis=-1)
    q_hat = np.stack([-so * ci, co * ci, si], axis=-1)
    return p_hat, q_hat


def propagate(el: OrbitalElements, t_s: float) -> EciPosition:
    if el.eccentricity >= MAX_ECCENTRICITY:
        raise UnsupportedEccentricityError(
            f"eccentricity {el.eccentricity} >= {MAX_ECCENTRICITY}; only near-circular orbits are propagated"
        )
    u = math.radians(el.arg_perigee_deg + el.mean_anomaly_deg) + el.mean_motion_rad_s * (t_s - el.epoch_s)
    p_hat, q_hat = _rotation_columns(math.radians(el.inclination_deg), math.radians(el.raan_deg))
    pos = el.semimajor_axis_km * (math.cos(u) * p_hat + math.sin(u) * q_hat)
    return EciPosition.from_vector(pos, t_s)


class Fleet:
    """Array form of a satellite list, for propagating every satellite at once."""

    def __init__(self, elements: list[OrbitalElements]):
        bad = [e for e in elements if e.eccentricity >= MAX_ECCENTRICITY]
        if bad:
            raise UnsupportedEccentricityError(
                f"{bad[0].name or 'satellite'}: eccentricity {bad[0].eccentricity} >= {MAX_ECCENTRICITY}"
            )
        self.elements = list(elements)
        self.radius = np.array([e.semimajor_axis_km for e in elements], dtype=float)
        self.u0 = np.radians([e.arg_perigee_deg + e.mean_anomaly_deg for e in elements])
        self.rate = np.array([e.mean_motion_rad_s for e in elements], dtype=float)
        self.epoch = np.array([e.epoch_s for e in elements], dtype=float)
        self.plane = np.array([e.plane_index for e in elements], dtype=np.int64)
        self.slot = np.array([e.slot_index for e in elements], dtype=np.int64)
        self._p_hat, self._q_hat = _rotation_columns(
            np.radians([e.inclination_deg for e in elements]),
            np.radians([e.raan_deg for e in elements]),
        )
        # time-invariant data derived from the fleet (node lists, ISL index pairs)
        self.memo: dict = {}

    def __len__(self):
        return len(self.elements)

    def positions(self, t_s: float) -> np.ndarray:
        if not self.elements:
            return np.zeros((0, 3))
        u = self.u0 + self.rate * (t_s - self.epoch)
        return self.radius[:, None] * (np.cos(u)[:, None] * self._p_hat + np.sin(u)[:, None] * self._q_hat)


# --- TLE -------------------------------------------------------------------


@dataclass(frozen=True)
class TleRecord:
    name: str
    satellite_number: int
    classification: str
    international_designator: str
    epoch_year: int
    epoch_day_fraction: float
    mean_motion_dot: float
    mean_motion_ddot: float
    bstar_drag: float
    ephemeris_type: int
    element_number: int
    inclination_deg: float
    raan_deg: float
    eccentricity: float
    arg_perigee_deg: float
    mean_anomaly_deg: float
    mean_motion_rev_per_day: float
    revolution_number: int
    checksums: tuple[int, int] = field(default=(0, 0))


def tle_checksum(line: str) -> int:
    """Modulo-10 sum over the first 68 columns: digits count as themselves, '-' as 1."""
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


def _field(line: str, first: int, last: int) -> str:
    # columns are 1-based inclusive, as in the published layout
    return line[first - 1:last]


def _parse(conv, line, line_no, first, last, what):
    raw = _field(line, first, last)
    try:
        return conv(raw)
    except ValueError:
        raise TleFormatError(line_no, (first, last), f"cannot read {what} from {raw!r}") from None


def _implied_exponent(raw: str) -> float:
    """Decode fields like ' 10191-3' (= 0.10191e-3) or '-11606-4'."""
    raw = raw.strip()
    if not raw:
        return 0.0
    sign = -1.0 if raw[0] == "-" else 1.0
    if raw[0] in "+-":
        raw = raw[1:]
    mantissa, exp_sign, exponent = raw[:-2], raw[-2], raw[-1]
    if exp_sign not in "+-" or not mantissa.isdigit() or not exponent.isdigit():
        raise ValueError(raw)
    return sign * float("0." + mantissa) * 10.0 ** (int(exponent) * (-1 if exp_sign == "-" else 1))


def _parse_mean_motion_dot(raw: str) -> float:
    raw = raw.strip()
    if raw.startswith(("-.", "+.", ".")):
        raw = raw.replace(".", "0.", 1)
    return float(raw)


def parse_tle(name_line: str, line1: str, line2: str) -> TleRecord:
    line1 = line1.rstrip("\r\n")
    line2 = line2.rstrip("\r\n")
    for no, line in ((1, line1), (2, line2)):
        if len(line) != 69:
            raise TleFormatError(no, (1, 69), f"expected 69 characters, got {len(line)}")
        if line[0] != str(no):
            raise TleFormatError(no, (1, 1), f"line number {line[0]!r} != {no}")
        stated = _parse(int, line, no, 69, 69, "checksum")
        actual = tle_checksum(line)
        if stated != actual:
            raise TleChecksumError(no, actual, stated)

    return TleRecord(
        name=name_line.strip(),
        satellite_number=_parse(int, line1, 1, 3, 7, "satellite number"),
        classification=_field(line1, 8, 8),
        international_designator=_field(line1, 10, 17).strip(),
        epoch_year=_parse(int, line1, 1, 19, 20, "epoch year"),
        epoch_day_fraction=_parse(float, line1, 1, 21, 32, "epoch day"),
        mean_motion_dot=_parse(_parse_mean_motion_dot, line1, 1, 34, 43, "mean motion derivative"),
        mean_motion_ddot=_parse(_implied_exponent, line1, 1, 45, 52, "mean motion second derivative"),
        bstar_drag=_parse(_implied_exponent, line1, 1, 54, 61, "BSTAR"),
        ephemeris_type=_parse(int, line1, 1, 63, 63, "ephemeris type"),
        element_number=_parse(int, line1, 1, 65, 68, "element number"),
        inclination_deg=_parse(float, line2, 2, 9, 16, "inclination"),
        raan_deg=_parse(float, line2, 2, 18, 25, "RAAN"),
        eccentricity=_parse(lambda s: float("0." + s.strip()), line2, 2, 27, 33, "eccentricity"),
        arg_perigee_deg=_parse(float, line2, 2, 35, 42, "argument of perigee"),
        mean_anomaly_deg=_parse(float, line2, 2, 44, 51, "mean anomaly"),
        mean_motion_rev_per_day=_parse(float, line2, 2, 53, 63, "mean motion"),
        revolution_number=_parse(int, line2, 2, 64, 68, "revolution number"),
        checksums=(int(line1[68]), int(line2[68])),
    )


def _format_implied_exponent(value: float) -> str:
    if value == 0.0:
        return " 00000-0"
    sign = "-" if value < 0 else " "
    mag = abs(value)
    exponent = math.floor(math.log10(mag)) + 1
    mantissa = round(mag / 10.0**exponent * 1e5)
    if mantissa >= 100000:
        mantissa //= 10
        exponent += 1
    return f"{sign}{mantissa:05d}{'-' if exponent < 0 else '+'}{abs(exponent)}"


def _format_mean_motion_dot(value: float) -> str:
    text = f"{value: .8f}"
    return text.replace("0.", ".", 1)


def format_tle(rec: TleRecord) -> tuple[str, str, str]:
    """Serialize back to (name, line1, line2) using the standard column layout."""
    intl = rec.international_designator.ljust(8)
    body1 = (
        f"1 {rec.satellite_number:05d}{rec.classification} {intl} "
        f"{rec.epoch_year:02d}{rec.epoch_day_fraction:012.8f} "
        f"{_format_mean_motion_dot(rec.mean_motion_dot)} "
        f"{_format_implied_exponent(rec.mean_motion_ddot)} "
        f"{_format_implied_exponent(rec.bstar_drag)} "
        f"{rec.ephemeris_type:1d} {rec.element_number:4d}"
    )
    ecc = f"{rec.eccentricity:.7f}"[2:]
    body2 = (
        f"2 {rec.satellite_number:05d} {rec.inclination_deg:8.4f} {rec.raan_deg:8.4f} {ecc} "
        f"{rec.arg_perigee_deg:8.4f} {rec.mean_anomaly_deg:8.4f} "
        f"{rec.mean_motion_rev_per_day:11.8f}{rec.revolution_number:5d}"
    )
    return rec.name, body1 + str(tle_checksum(body1)), body2 + str(tle_checksum(body2))


def read_tle_file(path) -> list[TleRecord]:
    """Read 3-line groups (name, line 1, line 2); blank lines are skipped."""
    lines = [ln.rstrip("\r\n") for ln in Path(path).read_text().splitlines() if ln.strip()]
    if len(lines) % 3:
        raise TleFormatError(0, (1, 69), f"{path}: {len(lines)} non-blank lines is not a multiple of 3")
    return [parse_tle(*lines[i:i + 3]) for i in range(0, len(lines), 3)]


def elements_from_tle(rec: TleRecord, plane_index: int = 0, slot_index: int = 0) -> OrbitalElements:
    """Orbital elements at simulation t = 0 (the TLE epoch maps to the start of the run)."""
    period = SECONDS_PER_DAY / rec.mean_motion_rev_per_day
    if period > MAX_NEAR_EARTH_PERIOD_S:
        raise DomainError(
            f"{rec.name}: period {period / 60:.1f} min exceeds 225 min; deep-space objects are not supported"
        )
    return OrbitalElements(
        semimajor_axis_km=semimajor_axis_from_mean_motion(rec.mean_motion_rev_per_day),
        inclination_deg=rec.inclination_deg,
        raan_deg=rec.raan_deg,
        eccentricity=rec.eccentricity,
        arg_perigee_deg=rec.arg_perigee_deg,
        mean_anomaly_deg=rec.mean_anomaly_deg,
        mean_motion_rev_per_day=rec.mean_motion_rev_per_day,
        epoch_s=0.0,
        plane_index=plane_index,
        slot_index=slot_index,
        name=rec.name,
    )

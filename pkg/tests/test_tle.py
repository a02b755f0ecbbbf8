import pytest

from leosim.geodesy import DomainError
from leosim.orbits import (
    TleChecksumError, TleFormatError, elements_from_tle, format_tle, parse_tle, read_tle_file, tle_checksum,
)

from . import oracles

NAME, LINE1, LINE2 = oracles.NOAA14
# frozen from oracles: 86400 / 14.11711747, and the inverse Kepler relation at 600 km
NOAA14_PERIOD_S = 6120.23
MEAN_MOTION_600KM = 86400 / 5801.0609


def test_noaa14_fields():
    rec = parse_tle(NAME, LINE1, LINE2)
    assert rec.name == "NOAA 14"
    assert rec.satellite_number == 23455
    assert rec.classification == "U"
    assert rec.international_designator == "94089A"
    assert rec.epoch_year == 97
    assert rec.epoch_day_fraction == pytest.approx(320.90946019)
    assert rec.mean_motion_dot == pytest.approx(0.0000014)
    assert rec.mean_motion_ddot == 0.0
    assert rec.bstar_drag == pytest.approx(0.10191e-3)
    assert rec.ephemeris_type == 0
    assert rec.element_number == 262
    assert rec.inclination_deg == pytest.approx(99.0090)
    assert rec.raan_deg == pytest.approx(272.6745)
    assert rec.eccentricity == pytest.approx(0.0008546)
    assert rec.arg_perigee_deg == pytest.approx(223.1686)
    assert rec.mean_anomaly_deg == pytest.approx(136.8816)
    assert rec.mean_motion_rev_per_day == pytest.approx(14.11711747)
    assert rec.revolution_number == 14849
    assert rec.checksums == (1, 5)


def test_checksums_match_oracle():
    assert tle_checksum(LINE1) == oracles.tle_checksum(LINE1) == 1
    assert tle_checksum(LINE2) == oracles.tle_checksum(LINE2) == 5


def test_corrupted_digit_is_detected():
    bad = LINE1[:20] + ("8" if LINE1[20] != "8" else "7") + LINE1[21:]
    with pytest.raises(TleChecksumError) as err:
        parse_tle(NAME, bad, LINE2)
    assert err.value.line_number == 1
    assert err.value.actual == 1


def test_minus_sign_counts_as_one():
    assert tle_checksum("-" * 3 + " " * 65) == 3
    assert tle_checksum("1" + "+" * 67) == 1


@pytest.mark.parametrize("line1,line2", [(LINE1[:-1], LINE2), (LINE1, "3" + LINE2[1:])])
def test_format_errors(line1, line2):
    with pytest.raises(TleFormatError):
        parse_tle(NAME, line1, line2)


def test_unreadable_field_names_columns():
    body = LINE2[:8] + "  xx.xxx" + LINE2[16:68]
    body += str(tle_checksum(body))
    with pytest.raises(TleFormatError) as err:
        parse_tle(NAME, LINE1, body)
    assert err.value.columns == (9, 16)


def test_byte_exact_round_trip():
    assert format_tle(parse_tle(NAME, LINE1, LINE2)) == (NAME, LINE1, LINE2)


def test_round_trip_negative_exponent_fields():
    line1 = "1 25544U 98067A   08264.51782528 -.00002182  00000-0 -11606-4 0  292"
    line1 += str(tle_checksum(line1))
    line2 = "2 25544  51.6416 247.4627 0006703 130.5360 325.0288 15.72125391 5633"
    line2 += str(tle_checksum(line2))
    rec = parse_tle("ISS", line1, line2)
    assert rec.bstar_drag == pytest.approx(-0.11606e-4)
    assert rec.mean_motion_dot == pytest.approx(-0.00002182)
    assert format_tle(rec) == ("ISS", line1, line2)


def test_noaa14_period_and_elements():
    el = elements_from_tle(parse_tle(NAME, LINE1, LINE2), plane_index=3)
    assert el.period_s == pytest.approx(NOAA14_PERIOD_S, abs=0.01)
    assert el.plane_index == 3
    assert el.inclination_deg == pytest.approx(99.009)


def test_semimajor_axis_from_600km_mean_motion():
    line2 = f"2 99999  53.0000   0.0000 0000000   0.0000   0.0000 {MEAN_MOTION_600KM:11.8f}    1"
    line2 += str(tle_checksum(line2))
    line1 = "1 99999U 24001A   24001.00000000  .00000000  00000-0  00000-0 0    1"
    line1 += str(tle_checksum(line1))
    el = elements_from_tle(parse_tle("LEO", line1, line2))
    assert el.semimajor_axis_km == pytest.approx(6978.0, abs=1e-3)


def test_deep_space_rejected():
    line2 = "2 99999   0.0500 100.0000 0001000   0.0000   0.0000  1.00270000    1"
    line2 += str(tle_checksum(line2))
    line1 = "1 99999U 24001A   24001.00000000  .00000000  00000-0  00000-0 0    1"
    line1 += str(tle_checksum(line1))
    with pytest.raises(DomainError):
        elements_from_tle(parse_tle("GEO", line1, line2))


def test_read_tle_file(tmp_path):
    p = tmp_path / "sats.tle"
    p.write_text(f"{NAME}\n{LINE1}\n\n{LINE2}\n")
    assert [r.satellite_number for r in read_tle_file(p)] == [23455]
    p.write_text(f"{LINE1}\n{LINE2}\n")
    with pytest.raises(TleFormatError):
        read_tle_file(p)

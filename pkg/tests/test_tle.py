import math
from pathlib import Path

import pytest

from geognss.tle import (checksum, format_line1, format_line2, mean_motion_rev_day,
                         parse_tle, semi_major_axis_from_mean_motion)

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def make_set(name="TESTSAT", catalog=90001, inclination=55.0, raan=120.0,
             eccentricity=0.001, argp=10.0, anomaly=42.0, mean_motion=2.00562):
    l1 = format_line1(catalog, 2008, 82.0, intl_designator="08001A")
    l2 = format_line2(catalog, inclination, raan, eccentricity, argp, anomaly, mean_motion)
    return f"{name}\n{l1}\n{l2}\n"


def test_checksum_definition():
    # digits count face value, '-' counts 1, everything else 0
    assert checksum("1" * 68) == (68 % 10)
    assert checksum("-" * 68) == (68 % 10)
    assert checksum("A " * 34) == 0
    line = format_line2(90001, 55.0, 0.0, 0.0, 0.0, 0.0, 2.0)
    assert len(line) == 69
    assert int(line[68]) == checksum(line)


def test_corrupt_checksum_is_collected_not_fatal():
    good = make_set()
    lines = good.splitlines()
    bad_l2 = lines[2][:68] + str((int(lines[2][68]) + 1) % 10)
    text = "\n".join([lines[0], lines[1], bad_l2]) + "\n" + make_set(name="SECOND", catalog=90002)
    records, warnings = parse_tle(text)
    assert len(records) == 1
    assert records[0].satellite_name == "SECOND"
    assert len(warnings) == 1
    assert "checksum" in warnings[0]


def test_malformed_line_length():
    good = make_set()
    lines = good.splitlines()
    text = "\n".join([lines[0], lines[1][:-1], lines[2]])
    records, warnings = parse_tle(text)
    assert records == []
    assert "length" in warnings[0]


def test_semi_major_axis_from_mean_motion():
    # frozen from the scalar oracle a = (mu/n^2)^(1/3), n in rad/s
    assert semi_major_axis_from_mean_motion(2.00562) == pytest.approx(26560.489, abs=0.01)
    assert semi_major_axis_from_mean_motion(1.00273) == pytest.approx(42164.391, abs=0.01)


def test_parse_fields_and_order():
    text = make_set(anomaly=42.0) + make_set(name="B", catalog=90002, anomaly=84.0)
    records, warnings = parse_tle(text)
    assert warnings == []
    assert [r.satellite_name for r in records] == ["TESTSAT", "B"]
    rec = records[0]
    assert rec.catalog_number == 90001
    assert math.degrees(rec.elements.inclination) == pytest.approx(55.0, abs=1e-4)
    assert math.degrees(rec.elements.raan) == pytest.approx(120.0, abs=1e-4)
    assert rec.elements.eccentricity == pytest.approx(0.001, abs=1e-7)
    assert math.degrees(rec.elements.mean_anomaly_at_epoch) == pytest.approx(42.0, abs=1e-4)
    assert rec.elements.semi_major_axis == pytest.approx(26560.489, abs=0.01)
    assert rec.elements.epoch.iso() == "2008-03-22T00:00:00"


def test_two_line_sets_without_name():
    text = "\n".join(make_set().splitlines()[1:]) + "\n"
    records, warnings = parse_tle(text)
    assert warnings == []
    assert len(records) == 1
    assert records[0].satellite_name == ""


def test_round_trip_regenerates_identical_lines():
    for anomaly in (0.0, 42.0, 359.9999):
        text = make_set(anomaly=anomaly)
        records, _ = parse_tle(text)
        assert records[0].serialize() + "\n" == text


def test_shipped_constellation_round_trips():
    text = (SCENARIOS / "gps_nominal_2008.tle").read_text()
    records, warnings = parse_tle(text)
    assert warnings == []
    assert len(records) == 30
    regenerated = "\n".join(r.serialize() for r in records) + "\n"
    assert regenerated == text
    for rec in records:
        assert rec.elements.semi_major_axis == pytest.approx(26560.0, abs=0.01)
        assert math.degrees(rec.elements.inclination) == pytest.approx(55.0, abs=1e-4)


def test_mean_motion_round_trip():
    a = semi_major_axis_from_mean_motion(2.00562)
    assert mean_motion_rev_day(a) == pytest.approx(2.00562, abs=1e-9)

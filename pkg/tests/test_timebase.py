import numpy as np
import pytest

from geognss.timebase import EpochTime


def test_reference_epoch_is_j2000():
    assert EpochTime.from_calendar(2000, 1, 1, 12, 0, 0.0).seconds_since_reference == 0.0


def test_calendar_round_trip_exact_to_microsecond():
    rng = np.random.default_rng(7)
    for _ in range(200):
        year = int(rng.integers(1990, 2040))
        month = int(rng.integers(1, 13))
        day = int(rng.integers(1, 28))
        h, m = int(rng.integers(0, 24)), int(rng.integers(0, 60))
        s = float(rng.integers(0, 60)) + float(rng.integers(0, 1_000_000)) / 1e6
        t = EpochTime.from_calendar(year, month, day, h, m, s)
        back = EpochTime.from_calendar(*t.calendar())
        assert abs(back - t) < 1e-6


def test_ordering_total_and_consistent():
    times = [EpochTime(s) for s in (3.0, -1.0, 0.0, 2.5, 3.0)]
    ordered = sorted(times)
    assert [t.seconds_since_reference for t in ordered] == [-1.0, 0.0, 2.5, 3.0, 3.0]
    assert EpochTime(1.0) < EpochTime(1.5)
    assert EpochTime(1.0) == EpochTime(1.0)
    assert EpochTime(2.0) >= EpochTime(1.5)


def test_iso_round_trip():
    t = EpochTime.from_iso("2008-03-22T13:45:06")
    assert t.iso() == "2008-03-22T13:45:06"
    assert t.calendar() == (2008, 3, 22, 13, 45, 6.0)
    frac = EpochTime.from_iso("2008-03-22T00:00:00.250000")
    assert frac.iso() == "2008-03-22T00:00:00.25"


def test_year_day_maps_tle_epoch():
    # day 82 of leap year 2008 is March 22
    t = EpochTime.from_year_day(2008, 82.0)
    assert t.iso() == "2008-03-22T00:00:00"
    half = EpochTime.from_year_day(2008, 82.5)
    assert half.iso() == "2008-03-22T12:00:00"


def test_shifted_and_difference():
    t = EpochTime.from_iso("2008-03-22T00:00:00")
    assert (t.shifted(90.0) - t) == pytest.approx(90.0, abs=0)

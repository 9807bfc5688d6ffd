"""Continuous simulation time with calendar mapping.

A single idealized timescale anchored at the J2000.0 reference epoch
(2000-01-01 12:00:00). No leap seconds, no UT1/TT distinction: calendar
accessors are a pure relabeling of elapsed seconds.
"""
from __future__ import annotations

import functools
from dataclasses import dataclass
from datetime import datetime, timedelta

_J2000 = datetime(2000, 1, 1, 12, 0, 0)


@functools.total_ordering
@dataclass(frozen=True)
class EpochTime:
    """A point on the simulation timescale, stored as seconds past J2000.0."""

    seconds_since_reference: float

    @classmethod
    def from_calendar(cls, year: int, month: int, day: int,
                      hour: int = 0, minute: int = 0, second: float = 0.0) -> "EpochTime":
        whole = int(second)
        micros = round((second - whole) * 1e6)
        dt = datetime(year, month, day, hour, minute) + timedelta(seconds=whole, microseconds=micros)
        return cls((dt - _J2000).total_seconds())

    @classmethod
    def from_iso(cls, text: str) -> "EpochTime":
        return cls((datetime.fromisoformat(text) - _J2000).total_seconds())

    @classmethod
    def from_year_day(cls, year: int, day_of_year: float) -> "EpochTime":
        """TLE-style epoch: fractional day-of-year, 1.0 = Jan 1 00:00."""
        dt = datetime(year, 1, 1) + timedelta(days=day_of_year - 1.0)
        return cls((dt - _J2000).total_seconds())

    def _datetime(self) -> datetime:
        # timedelta resolves to whole microseconds, which bounds the
        # calendar round-trip error at 0.5 us.
        return _J2000 + timedelta(seconds=self.seconds_since_reference)

    def calendar(self) -> tuple[int, int, int, int, int, float]:
        dt = self._datetime()
        return (dt.year, dt.month, dt.day, dt.hour, dt.minute,
                dt.second + dt.microsecond / 1e6)

    def iso(self) -> str:
        dt = self._datetime()
        base = dt.strftime("%Y-%m-%dT%H:%M:%S")
        if dt.microsecond:
            base += f".{dt.microsecond:06d}".rstrip("0")
        return base

    def shifted(self, delta_seconds: float) -> "EpochTime":
        return EpochTime(self.seconds_since_reference + delta_seconds)

    def __sub__(self, other: "EpochTime") -> float:
        return self.seconds_since_reference - other.seconds_since_reference

    def __lt__(self, other: "EpochTime") -> bool:
        return self.seconds_since_reference < other.seconds_since_reference

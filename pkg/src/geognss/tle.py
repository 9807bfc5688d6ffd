"""NORAD two-line element ingestion and canonical serialization.

Accepts both 2-line sets and 3-line sets (name line first). Lines are
validated to exactly 69 characters with a matching modulo-10 checksum:
digits count their face value, '-' counts 1, everything else 0. A bad
record is skipped with a warning so one corrupt entry cannot take down
a constellation file; parsing of a single record is all-or-nothing.

Mean motion (rev/day) is converted to the semi-major axis through
a = (mu / n^2)^(1/3) with n in rad/s. Drag terms are ignored: the
propagator works on mean elements, and serialization writes them back
as zeros (the canonical form this package itself emits).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import MU_EARTH, SECONDS_PER_DAY
from .errors import ChecksumMismatch, MalformedLine
from .orbits import KeplerianElements
from .timebase import EpochTime

LINE_LENGTH = 69


def checksum(line: str) -> int:
    """Modulo-10 checksum over the first 68 characters."""
    total = 0
    for ch in line[:68]:
        if ch.isdigit():
            total += int(ch)
        elif ch == "-":
            total += 1
    return total % 10


@dataclass(frozen=True)
class TleRecord:
    satellite_name: str
    line1: str
    line2: str
    catalog_number: int
    epoch_year: int
    epoch_day: float
    elements: KeplerianElements
    classification: str = "U"
    intl_designator: str = ""
    element_set: int = 999
    rev_number: int = 1

    def serialize(self) -> str:
        """Regenerate canonical 2- or 3-line text, checksums included."""
        lines = []
        if self.satellite_name:
            lines.append(self.satellite_name)
        lines.append(format_line1(self.catalog_number, self.epoch_year, self.epoch_day,
                                  self.classification, self.intl_designator, self.element_set))
        lines.append(format_line2(
            self.catalog_number,
            math.degrees(self.elements.inclination),
            math.degrees(self.elements.raan),
            self.elements.eccentricity,
            math.degrees(self.elements.arg_perigee),
            math.degrees(self.elements.mean_anomaly_at_epoch),
            mean_motion_rev_day(self.elements.semi_major_axis),
            self.rev_number,
        ))
        return "\n".join(lines)


def mean_motion_rev_day(semi_major_axis: float) -> float:
    n = math.sqrt(MU_EARTH / semi_major_axis ** 3)  # rad/s
    return n * SECONDS_PER_DAY / (2.0 * math.pi)


def semi_major_axis_from_mean_motion(rev_per_day: float) -> float:
    n = rev_per_day * 2.0 * math.pi / SECONDS_PER_DAY
    return (MU_EARTH / n ** 2) ** (1.0 / 3.0)


def _check_line(line: str, index: int, expected_number: str) -> None:
    if len(line) != LINE_LENGTH:
        raise MalformedLine(index, f"length {len(line)}, expected {LINE_LENGTH}")
    if line[0] != expected_number:
        raise MalformedLine(index, f"line number {line[0]!r}, expected {expected_number!r}")
    if not line[68].isdigit():
        raise MalformedLine(index, "checksum column is not a digit")
    expected = checksum(line)
    got = int(line[68])
    if expected != got:
        raise ChecksumMismatch(index, expected, got)


def _parse_record(name: str, line1: str, line2: str, index1: int) -> TleRecord:
    _check_line(line1, index1, "1")
    _check_line(line2, index1 + 1, "2")
    try:
        catalog = int(line1[2:7])
        year2 = int(line1[18:20])
        epoch_day = float(line1[20:32])
        element_set = int(line1[64:68]) if line1[64:68].strip() else 0
        inclination = math.radians(float(line2[8:16]))
        raan = math.radians(float(line2[17:25]))
        eccentricity = float("0." + line2[26:33].strip())
        arg_perigee = math.radians(float(line2[34:42]))
        mean_anomaly = math.radians(float(line2[43:51]))
        mean_motion = float(line2[52:63])
        rev_number = int(line2[63:68]) if line2[63:68].strip() else 0
    except ValueError as exc:
        raise MalformedLine(index1, f"unparseable field: {exc}") from exc
    if mean_motion <= 0.0:
        raise MalformedLine(index1 + 1, f"non-positive mean motion {mean_motion}")
    year = year2 + (1900 if year2 >= 57 else 2000)
    elements = KeplerianElements(
        semi_major_axis=semi_major_axis_from_mean_motion(mean_motion),
        eccentricity=eccentricity,
        inclination=inclination,
        raan=raan,
        arg_perigee=arg_perigee,
        mean_anomaly_at_epoch=mean_anomaly,
        epoch=EpochTime.from_year_day(year, epoch_day),
    )
    return TleRecord(
        satellite_name=name,
        line1=line1,
        line2=line2,
        catalog_number=catalog,
        epoch_year=year,
        epoch_day=epoch_day,
        elements=elements,
        classification=line1[7],
        intl_designator=line1[9:17].rstrip(),
        element_set=element_set,
        rev_number=rev_number,
    )


def parse_tle(text: str) -> tuple[list[TleRecord], list[str]]:
    """Parse every element set in `text`, preserving file order.

    Returns (records, warnings); a record that fails validation is
    reported in `warnings` and skipped, parsing continues afterwards.
    """
    raw = [(i, ln.rstrip("\r\n")) for i, ln in enumerate(text.splitlines())]
    lines = [(i, ln) for i, ln in raw if ln.strip()]
    records: list[TleRecord] = []
    warnings: list[str] = []
    k = 0
    while k < len(lines):
        idx, ln = lines[k]
        name = ""
        if not ln.startswith("1 "):
            name = ln.strip()
            k += 1
            if k >= len(lines):
                warnings.append(f"line {idx}: trailing name {name!r} with no element lines")
                break
            idx, ln = lines[k]
        if k + 1 >= len(lines):
            warnings.append(f"line {idx}: element set truncated")
            break
        idx2, ln2 = lines[k + 1]
        try:
            records.append(_parse_record(name, ln, ln2, idx))
        except (ChecksumMismatch, MalformedLine, ValueError) as exc:
            warnings.append(str(exc))
        k += 2
    return records, warnings


def format_line1(catalog_number: int, epoch_year: int, epoch_day: float,
                 classification: str = "U", intl_designator: str = "",
                 element_set: int = 999) -> str:
    """Canonical line 1 with zeroed drag terms (mean elements only)."""
    body = (f"1 {catalog_number:05d}{classification} {intl_designator:<8s} "
            f"{epoch_year % 100:02d}{epoch_day:012.8f} "
            f" .00000000 "
            f" 00000-0 "
            f" 00000-0 "
            f"0 {element_set:4d}")
    body = f"{body:<68s}"[:68]
    return body + str(checksum(body))


def format_line2(catalog_number: int, inclination_deg: float, raan_deg: float,
                 eccentricity: float, arg_perigee_deg: float,
                 mean_anomaly_deg: float, mean_motion_rev_day: float,
                 rev_number: int = 1) -> str:
    ecc_str = f"{eccentricity:.7f}"[2:]
    body = (f"2 {catalog_number:05d} "
            f"{inclination_deg % 360.0:8.4f} "
            f"{raan_deg % 360.0:8.4f} "
            f"{ecc_str} "
            f"{arg_perigee_deg % 360.0:8.4f} "
            f"{mean_anomaly_deg % 360.0:8.4f} "
            f"{mean_motion_rev_day:11.8f}"
            f"{rev_number:5d}")
    body = f"{body:<68s}"[:68]
    return body + str(checksum(body))

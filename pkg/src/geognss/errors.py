"""Exception hierarchy shared by all simulator modules."""


class GeoGnssError(Exception):
    """Base class for all simulator errors."""


# orbit / time layer

class ChecksumMismatch(GeoGnssError):
    def __init__(self, line_index: int, expected: int, got: int):
        self.line_index = line_index
        self.expected = expected
        self.got = got
        super().__init__(
            f"TLE checksum mismatch on line {line_index}: expected {expected}, got {got}"
        )


class MalformedLine(GeoGnssError):
    def __init__(self, line_index: int, reason: str):
        self.line_index = line_index
        self.reason = reason
        super().__init__(f"malformed TLE line {line_index}: {reason}")


class NonConvergence(GeoGnssError):
    """Kepler solver failed in both Newton and bisection phases."""


class InvalidWalker(GeoGnssError):
    """Walker t/p/f triple violates t mod p = 0 or 0 <= f < p."""


class DegenerateFrame(GeoGnssError):
    """Receiver position and velocity do not span a local orbital frame."""


# antenna / link layer

class InvalidAntenna(GeoGnssError):
    """Non-physical antenna parameters or malformed pattern table."""


class OutOfRange(GeoGnssError):
    """Off-boresight angle outside [0, 180] degrees."""


class InvalidInput(GeoGnssError):
    """Non-positive distance or frequency in the link budget."""


# geometry layer

class InvalidPosition(GeoGnssError):
    """Position below the Earth surface."""


class DegenerateGeometry(GeoGnssError):
    """Coincident points where a direction is required."""


# tracking / metrics layer

class NonMonotonicTime(GeoGnssError):
    """Epochs of a series are not strictly increasing."""


class InsufficientSatellites(GeoGnssError):
    """Fewer than four satellites in a DOP evaluation."""


class EmptySeries(GeoGnssError):
    """No finite values left after exclusions."""


# scenario layer

class ParseError(GeoGnssError):
    """Scenario file is syntactically invalid or has unknown keys."""


class ValidationError(GeoGnssError):
    def __init__(self, field: str, constraint: str):
        self.field = field
        self.constraint = constraint
        super().__init__(f"invalid scenario field {field!r}: {constraint}")


class MissingFile(GeoGnssError):
    """A file referenced by the scenario does not exist."""


class IoError(GeoGnssError):
    def __init__(self, path: str, reason: str):
        self.path = path
        super().__init__(f"cannot write {path}: {reason}")

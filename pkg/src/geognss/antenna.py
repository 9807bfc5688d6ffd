"""Antenna gain models: tabulated patterns and the parabolic receive dish.

A pattern is an off-boresight angle -> gain table covering the whole
sphere (0 to 180 degrees), looked up by linear interpolation. The GNSS
transmit pattern ships as an editable data file next to this module so
link studies can swap it without touching code.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources

import numpy as np

from .constants import C_LIGHT
from .errors import InvalidAntenna, OutOfRange

DEFAULT_TX_PATTERN_FILE = "gnss_tx_l_band.pattern"


@dataclass(frozen=True)
class AntennaPattern:
    """Piecewise-linear gain table over off-boresight angle.

    Node angles are strictly increasing, starting at 0 and ending at
    180 degrees; interpolation therefore never extrapolates.
    """

    angles_deg: np.ndarray
    gains_dbi: np.ndarray
    name: str = ""

    def __post_init__(self):
        a = np.asarray(self.angles_deg, dtype=float)
        g = np.asarray(self.gains_dbi, dtype=float)
        if a.ndim != 1 or a.shape != g.shape or len(a) < 2:
            raise InvalidAntenna(f"pattern {self.name!r}: need matching 1-d angle/gain arrays")
        if not np.all(np.diff(a) > 0):
            raise InvalidAntenna(f"pattern {self.name!r}: angles must be strictly increasing")
        if a[0] != 0.0 or a[-1] != 180.0:
            raise InvalidAntenna(f"pattern {self.name!r}: must span 0 to 180 degrees")
        a = a.copy(); g = g.copy()
        a.flags.writeable = False
        g.flags.writeable = False
        object.__setattr__(self, "angles_deg", a)
        object.__setattr__(self, "gains_dbi", g)

    def gain(self, angle_deg):
        """Interpolated gain in dBi; exact at nodes. Scalar or array."""
        angle = np.asarray(angle_deg, dtype=float)
        if np.any(angle < 0.0) or np.any(angle > 180.0):
            raise OutOfRange(f"off-boresight angle outside [0, 180]: {angle_deg}")
        out = np.interp(angle, self.angles_deg, self.gains_dbi)
        return float(out) if out.ndim == 0 else out


def pattern_gain(pattern: AntennaPattern, angle_deg):
    return pattern.gain(angle_deg)


def parabolic_pattern(diameter_m: float, efficiency: float, frequency_mhz: float,
                      theta_3db_deg: float | None = None,
                      boresight_gain_dbi: float | None = None,
                      floor_dbi: float = -10.0) -> AntennaPattern:
    """Quadratic main-lobe model of a circular parabolic dish, 1 deg table.

    Boresight gain defaults to the aperture value 10*log10(eta*(pi*D*f/c)^2)
    and the half-power full width to 65.3*lambda/D degrees; both can be
    pinned explicitly when matching a measured antenna. Gain rolls off as
    G0 - 12*(theta/theta_3db)^2 dB (down 3 dB at half the full width) and
    is clamped at `floor_dbi`.
    """
    if diameter_m <= 0 or not 0 < efficiency <= 1 or frequency_mhz <= 0:
        raise InvalidAntenna(
            f"need positive diameter/frequency and efficiency in (0, 1]: "
            f"D={diameter_m}, eta={efficiency}, f={frequency_mhz}")
    wavelength = C_LIGHT / (frequency_mhz * 1e6)
    if boresight_gain_dbi is None:
        boresight_gain_dbi = 10.0 * math.log10(
            efficiency * (math.pi * diameter_m / wavelength) ** 2)
    if theta_3db_deg is None:
        theta_3db_deg = 65.3 * wavelength / diameter_m
    angles = np.arange(0.0, 181.0, 1.0)
    gains = np.maximum(boresight_gain_dbi - 12.0 * (angles / theta_3db_deg) ** 2, floor_dbi)
    return AntennaPattern(angles, gains,
                          name=f"parabolic D={diameter_m}m eta={efficiency} f={frequency_mhz}MHz")


def parse_pattern(text: str, name: str = "") -> AntennaPattern:
    """Read an `angle_deg gain_dbi` table; '#' starts a comment."""
    angles, gains = [], []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InvalidAntenna(f"pattern {name!r} line {lineno}: expected 'angle gain', got {raw!r}")
        try:
            angles.append(float(parts[0]))
            gains.append(float(parts[1]))
        except ValueError as exc:
            raise InvalidAntenna(f"pattern {name!r} line {lineno}: {exc}") from exc
    return AntennaPattern(np.array(angles), np.array(gains), name=name)


def load_pattern_file(path) -> AntennaPattern:
    with open(path, "r", encoding="ascii") as fh:
        return parse_pattern(fh.read(), name=str(path))


def default_tx_pattern() -> AntennaPattern:
    """The bundled L-band GNSS transmit pattern (editable data file)."""
    text = resources.files("geognss.data").joinpath(DEFAULT_TX_PATTERN_FILE).read_text()
    return parse_pattern(text, name=f"builtin:{DEFAULT_TX_PATTERN_FILE}")

"""Line-of-sight geometry: occultation, antenna angles, skyplot, Doppler.

All functions accept a single geometry as (3,) arrays or a time series
as (n, 3) arrays and broadcast elementwise over the leading axis.
"""
from __future__ import annotations

import math

import numpy as np

from .constants import C_LIGHT, R_EARTH
from .errors import DegenerateGeometry, InvalidPosition
from .linkbudget import CarrierBand
from .orbits import KeplerianElements, StateVector, propagate_series, _local_rotation
from .timebase import EpochTime

def _as2d(v) -> tuple[np.ndarray, bool]:
    a = np.asarray(v, dtype=float)
    if a.ndim == 1:
        return a[None, :], True
    return a, False


def _dot(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.einsum("ij,ij->i", a, b)


def occultation(rx_pos, tx_pos, mask_altitude_km: float):
    """Earth + atmosphere blockage test for the rx-tx segment.

    Returns (occluded, grazing_altitude_km). The grazing altitude is the
    minimum altitude of the segment above the surface: the interior
    closest approach to Earth's center when that point falls strictly
    between the endpoints, else the smaller endpoint altitude. Occluded
    means an interior minimum below the mask altitude.
    """
    rx, scalar = _as2d(rx_pos)
    tx, _ = _as2d(tx_pos)
    rn = np.linalg.norm(rx, axis=1)
    tn = np.linalg.norm(tx, axis=1)
    if np.any(rn < R_EARTH) or np.any(tn < R_EARTH):
        raise InvalidPosition("an endpoint lies below the Earth surface")

    d = tx - rx
    dd = _dot(d, d)
    if np.any(dd == 0.0):
        raise DegenerateGeometry("coincident endpoints")
    t = -_dot(rx, d) / dd
    interior = (t > 0.0) & (t < 1.0)
    closest = rx + t[:, None] * d
    grazing = np.where(interior,
                       np.linalg.norm(closest, axis=1) - R_EARTH,
                       np.minimum(rn, tn) - R_EARTH)
    occluded = interior & (grazing < mask_altitude_km)
    if scalar:
        return bool(occluded[0]), float(grazing[0])
    return occluded, grazing


def off_boresight_angles(rx_state: StateVector, tx_state: StateVector):
    """Angles between each nadir-pointing boresight and the LOS, degrees."""
    return off_boresight_angles_arrays(rx_state.position, tx_state.position)


def off_boresight_angles_arrays(rx_pos, tx_pos):
    rx, scalar = _as2d(rx_pos)
    tx, _ = _as2d(tx_pos)
    rel = rx - tx
    rng = np.linalg.norm(rel, axis=1)
    if np.any(rng == 0.0):
        raise DegenerateGeometry("coincident transmitter and receiver")
    tx_nadir = -tx / np.linalg.norm(tx, axis=1)[:, None]
    rx_nadir = -rx / np.linalg.norm(rx, axis=1)[:, None]
    tx_angle = np.degrees(np.arccos(np.clip(_dot(tx_nadir, rel / rng[:, None]), -1.0, 1.0)))
    rx_angle = np.degrees(np.arccos(np.clip(_dot(rx_nadir, -rel / rng[:, None]), -1.0, 1.0)))
    if scalar:
        return float(tx_angle[0]), float(rx_angle[0])
    return tx_angle, rx_angle


def local_frames(rx_pos, rx_vel) -> np.ndarray:
    """(n, 3, 3) stack of local orbital rotations, rows (radial, along, cross)."""
    rx, _ = _as2d(rx_pos)
    rv, _ = _as2d(rx_vel)
    h = np.cross(rx, rv)
    hn = np.linalg.norm(h, axis=1)
    rn = np.linalg.norm(rx, axis=1)
    if np.any(rn < 1e-9) or np.any(hn < 1e-9):
        raise DegenerateFrame("position and velocity are parallel or zero")
    radial = rx / rn[:, None]
    cross = h / hn[:, None]
    along = np.cross(cross, radial)
    return np.stack([radial, along, cross], axis=1)


def skyplot_series(frames: np.ndarray, rx_pos, tx_pos):
    """(azimuth, elevation) in degrees for per-epoch receiver/target pairs."""
    rx, scalar = _as2d(rx_pos)
    tx, _ = _as2d(tx_pos)
    rel = tx - rx
    rng = np.linalg.norm(rel, axis=1)
    if np.any(rng == 0.0):
        raise DegenerateGeometry("transmitter coincides with receiver")
    u = np.einsum("nij,nj->ni", frames, rel / rng[:, None])   # (radial, along, cross)
    elevation = np.degrees(np.arcsin(np.clip(-u[:, 0], -1.0, 1.0)))
    azimuth = np.degrees(np.arctan2(u[:, 2], u[:, 1])) % 360.0
    if scalar:
        return float(azimuth[0]), float(elevation[0])
    return azimuth, elevation


def skyplot_coords(rx_state: StateVector, tx_pos):
    """Receiver-frame look direction as (azimuth, elevation) in degrees.

    Elevation is 90 deg on the nadir boresight (plot center) and 0 deg
    in the (along-track, cross-track) plane; azimuth is measured in that
    plane from along-track toward cross-track.
    """
    tx, scalar = _as2d(tx_pos)
    frames = np.broadcast_to(
        _local_rotation(rx_state.position, rx_state.velocity), (len(tx), 3, 3))
    rx = np.broadcast_to(rx_state.position, (len(tx), 3))
    az, el = skyplot_series(frames, rx, tx)
    if scalar and not np.isscalar(az):
        return float(az[0]), float(el[0])
    return az, el


def doppler(rx_state: StateVector, tx_state: StateVector, band: CarrierBand):
    """Carrier Doppler shift in Hz, positive while the range is closing."""
    return doppler_arrays(rx_state.position, rx_state.velocity,
                          tx_state.position, tx_state.velocity, band)


def doppler_arrays(rx_pos, rx_vel, tx_pos, tx_vel, band: CarrierBand):
    rx, scalar = _as2d(rx_pos)
    rxv, _ = _as2d(rx_vel)
    tx, _ = _as2d(tx_pos)
    txv, _ = _as2d(tx_vel)
    rel = tx - rx
    rng = np.linalg.norm(rel, axis=1)
    if np.any(rng == 0.0):
        raise DegenerateGeometry("coincident transmitter and receiver")
    range_rate_km_s = _dot(rel, txv - rxv) / rng
    shift = -(band.frequency_mhz * 1e6 / C_LIGHT) * range_rate_km_s * 1e3
    if scalar:
        return float(shift[0])
    return shift


def doppler_rate(rx_elements: KeplerianElements, tx_elements: KeplerianElements,
                 band: CarrierBand, t: EpochTime, dt_s: float = 1.0):
    """Doppler slope in Hz/s via the central difference over +/- dt."""
    if dt_s <= 0:
        raise ValueError(f"dt must be positive, got {dt_s}")
    times = np.array([t.seconds_since_reference - dt_s, t.seconds_since_reference + dt_s])
    rp, rv = propagate_series(rx_elements, times)
    tp, tv = propagate_series(tx_elements, times)
    shifts = doppler_arrays(rp, rv, tp, tv, band)
    return float(shifts[1] - shifts[0]) / (2.0 * dt_s)
